#include "ghost_spectra/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

namespace gs {

namespace {

// Quote a field only when RFC 4180 requires it.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ResultTable::sort_rows() {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.experiment_id, a.model, a.p, a.n, a.method, a.metric) <
               std::tie(b.experiment_id, b.model, b.p, b.n, b.method, b.metric);
    });
}

std::string ResultTable::to_csv(bool header) const {
    std::string out;
    if (header) out += "experiment_id,model,p,n,method,metric,value,reps,seed\n";
    char buf[64];
    for (const ResultRow& r : rows) {
        out += csv_field(r.experiment_id);
        out += ',';
        out += csv_field(r.model);
        out += ',';
        std::snprintf(buf, sizeof buf, "%d,%d", r.p, r.n);
        out += buf;
        out += ',';
        out += csv_field(r.method);
        out += ',';
        out += csv_field(r.metric);
        out += ',';
        out += format_value(r.value);
        out += ',';
        std::snprintf(buf, sizeof buf, "%lld,%llu",
                      static_cast<long long>(r.reps),
                      static_cast<unsigned long long>(r.seed));
        out += buf;
        out += '\n';
    }
    return out;
}

}  // namespace gs
