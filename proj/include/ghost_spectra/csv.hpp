// Long-format result rows and their CSV serialization.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gs {

struct ResultRow {
    std::string experiment_id;
    std::string model;
    int p = 0;
    int n = 0;
    std::string method;
    std::string metric;
    double value = 0.0;
    std::int64_t reps = 0;
    std::uint64_t seed = 0;
};

struct ResultTable {
    std::vector<ResultRow> rows;

    // Lexicographic on (experiment_id, model, p, n, method, metric).
    void sort_rows();

    // RFC 4180 quoting, LF newlines, '.' decimal point, 17 significant
    // digits for values.  Rows are emitted in stored order.
    std::string to_csv(bool header = true) const;
};

// Formats a double with up to 17 significant digits, round-trip exact.
std::string format_value(double v);

}  // namespace gs
