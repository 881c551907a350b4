#include "ghost_spectra/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace gs {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 610.0, kTop = 50.0, kBottom = 370.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double place(double v, double a, double b) const {
        double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        return a + t * (b - a);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (int e = static_cast<int>(std::floor(lo)); e <= static_cast<int>(std::ceil(hi)); ++e)
                if (e >= lo - 1e-9 && e <= hi + 1e-9) out.push_back(std::pow(10.0, e));
            if (out.size() < 2) {
                out.clear();
                out.push_back(std::pow(10.0, lo));
                out.push_back(std::pow(10.0, hi));
            }
            return out;
        }
        const double span = hi - lo;
        const double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
        double mult = 1.0;
        while (span / (step * mult) > 6.0) mult *= (mult == 1.0 || mult == 5.0) ? 2.0 : 2.5;
        const double s = step * mult;
        for (double v = std::ceil(lo / s) * s; v <= hi + 1e-9 * span; v += s) out.push_back(v);
        return out;
    }
};

}  // namespace

std::string render_svg(const LinePlot& plot) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const PlotSeries& s : plot.series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series length mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (plot.log_x && !(x > 0.0)) throw std::invalid_argument("log axis needs positive x");
            if (plot.log_y && !(y > 0.0)) throw std::invalid_argument("log axis needs positive y");
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmin <= xmax) || !(ymin <= ymax))
        throw std::invalid_argument("plot has no finite points");
    if (xmin == xmax) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymin == ymax) {
        ymin -= 1.0;
        ymax += 1.0;
    }

    Axis ax, ay;
    ax.log = plot.log_x;
    ay.log = plot.log_y;
    auto pad = [](double lo, double hi, bool log) {
        double a = log ? std::log10(lo) : lo, b = log ? std::log10(hi) : hi;
        const double m = 0.06 * (b - a);
        return std::make_pair(a - m, b + m);
    };
    std::tie(ax.lo, ax.hi) = pad(xmin, xmax, plot.log_x);
    std::tie(ay.lo, ay.hi) = pad(ymin, ymax, plot.log_y);

    std::string svg;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\" font-size=\"12\">\n",
                  kWidth, kHeight, kWidth, kHeight);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">%s</text>\n",
                  0.5 * (kLeft + kRight), escape(plot.title).c_str());
    svg += buf;

    // Axes.
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                  kLeft, kBottom, kRight, kBottom, kLeft, kTop, kLeft, kBottom);
    svg += buf;

    for (double t : ax.ticks()) {
        const double x = ax.place(t, kLeft, kRight);
        if (x < kLeft - 1e-6 || x > kRight + 1e-6) continue;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n",
                      x, kBottom, x, kBottom + 5.0, x, kBottom + 18.0, fmt(t).c_str());
        svg += buf;
    }
    for (double t : ay.ticks()) {
        const double y = ay.place(t, kBottom, kTop);
        if (y < kTop - 1e-6 || y > kBottom + 1e-6) continue;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%s</text>\n",
                      kLeft - 5.0, y, kLeft, y, kLeft - 8.0, y + 4.0, fmt(t).c_str());
        svg += buf;
    }

    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n",
                  0.5 * (kLeft + kRight), kHeight - 12.0, escape(plot.x_label).c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%g\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 16 %g)\">%s</text>\n",
                  0.5 * (kTop + kBottom), 0.5 * (kTop + kBottom),
                  escape(plot.y_label).c_str());
    svg += buf;

    // Series polylines and legend.
    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const PlotSeries& ser = plot.series[s];
        const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
        std::string points;
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
            points += fmt(ax.place(ser.x[i], kLeft, kRight));
            points += ',';
            points += fmt(ay.place(ser.y[i], kBottom, kTop));
            points += ' ';
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"";
        svg += points;
        svg += "\"/>\n";
        const double ly = kTop + 16.0 * static_cast<double>(s);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" "
                      "stroke-width=\"2\"/>\n"
                      "<text x=\"%g\" y=\"%g\">%s</text>\n",
                      kRight - 120.0, ly, kRight - 96.0, ly, color, kRight - 90.0,
                      ly + 4.0, escape(ser.label).c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace gs
