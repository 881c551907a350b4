// Minimal self-contained SVG line charts for eyeballing experiment output.
#pragma once

#include <string>
#include <vector>

namespace gs {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

// Renders axes, ticks, polylines and a legend; returns the SVG document.
std::string render_svg(const LinePlot& plot);

}  // namespace gs
