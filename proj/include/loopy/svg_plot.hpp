#pragma once

#include <string>
#include <vector>

namespace loopy {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    double width = 720.0;
    double height = 360.0;
};

/// Self-contained SVG line chart with axes, ticks and a legend.
std::string render_svg(const PlotSpec& spec);

}  // namespace loopy
