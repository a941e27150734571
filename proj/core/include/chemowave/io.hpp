#pragma once

#include <string>
#include <vector>

namespace chemowave {

/// One named series for the minimal SVG plot.
struct PlotSeries {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<double> x, y;
};

/// Writes a CSV file with a one-line header and full-precision ("%.17g")
/// reals. rows must all have header.size() entries.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Minimal dependency-free SVG line plot: axes, tick labels, polylines.
void write_svg(const std::string& path, const std::string& title,
               const std::vector<PlotSeries>& series);

}  // namespace chemowave
