#include "chemowave/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

namespace chemowave {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

using File = std::unique_ptr<std::FILE, FileCloser>;

File open_or_throw(const std::string& path) {
    File f(std::fopen(path.c_str(), "w"));
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    return f;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    File f = open_or_throw(path);
    for (size_t j = 0; j < header.size(); ++j)
        std::fprintf(f.get(), "%s%s", j ? "," : "", header[j].c_str());
    std::fprintf(f.get(), "\n");
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("csv row width mismatch");
        for (size_t j = 0; j < row.size(); ++j)
            std::fprintf(f.get(), "%s%.17g", j ? "," : "", row[j]);
        std::fprintf(f.get(), "\n");
    }
}

void write_svg(const std::string& path, const std::string& title,
               const std::vector<PlotSeries>& series) {
    const double W = 720, H = 480;
    const double ml = 70, mr = 20, mt = 40, mb = 50;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!(x_hi > x_lo)) {
        x_lo -= 1;
        x_hi += 1;
    }
    if (!(y_hi > y_lo)) {
        y_lo -= 1;
        y_hi += 1;
    }
    const auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (W - ml - mr); };
    const auto py = [&](double y) { return H - mb - (y - y_lo) / (y_hi - y_lo) * (H - mt - mb); };

    File f = open_or_throw(path);
    std::fprintf(f.get(),
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                 "viewBox=\"0 0 %g %g\">\n<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n",
                 W, H, W, H, W, H);
    std::fprintf(f.get(),
                 "<text x=\"%g\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
                 "text-anchor=\"middle\">%s</text>\n",
                 W / 2, title.c_str());
    // Axes box and tick labels at the corners.
    std::fprintf(f.get(),
                 "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                 "stroke=\"black\"/>\n",
                 ml, mt, W - ml - mr, H - mt - mb);
    std::fprintf(f.get(),
                 "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\">%.6g</text>\n"
                 "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                 "text-anchor=\"end\">%.6g</text>\n",
                 ml, H - mb + 16.0, x_lo, W - mr, H - mb + 16.0, x_hi);
    std::fprintf(f.get(),
                 "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                 "text-anchor=\"end\">%.6g</text>\n"
                 "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                 "text-anchor=\"end\">%.6g</text>\n",
                 ml - 6.0, H - mb, y_lo, ml - 6.0, mt + 12.0, y_hi);

    double legend_y = mt + 16;
    for (const auto& s : series) {
        std::fprintf(f.get(), "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" points=\"",
                     s.color.c_str());
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            std::fprintf(f.get(), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
        }
        std::fprintf(f.get(), "\"/>\n");
        std::fprintf(f.get(),
                     "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                     "fill=\"%s\">%s</text>\n",
                     ml + 8.0, legend_y, s.color.c_str(), s.label.c_str());
        legend_y += 16;
    }
    std::fprintf(f.get(), "</svg>\n");
}

}  // namespace chemowave
