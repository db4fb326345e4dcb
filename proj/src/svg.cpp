#include "dwig/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dwig/errors.hpp"

namespace dwig {

namespace {

constexpr double kW = 860.0, kH = 460.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

const char* kPalette[] = {"#1f6fb4", "#d0541e", "#2e8b57", "#8a4baf",
                          "#b01e46", "#64707c", "#9a7b12", "#13818a", "#555e8f"};

std::string fmt_tick(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

} // namespace

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<double>& x,
                          const std::vector<SvgSeries>& series) {
    if (x.size() < 2 || series.empty()) {
        throw ConfigError("chart needs at least two samples and one series");
    }
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const SvgSeries& s : series) {
        if (s.values.size() != x.size()) {
            throw DimensionMismatch("series length does not match x grid");
        }
        for (double v : s.values) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(ymax > ymin)) {
        ymax = ymin + 1.0;
        ymin -= 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    const double xmin = x.front(), xmax = x.back();

    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * ph; };

    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path);
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
        << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes, ticks, grid.
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    const int nticks = 6;
    for (int i = 0; i <= nticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / nticks;
        const double fy = ymin + (ymax - ymin) * i / nticks;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << kTop << "\" x2=\"" << px(fx)
            << "\" y2=\"" << kTop + ph << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"" << px(fx) << "\" y=\"" << kTop + ph + 16
            << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n"
            << "<line x1=\"" << kLeft << "\" y1=\"" << py(fy) << "\" x2=\"" << kLeft + pw
            << "\" y2=\"" << py(fy) << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n"
        << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << kTop + ph / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + ph / 2
        << ")\">" << y_label << "</text>\n</g>\n";

    // Polylines; dense logs are decimated to keep files small.
    const size_t stride = std::max<size_t>(1, x.size() / 4000);
    for (size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.2\" points=\"";
        for (size_t i = 0; i < x.size(); i += stride) {
            out << px(x[i]) << ',' << py(series[si].values[i]) << ' ';
        }
        if ((x.size() - 1) % stride != 0) {
            out << px(x.back()) << ',' << py(series[si].values.back());
        }
        out << "\"/>\n";
        out << "<text x=\"" << kLeft + pw - 8 << "\" y=\"" << kTop + 16 + 14 * si
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"" << color << "\">" << series[si].label << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace dwig
