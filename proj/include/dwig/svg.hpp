#ifndef DWIG_SVG_HPP
#define DWIG_SVG_HPP

#include <string>
#include <vector>

namespace dwig {

struct SvgSeries {
    std::string label;
    std::vector<double> values;
};

/// Writes a static line chart; all series share the x grid. Purely a
/// derived artifact, never read back.
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<double>& x,
                          const std::vector<SvgSeries>& series);

} // namespace dwig

#endif
