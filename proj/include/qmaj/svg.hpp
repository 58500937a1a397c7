#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmaj {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Static line plot with a fixed 640x480 viewport. Output depends only on the
// inputs. With loglog, both axes are log10 and points with x <= 0 or y == 0
// are dropped (negative curves are plotted by magnitude).
void write_svg(std::ostream& os, const std::vector<SvgSeries>& series, const std::string& title,
               const std::string& xlabel, const std::string& ylabel, bool loglog);

}  // namespace qmaj
