#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qmaj/measure_grid.hpp"
#include "qmaj/rearrange.hpp"

namespace qmaj {

// Full-precision single-side curve: a "# qmaj-curve ..." line carrying side,
// domain end and flags, then "s,L" and one breakpoint per line.
void write_curve_csv(std::ostream& os, const LorenzCurve& c);
LorenzCurve read_curve_csv(std::istream& is);

// Both curves resampled on a shared abscissa: "s,L_plus,L_minus". The grid is
// uniform on [0, domain_end], or log-spaced on [s_min, domain_end].
struct ResampleOptions {
  int points = 2000;
  bool loglog = false;
  double s_min = 0.0;  // required when loglog
};

std::vector<double> resample_abscissa(const CurvePair& c, const ResampleOptions& opts);
void write_combined_csv(std::ostream& os, const CurvePair& c, const ResampleOptions& opts);

// Sampled grid function: "# qmaj-grid modes=.. L=.. N=.. hbar=.." then one
// value per line in cell order.
void write_grid_file(std::ostream& os, const SampledDistribution& f);
SampledDistribution read_grid_file(std::istream& is);

}  // namespace qmaj
