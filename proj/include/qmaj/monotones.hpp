#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmaj/measure_grid.hpp"

namespace qmaj {

// NV(f) = (||f||_1 - integral f) / 2.
double negative_volume(const SampledDistribution& f);

// (sum |f_i|^alpha dmu_i)^{1/alpha}; alpha >= 1.
double lp_norm(const SampledDistribution& f, double alpha);

// Scaled L2 norm: vacuum -> 1 and pure states -> 1 under either hbar
// convention. Requires a phase-space grid.
double purity(const SampledDistribution& f);

// Natural logarithm throughout; alpha > 1.
double renyi_entropy(const SampledDistribution& f, double alpha);
double tsallis_entropy(const SampledDistribution& f, double alpha);
double renyi_divergence(const SampledDistribution& f, const ReferenceDistribution& q, double alpha);

struct ExtremeValues {
  double max_positive = 0.0;      // max f+
  double neg_min_negative = 0.0;  // -min f-
};

ExtremeValues extreme_values(const SampledDistribution& f);

// 1/s at the first breakpoint where the positive Lorenz curve reaches 1; 0
// when it never does.
double g_monotone(const SampledDistribution& f);

// Inner product of the rearrangements of f and g (positive parts decreasing,
// negative parts increasing) over the merged breakpoints.
double phi_functional(const SampledDistribution& f, const SampledDistribution& g);

struct MonotoneReport {
  std::map<std::string, double> values;
  Hbar hbar = Hbar::Half;
  std::vector<double> alphas;
};

// `which` entries: nv, purity, max, min, g, lp:<alpha>, renyi:<alpha>,
// tsallis:<alpha>, divergence:<alpha> (needs q).
MonotoneReport monotone_report(const SampledDistribution& f, const std::vector<std::string>& which,
                               const ReferenceDistribution* q = nullptr);

}  // namespace qmaj
