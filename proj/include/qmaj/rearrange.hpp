#pragma once

#include <cstddef>
#include <vector>

#include "qmaj/measure_grid.hpp"

namespace qmaj {

enum class Side { Positive, Negative };

const char* to_string(Side side);

// Piecewise-linear Lorenz curve. Breakpoints (s_k, L_k) start at (0, 0) with s
// strictly increasing; the curve is flat from the last breakpoint to
// domain_end. Slopes of the positive curve are the weighted decreasing
// rearrangement of f+ (relative: of f+/q), slopes of the negative curve the
// increasing rearrangement of f-.
//
// For relative curves s is measured in the q-scaled measure nu while L stays
// an integral against mu.
struct LorenzCurve {
  Side side = Side::Positive;
  std::vector<double> s{0.0};
  std::vector<double> L{0.0};
  double domain_end = 0.0;
  bool relative = false;
  bool truncation_sensitive = false;
  // Sup-norm error introduced by decimate(); zero for full curves.
  double decimation_error = 0.0;

  std::size_t size() const { return s.size(); }
  double final_value() const { return L.back(); }
  // Binary search plus linear interpolation; flat beyond the last breakpoint.
  double operator()(double at) const;
  // Slope of segment k (between breakpoints k and k+1).
  double slope(std::size_t k) const { return (L[k + 1] - L[k]) / (s[k + 1] - s[k]); }
};

struct CurvePair {
  LorenzCurve positive;
  LorenzCurve negative;
};

// D_f(t) = mu{f > t}; with q, nu{f > t q}.
double distribution_function(const SampledDistribution& f, double t);
double distribution_function(const SampledDistribution& f, const ReferenceDistribution& q, double t);
// C_f(t) = mu{f < t}; with q, nu{f < t q}.
double codistribution_function(const SampledDistribution& f, double t);
double codistribution_function(const SampledDistribution& f, const ReferenceDistribution& q,
                               double t);

CurvePair lorenz_curves(const SampledDistribution& f);
CurvePair relative_lorenz_curves(const SampledDistribution& f, const ReferenceDistribution& q);

// Drops breakpoints while the sup-norm deviation bound stays below `tolerance`.
// Keeps endpoints. The realized bound is stored in decimation_error.
LorenzCurve decimate(const LorenzCurve& curve, double tolerance = 1e-6);

// Integral of (f - u q)^+ (q = 1 when absent). Requires u >= 0.
double piecewise_plus_integral(const SampledDistribution& f, double u);
double piecewise_plus_integral(const SampledDistribution& f, double u, const ReferenceDistribution& q);
// Integral of (f + u q)^-. Requires u >= 0.
double piecewise_minus_integral(const SampledDistribution& f, double u);
double piecewise_minus_integral(const SampledDistribution& f, double u, const ReferenceDistribution& q);

// Evaluates both piecewise integrals for many u in O(log M) each after an
// O(M log M) setup over sorted ratios f_i / q_i.
class PiecewiseIntegrator {
 public:
  explicit PiecewiseIntegrator(const SampledDistribution& f);
  PiecewiseIntegrator(const SampledDistribution& f, const ReferenceDistribution& q);

  double plus(double u) const;
  double minus(double u) const;

 private:
  void build(const SampledDistribution& f, const double* q);

  // Positive cells by ratio, descending, with prefix sums of f dmu and q dmu.
  std::vector<double> pos_ratio_, pos_f_, pos_q_;
  // Negative cells by ratio, ascending.
  std::vector<double> neg_ratio_, neg_f_, neg_q_;
};

}  // namespace qmaj
