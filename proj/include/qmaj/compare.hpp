#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmaj/measure_grid.hpp"
#include "qmaj/rearrange.hpp"

namespace qmaj {

enum class Outcome { Majorizes, MajorizedBy, Equivalent, Incomparable };

const char* to_string(Outcome o);
inline bool comparable(Outcome o) { return o != Outcome::Incomparable; }
Outcome reversed(Outcome o);

// Location of a curve gap. gap is signed so that negative values mean the
// first argument fails to dominate the second there: on the positive side
// gap = L+_f - L+_g, on the negative side gap = L-_g - L-_f.
struct Witness {
  double s = 0.0;
  Side side = Side::Positive;
  double gap = 0.0;
};

struct MajorizationVerdict {
  Outcome outcome = Outcome::Equivalent;
  // Incomparable: where f falls furthest below g. Majorizes/MajorizedBy:
  // where the dominating curve leads most. Absent for Equivalent.
  std::optional<Witness> witness;
  // Most negative gap (f fails) and most positive gap (g fails).
  Witness forward_worst;
  Witness backward_worst;
  double tolerance = 0.0;
  double normalization_mismatch = 0.0;
  bool truncation_sensitive = false;
};

struct CompareOptions {
  double eps_cmp = 1e-4;
  double eps_norm = kNormTolerance;
  // A strict direction needs some gap above dominance_factor * eps_cmp.
  double dominance_factor = 10.0;
  // Ignore negative curves (for comparisons against nonnegative targets).
  bool positive_only = false;
};

MajorizationVerdict compare(const SampledDistribution& f, const SampledDistribution& g,
                            const CompareOptions& opts = {});
MajorizationVerdict compare(const SampledDistribution& f, const SampledDistribution& g,
                            const ReferenceDistribution& q, const CompareOptions& opts = {});
// Curve-level comparison; used by compare() and for curves read back from CSV.
MajorizationVerdict compare_curves(const CurvePair& f, const CurvePair& g,
                                   const CompareOptions& opts = {});

struct Statement4Result {
  bool forward = false;   // f over g at every u
  bool backward = false;  // g over f at every u
  double worst_forward = 0.0;
  double worst_backward = 0.0;
};

// Checks the (f - u q)^+ / (f + u q)^- integral inequalities on u_grid.
Statement4Result statement4_check(const SampledDistribution& f, const SampledDistribution& g,
                                  const std::vector<double>& u_grid,
                                  const CompareOptions& opts = {});
Statement4Result statement4_check(const SampledDistribution& f, const SampledDistribution& g,
                                  const ReferenceDistribution& q, const std::vector<double>& u_grid,
                                  const CompareOptions& opts = {});

// {0} together with every distinct |f_i|/q_i and |g_i|/q_i; the integrals are
// piecewise linear in u with kinks only there.
std::vector<double> ratio_breakpoints(const SampledDistribution& f, const SampledDistribution& g);
std::vector<double> ratio_breakpoints(const SampledDistribution& f, const SampledDistribution& g,
                                      const ReferenceDistribution& q);

using ReferenceFamily = std::function<ReferenceDistribution(double)>;

struct ThresholdResult {
  std::string parameter;
  double lower = 0.0;
  double upper = 0.0;
  double resolution = 0.0;
  Outcome lower_verdict = Outcome::Equivalent;
  Outcome upper_verdict = Outcome::Equivalent;
  int evaluations = 0;
  double estimate() const { return 0.5 * (lower + upper); }
};

// Locates where the comparable/incomparable status of (a, b) relative to
// family(t) flips inside [lo, hi]: a step scan over `steps` points followed by
// bisection down to `resolution`. Throws NumericError without a flip.
ThresholdResult scan_threshold(const SampledDistribution& a, const SampledDistribution& b,
                               const ReferenceFamily& family, const std::string& parameter,
                               double lo, double hi, double resolution,
                               const CompareOptions& opts = {}, int steps = 10);

struct ScanPoint {
  double parameter;
  Outcome outcome;
};

// Verdicts at each listed parameter (empirical monotonicity reports).
std::vector<ScanPoint> scan_report(const SampledDistribution& a, const SampledDistribution& b,
                                   const ReferenceFamily& family,
                                   const std::vector<double>& parameters,
                                   const CompareOptions& opts = {});

}  // namespace qmaj
