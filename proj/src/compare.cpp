#include "qmaj/compare.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "qmaj/error.hpp"
#include "qmaj/parallel.hpp"

namespace qmaj {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Majorizes:
      return "Majorizes";
    case Outcome::MajorizedBy:
      return "MajorizedBy";
    case Outcome::Equivalent:
      return "Equivalent";
    case Outcome::Incomparable:
      return "Incomparable";
  }
  return "?";
}

Outcome reversed(Outcome o) {
  if (o == Outcome::Majorizes) return Outcome::MajorizedBy;
  if (o == Outcome::MajorizedBy) return Outcome::Majorizes;
  return o;
}

namespace {

struct GapExtremes {
  Witness lowest{0.0, Side::Positive, std::numeric_limits<double>::infinity()};
  Witness highest{0.0, Side::Positive, -std::numeric_limits<double>::infinity()};
};

// Extremes of the signed gap over the union of breakpoint abscissae. Both
// curves are piecewise linear between those points, so the extremes are
// attained there.
void scan_side(const LorenzCurve& f, const LorenzCurve& g, GapExtremes& ext) {
  const bool negative = f.side == Side::Negative;
  auto visit = [&](double x) {
    const double d = negative ? g(x) - f(x) : f(x) - g(x);
    if (d < ext.lowest.gap) ext.lowest = {x, f.side, d};
    if (d > ext.highest.gap) ext.highest = {x, f.side, d};
  };
  std::size_t i = 0, j = 0;
  while (i < f.s.size() || j < g.s.size()) {
    double x;
    if (j >= g.s.size() || (i < f.s.size() && f.s[i] <= g.s[j])) {
      x = f.s[i];
      if (j < g.s.size() && g.s[j] == x) ++j;
      ++i;
    } else {
      x = g.s[j++];
    }
    visit(x);
  }
  const double end = std::max(f.domain_end, g.domain_end);
  visit(end);
}

void check_normalization(double total_f, double total_g, const CompareOptions& opts) {
  const double mismatch = std::abs(total_f - total_g);
  if (mismatch > opts.eps_norm)
    throw NormalizationError("integrals differ by " + std::to_string(mismatch) +
                                 " (tolerance " + std::to_string(opts.eps_norm) + ")",
                             mismatch);
}

}  // namespace

MajorizationVerdict compare_curves(const CurvePair& f, const CurvePair& g, const CompareOptions& opts) {
  if (!(opts.eps_cmp > 0.0)) throw ConfigError("compare: tolerance must be positive");
  if (!opts.positive_only)
    check_normalization(f.positive.final_value() + f.negative.final_value(),
                        g.positive.final_value() + g.negative.final_value(), opts);

  GapExtremes ext;
  scan_side(f.positive, g.positive, ext);
  if (!opts.positive_only) scan_side(f.negative, g.negative, ext);

  MajorizationVerdict v;
  v.tolerance = opts.eps_cmp;
  v.forward_worst = ext.lowest;
  v.backward_worst = ext.highest;
  v.truncation_sensitive = f.positive.truncation_sensitive || g.positive.truncation_sensitive;
  v.normalization_mismatch = std::abs(f.positive.final_value() + f.negative.final_value() -
                                      g.positive.final_value() - g.negative.final_value());

  const double eps = opts.eps_cmp;
  const bool forward = ext.lowest.gap >= -eps;
  const bool backward = ext.highest.gap <= eps;
  const double strict = opts.dominance_factor * eps;
  if (forward && backward) {
    v.outcome = Outcome::Equivalent;
  } else if (forward) {
    v.outcome = ext.highest.gap > strict ? Outcome::Majorizes : Outcome::Equivalent;
    if (v.outcome == Outcome::Majorizes) v.witness = ext.highest;
  } else if (backward) {
    v.outcome = -ext.lowest.gap > strict ? Outcome::MajorizedBy : Outcome::Equivalent;
    if (v.outcome == Outcome::MajorizedBy) v.witness = ext.lowest;
  } else {
    v.outcome = Outcome::Incomparable;
    v.witness = ext.lowest;
  }
  return v;
}

MajorizationVerdict compare(const SampledDistribution& f, const SampledDistribution& g,
                            const CompareOptions& opts) {
  require_same_layout(f, g);
  if (!opts.positive_only) check_normalization(f.total_integral(), g.total_integral(), opts);
  return compare_curves(lorenz_curves(f), lorenz_curves(g), opts);
}

MajorizationVerdict compare(const SampledDistribution& f, const SampledDistribution& g,
                            const ReferenceDistribution& q, const CompareOptions& opts) {
  require_same_layout(f, g);
  require_same_layout(f, q.distribution());
  if (!opts.positive_only) check_normalization(f.total_integral(), g.total_integral(), opts);
  return compare_curves(relative_lorenz_curves(f, q), relative_lorenz_curves(g, q), opts);
}

namespace {

Statement4Result statement4_impl(const PiecewiseIntegrator& pf, const PiecewiseIntegrator& pg,
                                 const std::vector<double>& u_grid, const CompareOptions& opts) {
  if (u_grid.empty()) throw ConfigError("statement 4 check: empty u grid");
  Statement4Result r;
  double worst_f = std::numeric_limits<double>::infinity();
  double worst_b = std::numeric_limits<double>::infinity();
  for (double u : u_grid) {
    if (!(u >= 0.0)) throw ConfigError("statement 4 check: u must be >= 0");
    const double dp = pf.plus(u) - pg.plus(u);     // >= 0 when f leads
    const double dm = pg.minus(u) - pf.minus(u);   // >= 0 when f leads
    worst_f = std::min({worst_f, dp, dm});
    worst_b = std::min({worst_b, -dp, -dm});
  }
  r.worst_forward = worst_f;
  r.worst_backward = worst_b;
  r.forward = worst_f >= -opts.eps_cmp;
  r.backward = worst_b >= -opts.eps_cmp;
  return r;
}

std::vector<double> breakpoints_impl(const SampledDistribution& f, const SampledDistribution& g,
                                     const double* q) {
  std::vector<double> u{0.0};
  u.reserve(f.size() + g.size() + 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double qi = q ? q[i] : 1.0;
    if (f.value(i) != 0.0) u.push_back(std::abs(f.value(i)) / qi);
    if (g.value(i) != 0.0) u.push_back(std::abs(g.value(i)) / qi);
  }
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

}  // namespace

Statement4Result statement4_check(const SampledDistribution& f, const SampledDistribution& g,
                                  const std::vector<double>& u_grid, const CompareOptions& opts) {
  require_same_layout(f, g);
  check_normalization(f.total_integral(), g.total_integral(), opts);
  return statement4_impl(PiecewiseIntegrator(f), PiecewiseIntegrator(g), u_grid, opts);
}

Statement4Result statement4_check(const SampledDistribution& f, const SampledDistribution& g,
                                  const ReferenceDistribution& q, const std::vector<double>& u_grid,
                                  const CompareOptions& opts) {
  require_same_layout(f, g);
  check_normalization(f.total_integral(), g.total_integral(), opts);
  return statement4_impl(PiecewiseIntegrator(f, q), PiecewiseIntegrator(g, q), u_grid, opts);
}

std::vector<double> ratio_breakpoints(const SampledDistribution& f, const SampledDistribution& g) {
  require_same_layout(f, g);
  return breakpoints_impl(f, g, nullptr);
}

std::vector<double> ratio_breakpoints(const SampledDistribution& f, const SampledDistribution& g,
                                      const ReferenceDistribution& q) {
  require_same_layout(f, g);
  require_same_layout(f, q.distribution());
  return breakpoints_impl(f, g, q.values().data());
}

namespace {

std::vector<Outcome> evaluate_points(const SampledDistribution& a, const SampledDistribution& b,
                                     const ReferenceFamily& family,
                                     const std::vector<double>& params, const CompareOptions& opts) {
  std::vector<Outcome> out(params.size());
  const std::size_t workers = std::min<std::size_t>(thread_count(), params.size());
  auto eval = [&](std::size_t k) { out[k] = compare(a, b, family(params[k]), opts).outcome; };
  if (workers <= 1) {
    for (std::size_t k = 0; k < params.size(); ++k) eval(k);
    return out;
  }
  for (std::size_t start = 0; start < params.size(); start += workers) {
    std::vector<std::future<void>> batch;
    for (std::size_t k = start; k < std::min(params.size(), start + workers); ++k)
      batch.push_back(std::async(std::launch::async, eval, k));
    for (auto& fut : batch) fut.get();
  }
  return out;
}

}  // namespace

ThresholdResult scan_threshold(const SampledDistribution& a, const SampledDistribution& b,
                               const ReferenceFamily& family, const std::string& parameter,
                               double lo, double hi, double resolution, const CompareOptions& opts,
                               int steps) {
  if (!(hi > lo)) throw ConfigError("scan: bracket must satisfy lo < hi");
  if (!(resolution > 0.0)) throw ConfigError("scan: resolution must be positive");
  if (steps < 2) throw ConfigError("scan: need at least two step points");

  std::vector<double> params(steps);
  for (int k = 0; k < steps; ++k) params[k] = lo + (hi - lo) * k / (steps - 1);
  const std::vector<Outcome> verdicts = evaluate_points(a, b, family, params, opts);

  ThresholdResult r;
  r.parameter = parameter;
  r.resolution = resolution;
  r.evaluations = steps;
  const bool start = comparable(verdicts[0]);
  int flip = -1;
  for (int k = 1; k < steps; ++k) {
    if (comparable(verdicts[k]) != start) {
      flip = k;
      break;
    }
  }
  if (flip < 0)
    throw NumericError("scan: no sign change in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]; verdict " + to_string(verdicts[0]) + " throughout");

  double left = params[flip - 1], right = params[flip];
  Outcome left_v = verdicts[flip - 1], right_v = verdicts[flip];
  while (right - left > resolution) {
    const double mid = 0.5 * (left + right);
    const Outcome v = compare(a, b, family(mid), opts).outcome;
    ++r.evaluations;
    if (comparable(v) == start) {
      left = mid;
      left_v = v;
    } else {
      right = mid;
      right_v = v;
    }
  }
  r.lower = left;
  r.upper = right;
  r.lower_verdict = left_v;
  r.upper_verdict = right_v;
  return r;
}

std::vector<ScanPoint> scan_report(const SampledDistribution& a, const SampledDistribution& b,
                                   const ReferenceFamily& family,
                                   const std::vector<double>& parameters, const CompareOptions& opts) {
  const auto verdicts = evaluate_points(a, b, family, parameters, opts);
  std::vector<ScanPoint> out;
  for (std::size_t k = 0; k < parameters.size(); ++k) out.push_back({parameters[k], verdicts[k]});
  return out;
}

}  // namespace qmaj
