#include "qmaj/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "qmaj/error.hpp"

namespace qmaj {

const char* to_string(Side side) { return side == Side::Positive ? "positive" : "negative"; }

double LorenzCurve::operator()(double at) const {
  if (at <= s.front()) return L.front();
  const auto it = std::upper_bound(s.begin(), s.end(), at);
  if (it == s.end()) return L.back();
  const std::size_t k = static_cast<std::size_t>(it - s.begin()) - 1;
  const double t = (at - s[k]) / (s[k + 1] - s[k]);
  return L[k] + t * (L[k + 1] - L[k]);
}

namespace {

double nu_total(const SampledDistribution& f, const double* q) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += static_cast<long double>(q ? q[i] * f.weight(i) : f.weight(i));
  return static_cast<double>(acc);
}

// Shared by regular (q == nullptr) and relative curves so that q = 1 reproduces
// the regular curve bit for bit.
LorenzCurve build_curve(const SampledDistribution& f, const double* q, Side side) {
  using Key = std::pair<double, std::uint32_t>;
  std::vector<Key> keys;
  const auto vals = f.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = vals[i];
    if ((side == Side::Positive && v > 0.0) || (side == Side::Negative && v < 0.0))
      keys.emplace_back(q ? v / q[i] : v, static_cast<std::uint32_t>(i));
  }
  if (side == Side::Positive) {
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
  } else {
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
      return a.first < b.first || (a.first == b.first && a.second < b.second);
    });
  }

  LorenzCurve c;
  c.side = side;
  c.relative = q != nullptr;
  c.s.reserve(keys.size() + 1);
  c.L.reserve(keys.size() + 1);
  long double s_acc = 0.0L;
  long double l_acc = 0.0L;
  for (const auto& [ratio, idx] : keys) {
    const double w = f.weight(idx);
    s_acc += static_cast<long double>(q ? q[idx] * w : w);
    l_acc += static_cast<long double>(vals[idx] * w);
    const double s_new = static_cast<double>(s_acc);
    if (s_new == c.s.back()) {
      // Weight below the resolution of the running sum.
      c.L.back() = static_cast<double>(l_acc);
    } else {
      c.s.push_back(s_new);
      c.L.push_back(static_cast<double>(l_acc));
    }
  }
  c.domain_end = std::max(nu_total(f, q), c.s.back());
  return c;
}

}  // namespace

CurvePair lorenz_curves(const SampledDistribution& f) {
  return {build_curve(f, nullptr, Side::Positive), build_curve(f, nullptr, Side::Negative)};
}

CurvePair relative_lorenz_curves(const SampledDistribution& f, const ReferenceDistribution& q) {
  require_same_layout(f, q.distribution());
  const double* qv = q.values().data();
  CurvePair p{build_curve(f, qv, Side::Positive), build_curve(f, qv, Side::Negative)};
  p.positive.truncation_sensitive = p.negative.truncation_sensitive = q.truncation_sensitive();
  return p;
}

double distribution_function(const SampledDistribution& f, double t) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.value(i) > t) acc += f.weight(i);
  return static_cast<double>(acc);
}

double distribution_function(const SampledDistribution& f, const ReferenceDistribution& q, double t) {
  require_same_layout(f, q.distribution());
  const auto qv = q.values();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.value(i) > t * qv[i]) acc += qv[i] * f.weight(i);
  return static_cast<double>(acc);
}

double codistribution_function(const SampledDistribution& f, double t) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.value(i) < t) acc += f.weight(i);
  return static_cast<double>(acc);
}

double codistribution_function(const SampledDistribution& f, const ReferenceDistribution& q,
                               double t) {
  require_same_layout(f, q.distribution());
  const auto qv = q.values();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.value(i) < t * qv[i]) acc += qv[i] * f.weight(i);
  return static_cast<double>(acc);
}

LorenzCurve decimate(const LorenzCurve& curve, double tolerance) {
  const std::size_t n = curve.size();
  if (n <= 2) return curve;
  LorenzCurve out = curve;
  out.s.assign(1, curve.s[0]);
  out.L.assign(1, curve.L[0]);
  double worst = 0.0;
  std::size_t anchor = 0;
  // A concave (or convex) piece on [a, b] with end slopes m1, m2 deviates from
  // its chord by at most (b - a)|m1 - m2| / 4.
  std::size_t k = anchor + 1;
  while (k < n - 1) {
    const double first = curve.slope(anchor);
    const double last = curve.slope(k);
    const double bound = (curve.s[k + 1] - curve.s[anchor]) * std::abs(first - last) / 4.0;
    if (bound > tolerance) {
      // Close the segment at k.
      const double prev_bound = k > anchor + 1
                                    ? (curve.s[k] - curve.s[anchor]) *
                                          std::abs(first - curve.slope(k - 1)) / 4.0
                                    : 0.0;
      worst = std::max(worst, prev_bound);
      out.s.push_back(curve.s[k]);
      out.L.push_back(curve.L[k]);
      anchor = k;
    }
    ++k;
  }
  if (anchor + 1 < n - 1) {
    worst = std::max(worst, (curve.s[n - 1] - curve.s[anchor]) *
                                std::abs(curve.slope(anchor) - curve.slope(n - 2)) / 4.0);
  }
  out.s.push_back(curve.s[n - 1]);
  out.L.push_back(curve.L[n - 1]);
  out.decimation_error = std::max(curve.decimation_error, worst);
  return out;
}

namespace {

void require_nonnegative(double u) {
  if (!(u >= 0.0)) throw ConfigError("piecewise integral: u must be >= 0");
}

double plus_impl(const SampledDistribution& f, double u, const double* q) {
  require_nonnegative(u);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f.value(i) - u * (q ? q[i] : 1.0);
    if (d > 0.0) acc += static_cast<long double>(d * f.weight(i));
  }
  return static_cast<double>(acc);
}

double minus_impl(const SampledDistribution& f, double u, const double* q) {
  require_nonnegative(u);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f.value(i) + u * (q ? q[i] : 1.0);
    if (d < 0.0) acc += static_cast<long double>(d * f.weight(i));
  }
  return static_cast<double>(acc);
}

}  // namespace

double piecewise_plus_integral(const SampledDistribution& f, double u) {
  return plus_impl(f, u, nullptr);
}

double piecewise_plus_integral(const SampledDistribution& f, double u, const ReferenceDistribution& q) {
  require_same_layout(f, q.distribution());
  return plus_impl(f, u, q.values().data());
}

double piecewise_minus_integral(const SampledDistribution& f, double u) {
  return minus_impl(f, u, nullptr);
}

double piecewise_minus_integral(const SampledDistribution& f, double u, const ReferenceDistribution& q) {
  require_same_layout(f, q.distribution());
  return minus_impl(f, u, q.values().data());
}

PiecewiseIntegrator::PiecewiseIntegrator(const SampledDistribution& f) { build(f, nullptr); }

PiecewiseIntegrator::PiecewiseIntegrator(const SampledDistribution& f, const ReferenceDistribution& q) {
  require_same_layout(f, q.distribution());
  build(f, q.values().data());
}

void PiecewiseIntegrator::build(const SampledDistribution& f, const double* q) {
  struct Cell {
    double ratio, fw, qw;
  };
  std::vector<Cell> pos, neg;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.value(i);
    const double qi = q ? q[i] : 1.0;
    const Cell c{v / qi, v * f.weight(i), qi * f.weight(i)};
    if (v > 0.0) pos.push_back(c);
    if (v < 0.0) neg.push_back(c);
  }
  std::sort(pos.begin(), pos.end(), [](const Cell& a, const Cell& b) { return a.ratio > b.ratio; });
  std::sort(neg.begin(), neg.end(), [](const Cell& a, const Cell& b) { return a.ratio < b.ratio; });
  auto fill = [](const std::vector<Cell>& cells, std::vector<double>& r, std::vector<double>& fs,
                 std::vector<double>& qs) {
    r.resize(cells.size());
    fs.assign(cells.size() + 1, 0.0);
    qs.assign(cells.size() + 1, 0.0);
    long double fa = 0.0L, qa = 0.0L;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      r[k] = cells[k].ratio;
      fa += cells[k].fw;
      qa += cells[k].qw;
      fs[k + 1] = static_cast<double>(fa);
      qs[k + 1] = static_cast<double>(qa);
    }
  };
  fill(pos, pos_ratio_, pos_f_, pos_q_);
  fill(neg, neg_ratio_, neg_f_, neg_q_);
}

double PiecewiseIntegrator::plus(double u) const {
  require_nonnegative(u);
  // Cells with ratio > u contribute f - u q.
  const auto it = std::partition_point(pos_ratio_.begin(), pos_ratio_.end(),
                                       [u](double r) { return r > u; });
  const auto k = static_cast<std::size_t>(it - pos_ratio_.begin());
  return std::max(0.0, pos_f_[k] - u * pos_q_[k]);
}

double PiecewiseIntegrator::minus(double u) const {
  require_nonnegative(u);
  const auto it = std::partition_point(neg_ratio_.begin(), neg_ratio_.end(),
                                       [u](double r) { return r < -u; });
  const auto k = static_cast<std::size_t>(it - neg_ratio_.begin());
  return std::min(0.0, neg_f_[k] + u * neg_q_[k]);
}

}  // namespace qmaj
