#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "qmaj/compare.hpp"
#include "qmaj/error.hpp"

// Counting-measure majorization. Every routine is templated on the scalar so
// the same code runs in double and in exact rational arithmetic.
namespace qmaj::discrete {

using Rational = boost::multiprecision::cpp_rational;

template <class T>
using QuasiVector = std::vector<T>;

// Piecewise-linear curve through (s_k, L_k), starting at (0, 0); flat after
// the last breakpoint up to domain_end.
template <class T>
struct VecCurve {
  std::vector<T> s{T(0)};
  std::vector<T> L{T(0)};
  T domain_end = T(0);

  T operator()(const T& at) const {
    if (at >= s.back()) return L.back();
    const auto it = std::upper_bound(s.begin(), s.end(), at);
    const std::size_t k = static_cast<std::size_t>(it - s.begin()) - 1;
    return L[k] + (at - s[k]) * (L[k + 1] - L[k]) / (s[k + 1] - s[k]);
  }
};

template <class T>
struct VecCurves {
  VecCurve<T> positive;
  VecCurve<T> negative;
};

template <class T>
T sum(const QuasiVector<T>& v) {
  T acc(0);
  for (const T& x : v) acc += x;
  return acc;
}

namespace detail {

template <class T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <class T>
VecCurve<T> side_curve(const QuasiVector<T>& f, const QuasiVector<T>* q, bool positive) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (positive ? f[i] > T(0) : f[i] < T(0)) idx.push_back(i);
  // Ratio order without division: f_i / q_i > f_j / q_j  <=>  f_i q_j > f_j q_i.
  auto qv = [&](std::size_t i) { return q ? (*q)[i] : T(1); };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    const T lhs = f[i] * qv(j);
    const T rhs = f[j] * qv(i);
    return positive ? lhs > rhs : lhs < rhs;
  });
  VecCurve<T> c;
  T s(0), l(0);
  for (std::size_t i : idx) {
    s += qv(i);
    l += f[i];
    c.s.push_back(s);
    c.L.push_back(l);
  }
  T end(0);
  for (std::size_t i = 0; i < f.size(); ++i) end += qv(i);
  c.domain_end = end;
  return c;
}

template <class T>
void pad_to(QuasiVector<T>& v, std::size_t n) {
  if (v.size() < n) v.resize(n, T(0));
}

}  // namespace detail

template <class T>
VecCurves<T> vec_lorenz(const QuasiVector<T>& f, const QuasiVector<T>* q = nullptr) {
  if (q) {
    if (q->size() != f.size()) throw ConfigError("vec_lorenz: reference length mismatch");
    for (const T& x : *q)
      if (!(x > T(0))) throw ConfigError("vec_lorenz: reference must be strictly positive");
  }
  return {detail::side_curve(f, q, true), detail::side_curve(f, q, false)};
}

template <class T>
struct VecVerdict {
  Outcome outcome = Outcome::Equivalent;
  bool forward = false;   // curves of f dominate those of g
  bool backward = false;  // curves of g dominate those of f
  T worst_forward = T(0);   // min gap (f over g)
  T worst_backward = T(0);  // max gap
};

// Statement-1 check on the union of breakpoints. Vectors of different length
// are zero padded (regular case only). eps = 0 gives the exact verdict.
template <class T>
VecVerdict<T> vec_compare(QuasiVector<T> f, QuasiVector<T> g, const QuasiVector<T>* q = nullptr,
                          const T& eps = T(0), const T& sum_tol = T(0), double dominance_factor = 10.0) {
  if (q) {
    if (f.size() != q->size() || g.size() != q->size())
      throw ConfigError("vec_compare: vectors and reference differ in length");
  } else {
    const std::size_t n = std::max(f.size(), g.size());
    detail::pad_to(f, n);
    detail::pad_to(g, n);
  }
  if (detail::abs_value(T(sum(f) - sum(g))) > sum_tol)
    throw NormalizationError("vec_compare: sums differ", 0.0);

  const VecCurves<T> cf = vec_lorenz(f, q), cg = vec_lorenz(g, q);
  VecVerdict<T> v;
  bool first = true;
  auto visit_side = [&](const VecCurve<T>& a, const VecCurve<T>& b, bool negative) {
    std::vector<T> xs(a.s);
    xs.insert(xs.end(), b.s.begin(), b.s.end());
    xs.push_back(a.domain_end);
    for (const T& x : xs) {
      const T d = negative ? T(b(x) - a(x)) : T(a(x) - b(x));
      if (first || d < v.worst_forward) v.worst_forward = d;
      if (first || d > v.worst_backward) v.worst_backward = d;
      first = false;
    }
  };
  visit_side(cf.positive, cg.positive, false);
  visit_side(cf.negative, cg.negative, true);

  v.forward = v.worst_forward >= T(-eps);
  v.backward = v.worst_backward <= eps;
  const T strict = eps * T(dominance_factor);
  if (v.forward && v.backward)
    v.outcome = Outcome::Equivalent;
  else if (v.forward)
    v.outcome = v.worst_backward > strict ? Outcome::Majorizes : Outcome::Equivalent;
  else if (v.backward)
    v.outcome = T(-v.worst_forward) > strict ? Outcome::MajorizedBy : Outcome::Equivalent;
  else
    v.outcome = Outcome::Incomparable;
  return v;
}

template <class T>
struct VecStatement4 {
  bool forward = false;
  bool backward = false;
};

// sum (f - u q)^+ and sum (f + u q)^- at every u in {0} and the ratios |f_i|/q_i,
// |g_i|/q_i; both sides are piecewise linear in u with kinks only there.
template <class T>
VecStatement4<T> statement4_bruteforce(QuasiVector<T> f, QuasiVector<T> g,
                                       const QuasiVector<T>* q = nullptr, const T& eps = T(0)) {
  if (!q) {
    const std::size_t n = std::max(f.size(), g.size());
    detail::pad_to(f, n);
    detail::pad_to(g, n);
  }
  auto qv = [&](std::size_t i) { return q ? (*q)[i] : T(1); };
  std::vector<T> us{T(0)};
  for (std::size_t i = 0; i < f.size(); ++i) {
    us.push_back(detail::abs_value(f[i]) / qv(i));
    us.push_back(detail::abs_value(g[i]) / qv(i));
  }
  auto plus = [&](const QuasiVector<T>& v, const T& u) {
    T acc(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const T d = v[i] - u * qv(i);
      if (d > T(0)) acc += d;
    }
    return acc;
  };
  auto minus = [&](const QuasiVector<T>& v, const T& u) {
    T acc(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const T d = v[i] + u * qv(i);
      if (d < T(0)) acc += d;
    }
    return acc;
  };
  VecStatement4<T> r{true, true};
  for (const T& u : us) {
    const T dp = plus(f, u) - plus(g, u);
    const T dm = minus(g, u) - minus(f, u);
    if (dp < T(-eps) || dm < T(-eps)) r.forward = false;
    if (dp > eps || dm > eps) r.backward = false;
  }
  return r;
}

template <class T>
T negative_volume(const QuasiVector<T>& f) {
  T acc(0);
  for (const T& x : f)
    if (x < T(0)) acc -= x;
  return acc;
}

// Column-stochastic matrix stored by rows: a[m][n] maps entry n to entry m.
template <class T>
struct StochasticMatrix {
  std::vector<std::vector<T>> a;

  std::size_t rows() const { return a.size(); }
  std::size_t cols() const { return a.empty() ? 0 : a[0].size(); }

  T column_sum(std::size_t n) const {
    T acc(0);
    for (const auto& row : a) acc += row[n];
    return acc;
  }
  T row_sum(std::size_t m) const { return std::accumulate(a[m].begin(), a[m].end(), T(0)); }

  bool nonnegative() const {
    for (const auto& row : a)
      for (const T& x : row)
        if (x < T(0)) return false;
    return true;
  }
  bool stochastic(const T& tol = T(0)) const {
    if (!nonnegative()) return false;
    for (std::size_t n = 0; n < cols(); ++n)
      if (detail::abs_value(T(column_sum(n) - T(1))) > tol) return false;
    return true;
  }
  bool semidoubly_stochastic(const T& tol = T(0)) const {
    if (!stochastic(tol)) return false;
    for (std::size_t m = 0; m < rows(); ++m)
      if (row_sum(m) > T(1) + tol) return false;
    return true;
  }
  // (S q)_m <= q_m for a square S.
  bool semi_q_stochastic(const QuasiVector<T>& q, const T& tol = T(0)) const {
    if (!stochastic(tol) || rows() != cols() || q.size() != cols()) return false;
    for (std::size_t m = 0; m < rows(); ++m) {
      T acc(0);
      for (std::size_t n = 0; n < cols(); ++n) acc += a[m][n] * q[n];
      if (acc > q[m] + tol) return false;
    }
    return true;
  }
};

template <class T>
QuasiVector<T> apply_matrix(const StochasticMatrix<T>& S, const QuasiVector<T>& f) {
  if (S.cols() != f.size()) throw ConfigError("apply_matrix: dimension mismatch");
  QuasiVector<T> out(S.rows(), T(0));
  for (std::size_t m = 0; m < S.rows(); ++m)
    for (std::size_t n = 0; n < S.cols(); ++n) out[m] += S.a[m][n] * f[n];
  return out;
}

// Relative curves against q_n = exp(-beta E_n) / Z.
inline VecCurves<double> thermal_embedding_demo(const QuasiVector<double>& f, double beta,
                                                const std::vector<double>& energies) {
  if (energies.size() != f.size()) throw ConfigError("thermal embedding: length mismatch");
  QuasiVector<double> q(f.size());
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) z += q[i] = std::exp(-beta * energies[i]);
  for (double& x : q) x /= z;
  return vec_lorenz(f, &q);
}

// Random generators for property tests. Entries are small-denominator
// rationals (or their double images) so exact and float modes see the same
// instances.
template <class T>
T random_fraction(std::mt19937_64& rng, int lo, int hi, int denom) {
  std::uniform_int_distribution<int> num(lo * denom, hi * denom);
  return T(num(rng)) / T(denom);
}

// Convex combination of random permutation matrices (doubly stochastic).
template <class T>
StochasticMatrix<T> random_birkhoff(std::size_t k, std::mt19937_64& rng, int terms = 4) {
  StochasticMatrix<T> S;
  S.a.assign(k, std::vector<T>(k, T(0)));
  std::vector<int> w(terms);
  std::uniform_int_distribution<int> pick(1, 9);
  int total = 0;
  for (int& x : w) total += x = pick(rng);
  std::vector<std::size_t> perm(k);
  for (int t = 0; t < terms; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t n = 0; n < k; ++n) S.a[perm[n]][n] += T(w[t]) / T(total);
  }
  return S;
}

// Doubly stochastic matrix with `drop` columns removed: columns still sum to
// one and rows to at most one.
template <class T>
StochasticMatrix<T> random_sds(std::size_t k, std::size_t drop, std::mt19937_64& rng) {
  StochasticMatrix<T> S = random_birkhoff<T>(k, rng);
  for (auto& row : S.a) row.resize(k - drop);
  return S;
}

// Metropolis chain with symmetric proposals and stationary q: S q = q.
template <class T>
StochasticMatrix<T> random_sqs(const QuasiVector<T>& q, std::mt19937_64& rng) {
  const std::size_t k = q.size();
  StochasticMatrix<T> S;
  S.a.assign(k, std::vector<T>(k, T(0)));
  std::uniform_int_distribution<int> pick(0, 4);
  for (std::size_t n = 0; n < k; ++n)
    for (std::size_t m = n + 1; m < k; ++m) {
      const T prop = T(pick(rng)) / T(4 * static_cast<int>(k));
      S.a[m][n] = q[m] < q[n] ? T(prop * q[m] / q[n]) : prop;
      S.a[n][m] = q[n] < q[m] ? T(prop * q[n] / q[m]) : prop;
    }
  for (std::size_t n = 0; n < k; ++n) {
    T off(0);
    for (std::size_t m = 0; m < k; ++m)
      if (m != n) off += S.a[m][n];
    S.a[n][n] = T(1) - off;
  }
  return S;
}

}  // namespace qmaj::discrete
