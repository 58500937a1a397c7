#include "qmaj/monotones.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmaj/error.hpp"
#include "qmaj/rearrange.hpp"

namespace qmaj {

namespace {

double abs_power_sum(const SampledDistribution& f, double alpha) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += static_cast<long double>(std::pow(std::abs(f.value(i)), alpha) * f.weight(i));
  return static_cast<double>(acc);
}

void require_alpha_above_one(double alpha, const char* what) {
  if (!(alpha > 1.0))
    throw ConfigError(std::string(what) + ": alpha must exceed 1 (got " + std::to_string(alpha) + ")");
}

}  // namespace

// (||f||_1 - integral f) / 2 equals the mass of the negative part; summing
// that part directly keeps tiny negativities above roundoff.
double negative_volume(const SampledDistribution& f) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.value(i) < 0.0) acc -= static_cast<long double>(f.value(i) * f.weight(i));
  return static_cast<double>(acc);
}

double lp_norm(const SampledDistribution& f, double alpha) {
  if (!(alpha >= 1.0)) throw ConfigError("lp norm: alpha must be >= 1");
  return std::pow(abs_power_sum(f, alpha), 1.0 / alpha);
}

double purity(const SampledDistribution& f) {
  const GridSpec* g = f.grid();
  if (!g) throw ConfigError("purity: needs a phase-space grid");
  const double hbar = g->hbar == Hbar::Half ? 0.5 : 1.0;
  return std::pow(2.0 * std::numbers::pi * hbar, g->modes) * abs_power_sum(f, 2.0);
}

double renyi_entropy(const SampledDistribution& f, double alpha) {
  require_alpha_above_one(alpha, "renyi entropy");
  return std::log(abs_power_sum(f, alpha)) / (1.0 - alpha);
}

double tsallis_entropy(const SampledDistribution& f, double alpha) {
  require_alpha_above_one(alpha, "tsallis entropy");
  return (1.0 - abs_power_sum(f, alpha)) / (alpha - 1.0);
}

double renyi_divergence(const SampledDistribution& f, const ReferenceDistribution& q, double alpha) {
  require_alpha_above_one(alpha, "renyi divergence");
  require_same_layout(f, q.distribution());
  const auto qv = q.values();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += static_cast<long double>(std::pow(std::abs(f.value(i)), alpha) *
                                    std::pow(qv[i], 1.0 - alpha) * f.weight(i));
  return std::log(static_cast<double>(acc)) / (alpha - 1.0);
}

ExtremeValues extreme_values(const SampledDistribution& f) {
  ExtremeValues e;
  for (double v : f.values()) {
    e.max_positive = std::max(e.max_positive, v);
    e.neg_min_negative = std::max(e.neg_min_negative, -v);
  }
  return e;
}

double g_monotone(const SampledDistribution& f) {
  const LorenzCurve c = lorenz_curves(f).positive;
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c.L[k] >= 1.0) {
      const double t = (1.0 - c.L[k - 1]) / (c.L[k] - c.L[k - 1]);
      const double s = c.s[k - 1] + t * (c.s[k] - c.s[k - 1]);
      return s > 0.0 ? 1.0 / s : 0.0;
    }
  }
  return 0.0;
}

namespace {

struct Step {
  double width;
  double value;
};

// Weighted rearrangement of one sign of f as consecutive steps.
std::vector<Step> steps(const SampledDistribution& f, bool positive) {
  std::vector<Step> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.value(i);
    if (positive ? v > 0.0 : v < 0.0) out.push_back({f.weight(i), v});
  }
  if (positive)
    std::stable_sort(out.begin(), out.end(), [](const Step& a, const Step& b) { return a.value > b.value; });
  else
    std::stable_sort(out.begin(), out.end(), [](const Step& a, const Step& b) { return a.value < b.value; });
  return out;
}

long double step_inner(const std::vector<Step>& a, const std::vector<Step>& b) {
  long double acc = 0.0L;
  std::size_t i = 0, j = 0;
  double left_a = a.empty() ? 0.0 : a[0].width;
  double left_b = b.empty() ? 0.0 : b[0].width;
  while (i < a.size() && j < b.size()) {
    const double w = std::min(left_a, left_b);
    acc += static_cast<long double>(a[i].value * b[j].value * w);
    left_a -= w;
    left_b -= w;
    if (left_a <= 0.0 && ++i < a.size()) left_a = a[i].width;
    if (left_b <= 0.0 && ++j < b.size()) left_b = b[j].width;
  }
  return acc;
}

}  // namespace

double phi_functional(const SampledDistribution& f, const SampledDistribution& g) {
  require_same_layout(f, g);
  return static_cast<double>(step_inner(steps(f, true), steps(g, true)) +
                             step_inner(steps(f, false), steps(g, false)));
}

MonotoneReport monotone_report(const SampledDistribution& f, const std::vector<std::string>& which,
                               const ReferenceDistribution* q) {
  MonotoneReport r;
  if (const GridSpec* g = f.grid()) r.hbar = g->hbar;
  for (const std::string& name : which) {
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    double alpha = 0.0;
    if (colon != std::string::npos) {
      try {
        std::size_t used = 0;
        alpha = std::stod(name.substr(colon + 1), &used);
        if (used != name.size() - colon - 1) throw std::invalid_argument(name);
      } catch (const std::logic_error&) {
        throw ConfigError("monotone: bad parameter in '" + name + "'");
      }
      r.alphas.push_back(alpha);
    }
    const bool needs_alpha = head == "renyi" || head == "tsallis" || head == "divergence" || head == "lp";
    if (needs_alpha != (colon != std::string::npos))
      throw ConfigError("monotone: '" + name + "' has the wrong parameter form");

    double v;
    if (head == "nv") {
      v = negative_volume(f);
    } else if (head == "purity") {
      v = purity(f);
    } else if (head == "max") {
      v = extreme_values(f).max_positive;
    } else if (head == "min") {
      v = extreme_values(f).neg_min_negative;
    } else if (head == "g") {
      v = g_monotone(f);
    } else if (head == "lp") {
      v = lp_norm(f, alpha);
    } else if (head == "renyi") {
      v = renyi_entropy(f, alpha);
    } else if (head == "tsallis") {
      v = tsallis_entropy(f, alpha);
    } else if (head == "divergence") {
      if (!q) throw ConfigError("monotone: divergence needs a reference");
      v = renyi_divergence(f, *q, alpha);
    } else {
      throw ConfigError("monotone: unknown monotone '" + name + "'");
    }
    r.values[name] = v;
  }
  return r;
}

}  // namespace qmaj
