#include "qmaj/measure_grid.hpp"

#include <cmath>
#include <sstream>

#include "qmaj/error.hpp"

namespace qmaj {

GridSpec GridSpec::default_for(int modes, Hbar hbar) {
  GridSpec g;
  g.modes = modes;
  g.hbar = hbar;
  if (modes >= 2) {
    g.half_width = 5.0;
    g.points_per_axis = 64;
  }
  return g;
}

void GridSpec::validate() const {
  if (modes < 1 || modes > kMaxModes)
    throw ConfigError("grid: modes must be in [1, " + std::to_string(kMaxModes) + "]");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("grid: half width L must be positive");
  if (points_per_axis < 2 || points_per_axis % 2 != 0)
    throw ConfigError("grid: points per axis N must be a positive even integer");
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dims()); }

double GridSpec::total_measure() const { return std::pow(2.0 * half_width, dims()); }

std::size_t GridSpec::cell_count() const {
  std::size_t c = 1;
  for (int d = 0; d < dims(); ++d) c *= static_cast<std::size_t>(points_per_axis);
  return c;
}

std::vector<double> GridSpec::axis_centers() const {
  std::vector<double> c(points_per_axis);
  for (int k = 0; k < points_per_axis; ++k) c[k] = axis_center(k);
  return c;
}

std::string to_string(Hbar h) { return h == Hbar::Half ? "half" : "one"; }

std::string describe(const GridSpec& g) {
  std::ostringstream os;
  os << "modes=" << g.modes << " L=" << g.half_width << " N=" << g.points_per_axis
     << " hbar=" << to_string(g.hbar);
  return os.str();
}

GridCells::GridCells(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  count_ = spec_.cell_count();
  measure_ = spec_.cell_volume();
  centers_ = spec_.axis_centers();
}

std::array<int, kMaxDims> GridCells::indices(std::size_t index) const {
  std::array<int, kMaxDims> idx{};
  const auto n = static_cast<std::size_t>(spec_.points_per_axis);
  for (int d = spec_.dims() - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(index % n);
    index /= n;
  }
  return idx;
}

CellCoords GridCells::center(std::size_t index) const {
  CellCoords c{};
  const auto idx = indices(index);
  for (int d = 0; d < spec_.dims(); ++d) c[d] = centers_[idx[d]];
  return c;
}

std::size_t GridCells::flat_index(std::span<const int> axis_indices) const {
  std::size_t flat = 0;
  for (int d = 0; d < spec_.dims(); ++d)
    flat = flat * static_cast<std::size_t>(spec_.points_per_axis) + axis_indices[d];
  return flat;
}

bool GridCells::on_boundary(std::size_t index) const {
  const auto idx = indices(index);
  for (int d = 0; d < spec_.dims(); ++d)
    if (idx[d] == 0 || idx[d] == spec_.points_per_axis - 1) return true;
  return false;
}

GridCells make_grid(const GridSpec& spec) { return GridCells(spec); }

SampledDistribution::SampledDistribution(const GridSpec& grid, std::vector<double> values)
    : domain_(grid), values_(std::move(values)) {
  grid.validate();
  if (values_.size() != grid.cell_count())
    throw ConfigError("sampled distribution: expected " + std::to_string(grid.cell_count()) +
                      " values, got " + std::to_string(values_.size()));
  uniform_weight_ = grid.cell_volume();
  finish();
}

SampledDistribution::SampledDistribution(std::vector<double> values, std::vector<double> weights)
    : domain_(DiscreteSpace{values.size()}), values_(std::move(values)), weights_(std::move(weights)) {
  if (weights_.size() != values_.size())
    throw ConfigError("sampled distribution: values and weights differ in length");
  for (double w : weights_)
    if (!(w > 0.0)) throw ConfigError("sampled distribution: weights must be positive");
  finish();
}

SampledDistribution SampledDistribution::discrete(std::vector<double> values) {
  SampledDistribution d;
  d.domain_ = DiscreteSpace{values.size()};
  d.values_ = std::move(values);
  d.uniform_weight_ = 1.0;
  d.finish();
  return d;
}

void SampledDistribution::finish() { total_ = integrate(*this); }

double SampledDistribution::total_measure() const {
  if (weights_.empty()) return uniform_weight_ * static_cast<double>(values_.size());
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

SampledDistribution SampledDistribution::with_values(std::vector<double> values) const {
  if (values.size() != values_.size())
    throw ConfigError("with_values: size mismatch");
  SampledDistribution d;
  d.domain_ = domain_;
  d.values_ = std::move(values);
  d.weights_ = weights_;
  d.uniform_weight_ = uniform_weight_;
  d.finish();
  return d;
}

SampledDistribution SampledDistribution::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return with_values(std::move(v));
}

bool same_layout(const SampledDistribution& a, const SampledDistribution& b) {
  if (a.size() != b.size() || !(a.domain() == b.domain())) return false;
  if (a.uniform_weights() != b.uniform_weights()) return false;
  if (a.uniform_weights()) return a.weight(0) == b.weight(0) || a.size() == 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.weight(i) != b.weight(i)) return false;
  return true;
}

void require_same_layout(const SampledDistribution& a, const SampledDistribution& b) {
  if (!same_layout(a, b)) throw GridMismatchError("distributions live on different grids");
}

SampledDistribution linear_combination(double a, const SampledDistribution& f, double b,
                                       const SampledDistribution& g) {
  require_same_layout(f, g);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f.value(i) + b * g.value(i);
  return f.with_values(std::move(v));
}

ReferenceDistribution::ReferenceDistribution(SampledDistribution q, bool integrable)
    : q_(std::move(q)), integrable_(integrable) {
  for (double v : q_.values())
    if (!(v > 0.0) || !std::isfinite(v))
      throw NumericError("reference distribution must be strictly positive and finite");
}

ReferenceDistribution ReferenceDistribution::uniform(const SampledDistribution& like) {
  ReferenceDistribution r(like.with_values(std::vector<double>(like.size(), 1.0)));
  r.uniform_ = true;
  return r;
}

double integrate(const SampledDistribution& f) {
  // Neumaier summation in index order.
  double sum = 0.0;
  double comp = 0.0;
  const auto vals = f.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double term = vals[i] * f.weight(i);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

TruncationReport truncation_report(const SampledDistribution& f,
                                   std::optional<double> analytic_tail_bound) {
  TruncationReport r;
  r.normalization_defect = std::abs(1.0 - f.total_integral());
  r.analytic_tail_bound = analytic_tail_bound;
  if (const GridSpec* g = f.grid()) {
    const GridCells cells(*g);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (cells.on_boundary(i)) r.boundary_max = std::max(r.boundary_max, std::abs(f.value(i)));
  }
  return r;
}

SampledDistribution renormalized(const SampledDistribution& f) {
  const double total = f.total_integral();
  if (total == 0.0 || !std::isfinite(total))
    throw NumericError("cannot renormalize a distribution with zero integral");
  return f.scaled(1.0 / total);
}

}  // namespace qmaj
