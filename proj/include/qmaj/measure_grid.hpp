#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qmaj {

// Phase-space units. Half puts the vacuum Wigner function at (2/pi)e^{-2r^2};
// One at (1/pi)e^{-r^2}.
enum class Hbar { Half, One };

inline constexpr int kMaxModes = 4;
inline constexpr int kMaxDims = 2 * kMaxModes;

// Uniform midpoint grid over [-L, L]^{2n}. Axes are ordered x_1..x_n, p_1..p_n
// and cells are enumerated row-major (last axis fastest).
struct GridSpec {
  int modes = 1;
  double half_width = 7.0;
  int points_per_axis = 700;
  Hbar hbar = Hbar::Half;

  // n=1 -> L=7, N=700; n>=2 -> L=5, N=64.
  static GridSpec default_for(int modes, Hbar hbar = Hbar::Half);

  void validate() const;
  int dims() const { return 2 * modes; }
  double spacing() const { return 2.0 * half_width / points_per_axis; }
  double cell_volume() const;
  double total_measure() const;
  std::size_t cell_count() const;
  double axis_center(int k) const { return -half_width + spacing() * (k + 0.5); }
  std::vector<double> axis_centers() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

std::string to_string(Hbar h);
std::string describe(const GridSpec& g);

// Finite index set with counting measure (or explicit positive weights).
struct DiscreteSpace {
  std::size_t count = 0;
  friend bool operator==(const DiscreteSpace&, const DiscreteSpace&) = default;
};

using Domain = std::variant<GridSpec, DiscreteSpace>;

using CellCoords = std::array<double, kMaxDims>;

// Deterministic enumeration of grid cells without materializing coordinates.
class GridCells {
 public:
  explicit GridCells(const GridSpec& spec);

  std::size_t size() const { return count_; }
  double cell_measure() const { return measure_; }
  const GridSpec& spec() const { return spec_; }
  // Cell-center coordinates of cell `index`; entries beyond dims() are zero.
  CellCoords center(std::size_t index) const;
  // Per-axis integer indices of cell `index`.
  std::array<int, kMaxDims> indices(std::size_t index) const;
  std::size_t flat_index(std::span<const int> axis_indices) const;
  bool on_boundary(std::size_t index) const;

 private:
  GridSpec spec_;
  std::size_t count_;
  double measure_;
  std::vector<double> centers_;
};

GridCells make_grid(const GridSpec& spec);

// A real function sampled on the cells of a measure space, with the cell
// measures Delta mu_i. Immutable after construction.
class SampledDistribution {
 public:
  // Uniform grid; every cell carries the grid's cell volume.
  SampledDistribution(const GridSpec& grid, std::vector<double> values);
  // Discrete index set with the given positive weights.
  SampledDistribution(std::vector<double> values, std::vector<double> weights);
  // Discrete index set with counting measure.
  static SampledDistribution discrete(std::vector<double> values);

  const Domain& domain() const { return domain_; }
  const GridSpec* grid() const { return std::get_if<GridSpec>(&domain_); }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  double weight(std::size_t i) const {
    return weights_.empty() ? uniform_weight_ : weights_[i];
  }
  bool uniform_weights() const { return weights_.empty(); }
  double total_integral() const { return total_; }
  double total_measure() const;

  // Same layout, new values.
  SampledDistribution with_values(std::vector<double> values) const;
  SampledDistribution scaled(double factor) const;

 private:
  SampledDistribution() = default;
  void finish();

  Domain domain_;
  std::vector<double> values_;
  std::vector<double> weights_;
  double uniform_weight_ = 1.0;
  double total_ = 0.0;
};

bool same_layout(const SampledDistribution& a, const SampledDistribution& b);
void require_same_layout(const SampledDistribution& a, const SampledDistribution& b);

// a*f + b*g on a shared layout.
SampledDistribution linear_combination(double a, const SampledDistribution& f, double b,
                                       const SampledDistribution& g);

// A strictly positive reference function q. `integrable` records whether q is
// expected to have finite integral on the untruncated space; when it is not,
// curves built from it are truncation sensitive.
class ReferenceDistribution {
 public:
  explicit ReferenceDistribution(SampledDistribution q, bool integrable = true);
  // q = 1 everywhere on the layout of `like`.
  static ReferenceDistribution uniform(const SampledDistribution& like);

  const SampledDistribution& distribution() const { return q_; }
  std::span<const double> values() const { return q_.values(); }
  bool integrable() const { return integrable_; }
  bool truncation_sensitive() const { return !integrable_; }
  bool is_uniform() const { return uniform_; }

 private:
  SampledDistribution q_;
  bool integrable_;
  bool uniform_ = false;
};

// Fixed-order compensated sum of f_i * Delta mu_i.
double integrate(const SampledDistribution& f);

inline constexpr double kNormTolerance = 1e-3;

struct TruncationReport {
  double normalization_defect = 0.0;  // |1 - integral|
  double boundary_max = 0.0;          // max |f| over cells touching the grid edge
  std::optional<double> analytic_tail_bound;
};

TruncationReport truncation_report(const SampledDistribution& f,
                                   std::optional<double> analytic_tail_bound = std::nullopt);

// Divides values by the total integral. Throws NumericError on zero integral.
SampledDistribution renormalized(const SampledDistribution& f);

}  // namespace qmaj
