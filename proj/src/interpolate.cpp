#include "interpolate.hpp"

#include <cmath>

namespace qmaj::detail {

int default_order(int dims) {
  if (dims <= 2) return 5;
  if (dims <= 4) return 3;
  return 1;
}

GridInterpolator::GridInterpolator(const GridSpec& grid, std::span<const double> values, int order)
    : grid_(grid), values_(values), order_(order), dims_(grid.dims()), h_(grid.spacing()) {
  stride_.assign(dims_, 1);
  for (int d = dims_ - 2; d >= 0; --d)
    stride_[d] = stride_[d + 1] * static_cast<std::size_t>(grid.points_per_axis);
}

double GridInterpolator::operator()(const double* coords) const {
  constexpr int kMaxStencil = 6;
  const int width = order_ + 1;
  const int n = grid_.points_per_axis;
  std::array<std::array<double, kMaxStencil>, kMaxDims> w{};
  std::array<int, kMaxDims> base{}, count{};

  for (int d = 0; d < dims_; ++d) {
    const double u = (coords[d] + grid_.half_width) / h_ - 0.5;
    const double r = std::round(u);
    if (std::abs(u - r) < 1e-9) {
      const int k = static_cast<int>(r);
      if (k < 0 || k >= n) return 0.0;
      base[d] = k;
      count[d] = 1;
      w[d][0] = 1.0;
      continue;
    }
    const int b = static_cast<int>(std::floor(u)) - (order_ - 1) / 2;
    if (b + width <= 0 || b >= n) return 0.0;
    base[d] = b;
    count[d] = width;
    for (int i = 0; i < width; ++i) {
      double l = 1.0;
      for (int j = 0; j < width; ++j)
        if (j != i) l *= (u - (b + j)) / static_cast<double>(i - j);
      w[d][i] = l;
    }
  }

  // Odometer over the stencil, skipping nodes outside the grid.
  std::array<int, kMaxDims> k{};
  double acc = 0.0;
  while (true) {
    double weight = 1.0;
    std::size_t flat = 0;
    bool inside = true;
    for (int d = 0; d < dims_; ++d) {
      const int idx = base[d] + k[d];
      if (idx < 0 || idx >= n) {
        inside = false;
        break;
      }
      weight *= w[d][k[d]];
      flat += stride_[d] * static_cast<std::size_t>(idx);
    }
    if (inside) acc += weight * values_[flat];
    int d = dims_ - 1;
    while (d >= 0 && ++k[d] == count[d]) k[d--] = 0;
    if (d < 0) break;
  }
  return acc;
}

}  // namespace qmaj::detail
