#pragma once

#include <array>
#include <span>
#include <vector>

#include "qmaj/measure_grid.hpp"

namespace qmaj::detail {

// Tensor-product Lagrange interpolation of cell-center samples. `order` is
// odd (1 = linear, 3 = cubic, 5 = quintic); stencil nodes outside the grid
// count as zero. Coordinates within 1e-9 cells of a node reproduce the node
// value exactly.
class GridInterpolator {
 public:
  GridInterpolator(const GridSpec& grid, std::span<const double> values, int order);

  double operator()(const double* coords) const;

 private:
  GridSpec grid_;
  std::span<const double> values_;
  int order_;
  int dims_;
  double h_;
  std::vector<std::size_t> stride_;
};

// Highest order that keeps the stencil affordable for the given dimension.
int default_order(int dims);

}  // namespace qmaj::detail
