#include "qmaj/measure_grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qmaj/error.hpp"
#include "qmaj/states.hpp"

namespace qmaj {
namespace {

TEST(MakeGrid, TwoByTwoCells) {
  const GridSpec g{1, 1.0, 2, Hbar::Half};
  const GridCells cells = make_grid(g);
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_DOUBLE_EQ(cells.cell_measure(), 1.0);
  const double expected[4][2] = {{-0.5, -0.5}, {-0.5, 0.5}, {0.5, -0.5}, {0.5, 0.5}};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(cells.center(i)[0], expected[i][0]);
    EXPECT_DOUBLE_EQ(cells.center(i)[1], expected[i][1]);
  }
}

TEST(MakeGrid, DefaultSizes) {
  const GridSpec one = GridSpec::default_for(1);
  EXPECT_EQ(one.cell_count(), 490000u);
  EXPECT_NEAR(one.cell_volume(), 4e-4, 1e-18);
  const GridSpec two = GridSpec::default_for(2);
  EXPECT_EQ(two.cell_count(), 64u * 64u * 64u * 64u);
  EXPECT_NEAR(two.cell_volume(), std::pow(10.0 / 64.0, 4), 1e-18);
  EXPECT_DOUBLE_EQ(two.total_measure(), std::pow(10.0, 4));
}

TEST(MakeGrid, RejectsBadSpecs) {
  EXPECT_THROW(make_grid({1, 1.0, 3, Hbar::Half}), ConfigError);
  EXPECT_THROW(make_grid({1, 0.0, 4, Hbar::Half}), ConfigError);
  EXPECT_THROW(make_grid({1, -2.0, 4, Hbar::Half}), ConfigError);
  EXPECT_THROW(make_grid({0, 1.0, 4, Hbar::Half}), ConfigError);
}

TEST(MakeGrid, FlatIndexInvertsIndices) {
  const GridCells cells(GridSpec{2, 1.0, 4, Hbar::Half});
  for (std::size_t i = 0; i < cells.size(); i += 7) {
    const auto idx = cells.indices(i);
    EXPECT_EQ(cells.flat_index(std::span<const int>(idx.data(), 4)), i);
  }
}

TEST(Integrate, VacuumIsNormalized) {
  const auto w = render(StateSpec::fock(0), GridSpec::default_for(1));
  EXPECT_NEAR(integrate(w), 1.0, 1e-6);
}

TEST(Integrate, ZeroFunction) {
  const GridSpec g{1, 2.0, 8, Hbar::Half};
  EXPECT_EQ(integrate(SampledDistribution(g, std::vector<double>(64, 0.0))), 0.0);
}

TEST(Integrate, FockFourIsNormalized) {
  const auto w = render(StateSpec::fock(4), GridSpec::default_for(1));
  EXPECT_NEAR(w.total_integral(), 1.0, 1e-4);
}

TEST(Integrate, Linear) {
  const GridSpec g = GridSpec::default_for(1);
  const auto f = render(StateSpec::fock(1), g);
  const auto h = render(StateSpec::coherent({0.5, -1.0}), g);
  const auto combo = linear_combination(0.3, f, -1.7, h);
  const double expected = 0.3 * integrate(f) - 1.7 * integrate(h);
  EXPECT_NEAR(integrate(combo), expected, 1e-12 * std::abs(expected));
}

TEST(Integrate, MidpointRichardsonRatio) {
  // On a window that cuts the Gaussian off, the boundary derivative makes
  // the O(h^2) term dominant; the exact truncated mass is erf(sqrt(2) L)^2.
  const double exact = std::pow(std::erf(std::sqrt(2.0) * 1.0), 2);
  const double e1 = integrate(render(StateSpec::fock(0), GridSpec{1, 1.0, 16, Hbar::Half})) - exact;
  const double e2 = integrate(render(StateSpec::fock(0), GridSpec{1, 1.0, 32, Hbar::Half})) - exact;
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(TruncationReport, VacuumAtDefaultGrid) {
  const auto r = truncation_report(render(StateSpec::fock(0), GridSpec::default_for(1)));
  EXPECT_LT(r.boundary_max, 1e-40);
  EXPECT_LT(r.normalization_defect, 1e-6);
}

TEST(TruncationReport, VacuumOnSmallWindow) {
  // Mass outside [-1,1]^2 for (2/pi) e^{-2r^2}: 1 - erf(sqrt 2)^2.
  const auto w = render(StateSpec::fock(0), GridSpec{1, 1.0, 400, Hbar::Half});
  const double expected = 1.0 - std::pow(std::erf(std::sqrt(2.0)), 2);
  EXPECT_NEAR(truncation_report(w).normalization_defect, expected, 1e-4);
}

TEST(Reference, RejectsNonPositive) {
  const GridSpec g{1, 1.0, 2, Hbar::Half};
  EXPECT_THROW(ReferenceDistribution(SampledDistribution(g, {1.0, 0.0, 1.0, 1.0})), NumericError);
  EXPECT_NO_THROW(ReferenceDistribution(SampledDistribution(g, {1.0, 2.0, 1.0, 1.0})));
}

TEST(Layout, MismatchDetected) {
  const auto a = SampledDistribution(GridSpec{1, 1.0, 2, Hbar::Half}, {1, 2, 3, 4});
  const auto b = SampledDistribution(GridSpec{1, 2.0, 2, Hbar::Half}, {1, 2, 3, 4});
  EXPECT_THROW(require_same_layout(a, b), GridMismatchError);
}

TEST(Renormalize, DividesByIntegral) {
  const auto a = SampledDistribution(GridSpec{1, 1.0, 2, Hbar::Half}, {1, 2, 3, 4});
  EXPECT_NEAR(renormalized(a).total_integral(), 1.0, 1e-15);
}

}  // namespace
}  // namespace qmaj
