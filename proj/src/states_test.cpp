#include "qmaj/states.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qmaj/compare.hpp"
#include "qmaj/error.hpp"
#include "qmaj/monotones.hpp"

namespace qmaj {
namespace {

using std::numbers::pi;

const GridSpec& grid1() {
  static const GridSpec g = GridSpec::default_for(1);
  return g;
}

// Value of the cell whose center is closest to (x, p).
double at(const SampledDistribution& f, double x, double p) {
  const GridSpec& g = *f.grid();
  auto idx = [&](double v) {
    return static_cast<int>(std::floor((v + g.half_width) / g.spacing()));
  };
  const int i[2] = {idx(x), idx(p)};
  return f.value(GridCells(g).flat_index(i));
}

TEST(Render, VacuumAtOrigin) {
  // The origin is a cell corner; the nearest center is h/2 off on each axis.
  const GridSpec g{1, 1.0, 2000, Hbar::Half};
  const double v = at(render(StateSpec::fock(0), g), 0.0, 0.0);
  EXPECT_NEAR(v, 2.0 / pi, 1e-5);
}

TEST(Render, ThermalIsNormalizedAndPositive) {
  const auto w = render(StateSpec::thermal(0.4), grid1());
  EXPECT_NEAR(w.total_integral(), 1.0, 1e-4);
  for (double v : w.values()) ASSERT_GT(v, 0.0);
}

TEST(Render, ZooIsNormalized) {
  for (const char* text : {"fock:4", "coherent(alpha=1+1i)", "cat(alpha=2)", "on(a=2,n=3)",
                           "mix(0.75:cat(alpha=2),0.25:fock:7)", "lossy(eta=0.7,fock:1)",
                           "dephase(gamma=0.5,coherent(alpha=1))"}) {
    for (Rep rep : {Rep::Wigner, Rep::Husimi}) {
      const auto f = render(parse_state(text), grid1(), rep);
      EXPECT_NEAR(f.total_integral(), 1.0, 1e-4) << text << " " << to_string(rep);
      if (rep == Rep::Husimi) {
        for (double v : f.values()) ASSERT_GE(v, 0.0) << text;
      }
    }
  }
}

TEST(Render, FockNegativity) {
  for (int n = 1; n <= 5; ++n) EXPECT_GT(negative_volume(render(StateSpec::fock(n), grid1())), 0.05);
}

// Appendix-form ON state in hbar = 1/2 coordinates, written out with
// std::laguerre as an independent evaluation path.
double on_oracle(std::complex<double> a, int n, double x, double p) {
  const double r2 = x * x + p * p;
  const double a2 = std::norm(a);
  auto fock = [&](int k) {
    return 2.0 / pi * std::exp(-2.0 * r2) * (k % 2 ? -1.0 : 1.0) * std::laguerre(k, 4.0 * r2);
  };
  const std::complex<double> zm(x, -p), zp(x, p);
  const double cross = std::real(a * std::pow(zm, n) + std::conj(a) * std::pow(zp, n));
  return fock(0) / (1.0 + a2) + a2 / (1.0 + a2) * fock(n) +
         std::exp(-r2) * cross / (2.0 * pi * std::sqrt(std::tgamma(n + 1.0)) * (1.0 + a2));
}

TEST(Render, OnStateMatchesClosedForm) {
  const GridSpec g{1, 4.0, 80, Hbar::Half};
  const auto f = render(StateSpec::on(2.0, 3), g);
  const GridCells cells(g);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  for (int k = 0; k < 5; ++k) {
    const std::size_t i = pick(rng);
    const auto c = cells.center(i);
    EXPECT_NEAR(f.value(i), on_oracle(2.0, 3, c[0], c[1]), 1e-12);
  }
}

TEST(Render, CoherentEquivalentToVacuum) {
  const auto vac = render(StateSpec::fock(0), grid1());
  for (std::complex<double> a : {std::complex<double>(0.5, 0.0), {1.0, -1.0}, {0.0, 2.0}})
    EXPECT_EQ(compare(render(StateSpec::coherent(a), grid1()), vac).outcome, Outcome::Equivalent);
}

TEST(Render, HbarOneIsRescaled) {
  const auto w = render(StateSpec::fock(0), GridSpec{1, 1.0, 2000, Hbar::One});
  EXPECT_NEAR(at(w, 0.0, 0.0), 1.0 / pi, 1e-5);
  EXPECT_NEAR(render(StateSpec::fock(3), GridSpec::default_for(1, Hbar::One)).total_integral(), 1.0, 1e-4);
}

TEST(Render, TensorIsProduct) {
  const GridSpec g2{2, 5.0, 16, Hbar::Half};
  const GridSpec g1{1, 5.0, 16, Hbar::Half};
  const auto t = render(parse_state("tensor(fock:1, coherent(alpha=0.5))"), g2);
  const auto a = render(StateSpec::fock(1), g1), b = render(StateSpec::coherent(0.5), g1);
  // xxpp: cell (x1, x2, p1, p2) pairs a(x1, p1) with b(x2, p2).
  const GridCells c2(g2), c1(g1);
  for (std::size_t i = 0; i < t.size(); i += 37) {
    const auto idx = c2.indices(i);
    const int ia[2] = {idx[0], idx[2]}, ib[2] = {idx[1], idx[3]};
    EXPECT_NEAR(t.value(i), a.value(c1.flat_index(ia)) * b.value(c1.flat_index(ib)), 1e-14);
  }
}

TEST(Render, ModeMismatchAndUnsupported) {
  EXPECT_THROW(render(StateSpec::fock(1), GridSpec::default_for(2)), Error);
  EXPECT_THROW(render(StateSpec::cubic(0.1, 0.1), grid1(), Rep::Husimi), UnsupportedError);
  EXPECT_THROW(render(StateSpec::thermal(-1.0), grid1()), SemanticError);
}

TEST(Wavefunction, VacuumAndFockOne) {
  const GridSpec g{1, 6.0, 240, Hbar::Half};
  for (int n : {0, 1}) {
    const auto psi = fock_wavefunction(n, g);
    const auto w = wigner_from_wavefunction(psi, g);
    const auto ref = render(StateSpec::fock(n), g);
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(w.wigner.value(i) - ref.value(i)));
    EXPECT_LT(worst, 1e-4) << n;
    EXPECT_LT(w.imaginary_residue, 1e-10);
    EXPECT_NEAR(w.wigner.total_integral(), 1.0, 1e-3);
  }
}

TEST(Wavefunction, NyquistAndNormalizationChecks) {
  const GridSpec coarse{1, 7.0, 40, Hbar::Half};
  EXPECT_THROW(wigner_from_wavefunction(fock_wavefunction(0, coarse), coarse), ConfigError);
  const GridSpec g{1, 6.0, 240, Hbar::Half};
  auto psi = fock_wavefunction(0, g);
  for (auto& v : psi) v *= 1.1;
  EXPECT_THROW(wigner_from_wavefunction(psi, g), Error);
}

TEST(Cubic, NormalizedAndNegative) {
  const GridSpec g{1, 7.0, 350, Hbar::Half};
  const auto strong = render(StateSpec::cubic(0.5, 0.1), g);
  EXPECT_NEAR(strong.total_integral(), 1.0, 1e-3);
  EXPECT_NEAR(purity(strong), 1.0, 1e-3);
  EXPECT_GT(negative_volume(strong), 1e-3);
  // At g = 0.02 the negativity sits far below double precision.
  const auto weak = render(StateSpec::cubic(0.02, 0.1), g);
  EXPECT_NEAR(weak.total_integral(), 1.0, 1e-3);
  EXPECT_LT(negative_volume(weak), 1e-12);
}

TEST(Reference, Thermal) {
  const auto vac = reference(StateSpec::fock(0), grid1());
  EXPECT_TRUE(vac.integrable());
  const auto neg = reference("thermal(nbar=-1)", grid1());
  EXPECT_FALSE(neg.integrable());
  EXPECT_TRUE(neg.truncation_sensitive());
  // Growing Gaussian: larger at the corner than at the center.
  EXPECT_GT(neg.values().back(), neg.values()[neg.values().size() / 2]);
  EXPECT_THROW(reference("thermal(nbar=-0.5)", grid1()), SemanticError);
  EXPECT_TRUE(reference("thermal(nbar=-0.25)", grid1()).integrable());
  EXPECT_THROW(reference("fock:1", grid1()), NumericError);
}

TEST(Reference, RotationInvariance) {
  EXPECT_TRUE(rotation_invariant(parse_state("mix(0.5:fock:1,0.5:thermal(nbar=2))")));
  EXPECT_FALSE(rotation_invariant(parse_state("coherent(alpha=1)")));
  EXPECT_FALSE(rotation_invariant(parse_state("cat(alpha=1)")));
}

}  // namespace
}  // namespace qmaj
