#include "qmaj/compare.hpp"

#include <gtest/gtest.h>

#include "qmaj/error.hpp"
#include "qmaj/states.hpp"

namespace qmaj {
namespace {

const GridSpec kGrid{1, 7.0, 280, Hbar::Half};

SampledDistribution W(const char* text) { return render(parse_state(text), kGrid); }

TEST(Compare, Reflexive) {
  for (const char* s : {"vacuum", "fock:3", "cat(alpha=2)"}) {
    const auto f = W(s);
    EXPECT_EQ(compare(f, f).outcome, Outcome::Equivalent) << s;
    EXPECT_FALSE(compare(f, f).witness.has_value());
  }
}

TEST(Compare, Antisymmetric) {
  const char* zoo[] = {"vacuum", "fock:1", "fock:2", "thermal(nbar=0.5)", "lossy(eta=0.5, fock:2)"};
  const auto q = reference(StateSpec::fock(0), kGrid);
  for (const char* a : zoo)
    for (const char* b : zoo) {
      const auto fa = W(a), fb = W(b);
      EXPECT_EQ(compare(fb, fa).outcome, reversed(compare(fa, fb).outcome)) << a << " " << b;
      EXPECT_EQ(compare(fb, fa, q).outcome, reversed(compare(fa, fb, q).outcome)) << a << " " << b;
    }
}

TEST(Compare, FockChainRelativeToVacuum) {
  const auto q = reference(StateSpec::fock(0), kGrid);
  for (int n = 0; n < 4; ++n) {
    const auto v = compare(render(StateSpec::fock(n + 1), kGrid), render(StateSpec::fock(n), kGrid), q);
    EXPECT_EQ(v.outcome, Outcome::Majorizes) << n;
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_GT(v.witness->gap, 1e-3);
  }
}

TEST(Compare, FockStatesIncomparableRegular) {
  const auto v = compare(W("fock:1"), W("fock:2"));
  EXPECT_EQ(v.outcome, Outcome::Incomparable);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_LT(v.witness->gap, -1e-4);
}

TEST(Compare, DisplacedCoherentEquivalent) {
  EXPECT_EQ(compare(W("vacuum"), W("coherent(alpha=1+0.5i)")).outcome, Outcome::Equivalent);
}

TEST(Compare, PureStateOverMixed) {
  EXPECT_EQ(compare(W("vacuum"), W("thermal(nbar=1)")).outcome, Outcome::Majorizes);
  EXPECT_EQ(compare(W("thermal(nbar=1)"), W("vacuum")).outcome, Outcome::MajorizedBy);
}

TEST(Compare, DiscreteQuasiVector) {
  const auto f = SampledDistribution::discrete({2.0, -1.0});
  EXPECT_EQ(compare(f, SampledDistribution::discrete({1.0, 0.0})).outcome, Outcome::Majorizes);
  EXPECT_EQ(compare(f, SampledDistribution::discrete({0.5, 0.5})).outcome, Outcome::Majorizes);
  EXPECT_EQ(compare(SampledDistribution::discrete({1.5, -0.5}), SampledDistribution::discrete({1.2, -0.2}))
                .outcome,
            Outcome::Majorizes);
}

TEST(Compare, NormalizationMismatch) {
  const auto f = W("fock:1");
  EXPECT_THROW(compare(f, f.scaled(0.5)), NormalizationError);
  CompareOptions positive;
  positive.positive_only = true;
  EXPECT_NO_THROW(compare(f, f.scaled(0.5), positive));
}

TEST(Compare, GridMismatch) {
  const auto a = render(StateSpec::fock(0), GridSpec{1, 5.0, 100, Hbar::Half});
  const auto b = render(StateSpec::fock(0), GridSpec{1, 5.0, 120, Hbar::Half});
  EXPECT_THROW(compare(a, b), GridMismatchError);
}

TEST(Compare, RejectsNonPositiveTolerance) {
  CompareOptions o;
  o.eps_cmp = 0.0;
  EXPECT_THROW(compare(W("vacuum"), W("vacuum"), o), ConfigError);
}

TEST(Statement4, AgreesWithCurves) {
  const auto q = reference(StateSpec::fock(0), kGrid);
  struct Case {
    const char* a;
    const char* b;
    bool relative;
  };
  for (const Case& c : {Case{"fock:2", "fock:1", true}, Case{"fock:1", "fock:2", false},
                        Case{"vacuum", "thermal(nbar=1)", false}, Case{"fock:3", "lossy(eta=0.5, fock:3)", true}}) {
    const auto fa = W(c.a), fb = W(c.b);
    const auto v = c.relative ? compare(fa, fb, q) : compare(fa, fb);
    const auto s4 = c.relative ? statement4_check(fa, fb, q, ratio_breakpoints(fa, fb, q))
                               : statement4_check(fa, fb, ratio_breakpoints(fa, fb));
    const bool forward = v.outcome == Outcome::Majorizes || v.outcome == Outcome::Equivalent;
    const bool backward = v.outcome == Outcome::MajorizedBy || v.outcome == Outcome::Equivalent;
    EXPECT_EQ(s4.forward, forward) << c.a << " vs " << c.b;
    EXPECT_EQ(s4.backward, backward) << c.a << " vs " << c.b;
  }
}

TEST(Statement4, RejectsNegativeU) {
  const auto f = W("vacuum");
  EXPECT_THROW(statement4_check(f, f, {-1.0}), ConfigError);
  EXPECT_THROW(statement4_check(f, f, {}), ConfigError);
}

TEST(ScanThreshold, FindsFlipForFockOne) {
  const GridSpec g{1, 7.0, 200, Hbar::Half};
  const auto a = render(StateSpec::fock(1), g), b = render(StateSpec::fock(0), g);
  ReferenceFamily fam = [&](double nbar) { return reference(StateSpec::thermal(nbar), g); };
  const auto r = scan_threshold(a, b, fam, "nbar", 0.0, 2.0, 1e-3);
  EXPECT_NEAR(r.estimate(), 0.64, 0.05);
  EXPECT_LE(r.upper - r.lower, 1e-3);
  EXPECT_TRUE(comparable(r.lower_verdict));
  EXPECT_FALSE(comparable(r.upper_verdict));
}

TEST(ScanThreshold, NoSignChange) {
  const GridSpec g{1, 6.0, 80, Hbar::Half};
  const auto a = render(StateSpec::fock(1), g);
  ReferenceFamily fam = [&](double nbar) { return reference(StateSpec::thermal(nbar), g); };
  EXPECT_THROW(scan_threshold(a, a, fam, "nbar", 0.0, 1.0, 1e-2), NumericError);
  EXPECT_THROW(scan_threshold(a, a, fam, "nbar", 1.0, 0.0, 1e-2), ConfigError);
}

}  // namespace
}  // namespace qmaj
