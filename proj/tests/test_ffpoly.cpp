#include <gtest/gtest.h>

#include <random>

#include "heckesplit/ffpoly.hpp"
#include "oracles.hpp"

using heckesplit::FpPoly;
namespace hs = heckesplit;
namespace oracle = heckesplit::testing;

namespace {

FpPoly P(std::uint64_t p, std::vector<std::uint64_t> c) { return FpPoly(p, std::move(c)); }

}  // namespace

TEST(FpPoly, ConstructionChecksModulusAndNormalizes) {
  EXPECT_THROW(FpPoly(4), std::invalid_argument);
  EXPECT_THROW(FpPoly(1), std::invalid_argument);
  FpPoly f(3, {4, 0, 3, 0});
  EXPECT_EQ(f.degree(), 0);
  EXPECT_EQ(f.coeffs(), std::vector<std::uint64_t>{1});
  EXPECT_TRUE(FpPoly(5).is_zero());
  EXPECT_EQ(FpPoly(5).degree(), -1);
  EXPECT_EQ(FpPoly::from_signed(7, {-1, 2}).coeffs(), (std::vector<std::uint64_t>{6, 2}));
}

TEST(FpPoly, DivRemExamples) {
  auto [q1, r1] = hs::poly_divrem(P(2, {0, 1, 1}), P(2, {0, 1}));
  EXPECT_EQ(q1, P(2, {1, 1}));
  EXPECT_TRUE(r1.is_zero());

  const FpPoly f = P(7, {3, 0, 5, 6});
  auto [q2, r2] = hs::poly_divrem(f, P(7, {1}));
  EXPECT_EQ(q2, f);
  EXPECT_TRUE(r2.is_zero());

  // x^3 + 2x + 1 = x (x^2 + 1) + (x + 1) over F_3
  const FpPoly a = P(3, {1, 2, 0, 1});
  const FpPoly b = P(3, {1, 0, 1});
  auto [q3, r3] = hs::poly_divrem(a, b);
  EXPECT_EQ(q3, P(3, {0, 1}));
  EXPECT_EQ(r3, P(3, {1, 1}));
  EXPECT_EQ(q3 * b + r3, a);
}

TEST(FpPoly, DivRemErrors) {
  EXPECT_THROW(hs::poly_divrem(P(3, {1, 1}), FpPoly(3)), std::domain_error);
  EXPECT_THROW(hs::poly_divrem(P(3, {1, 1}), P(5, {1, 1})), std::invalid_argument);
}

TEST(FpPoly, DivRemReconstructsDividend) {
  std::mt19937_64 rng(11);
  for (std::uint64_t p : {2ULL, 3ULL, 7ULL, 1000000007ULL, 9223372036854775783ULL}) {
    for (int trial = 0; trial < 200; ++trial) {
      FpPoly a = oracle::random_poly(p, 15, rng);
      FpPoly b = oracle::random_poly(p, 8, rng);
      auto [q, r] = hs::poly_divrem(a, b);
      EXPECT_EQ(q * b + r, a);
      EXPECT_LT(r.degree(), b.degree());
    }
  }
}

TEST(FpPoly, GcdExamples) {
  EXPECT_EQ(hs::poly_gcd(P(2, {0, 1, 1}), P(2, {1, 0, 1})), P(2, {1, 1}));
  EXPECT_EQ(hs::poly_gcd(P(5, {1, 2, 3}), FpPoly(5)), P(5, {2, 4, 1}));
  EXPECT_THROW(hs::poly_gcd(FpPoly(5), FpPoly(5)), std::invalid_argument);
  EXPECT_THROW(hs::poly_gcd(P(5, {1}), P(3, {1})), std::invalid_argument);
}

TEST(FpPoly, GcdOfConstructedCommonFactor) {
  std::mt19937_64 rng(5);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 101ULL}) {
    int checked = 0;
    while (checked < 100) {
      FpPoly f = oracle::random_poly(p, 6, rng);
      FpPoly g = oracle::random_poly(p, 6, rng);
      FpPoly h = oracle::random_poly(p, 6, rng);
      if (!hs::poly_gcd(g, h).is_one()) continue;
      EXPECT_EQ(hs::poly_gcd(f * g, f * h), f.monic());
      ++checked;
    }
  }
}

TEST(FpPoly, PowmodMatchesRepeatedMultiplication) {
  std::mt19937_64 rng(3);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 13ULL}) {
    for (int trial = 0; trial < 30; ++trial) {
      FpPoly m = oracle::random_poly(p, 7, rng);
      if (m.degree() < 1) continue;
      FpPoly base = oracle::random_poly(p, 9, rng);
      FpPoly expected = hs::poly_rem(FpPoly::constant(p, 1), m);
      for (unsigned e = 0; e <= 3 * p; ++e) {
        EXPECT_EQ(hs::powmod(base, e, m), expected) << "e=" << e;
        expected = hs::poly_rem(expected * base, m);
      }
    }
  }
  EXPECT_EQ(hs::powmod(P(7, {1, 2, 3}), 0, P(7, {0, 0, 1})), P(7, {1}));
  EXPECT_EQ(hs::powmod(FpPoly::x(3), 1, P(3, {1, 0, 1})), FpPoly::x(3));
  EXPECT_THROW(hs::powmod(FpPoly::x(3), 2, FpPoly(3)), std::domain_error);
}

TEST(FpPoly, SquarefreeExamples) {
  auto sq = hs::squarefree_decomposition(P(2, {0, 0, 1}));
  ASSERT_EQ(sq.size(), 1U);
  EXPECT_EQ(sq[0].first, FpPoly::x(2));
  EXPECT_EQ(sq[0].second, 2U);

  const FpPoly sf = P(5, {3, 3, 0, 3});  // 3(x^3 + x + 1), discriminant -31 != 0 mod 5
  auto single = hs::squarefree_decomposition(sf);
  ASSERT_EQ(single.size(), 1U);
  EXPECT_EQ(single[0].first, sf.monic());
  EXPECT_EQ(single[0].second, 1U);

  const FpPoly lin = P(2, {1, 1});
  const FpPoly quad = P(2, {1, 1, 1});
  auto mixed = hs::squarefree_decomposition(lin * lin * lin * quad);
  ASSERT_EQ(mixed.size(), 2U);
  EXPECT_EQ(mixed[0].first, quad);
  EXPECT_EQ(mixed[0].second, 1U);
  EXPECT_EQ(mixed[1].first, lin);
  EXPECT_EQ(mixed[1].second, 3U);

  EXPECT_THROW(hs::squarefree_decomposition(FpPoly(2)), std::invalid_argument);
}

TEST(FpPoly, SquarefreeHandlesPthPowers) {
  // (x^2 + 1)^3 * (x + 2)^6 * x over F_3: derivative of the cube part vanishes.
  const FpPoly a = P(3, {1, 0, 1});
  const FpPoly b = P(3, {2, 1});
  FpPoly f = a * a * a * FpPoly::x(3);
  for (int i = 0; i < 6; ++i) f = f * b;
  auto parts = hs::squarefree_decomposition(f);
  FpPoly rebuilt = FpPoly::constant(3, 1);
  for (const auto& [g, m] : parts)
    for (unsigned i = 0; i < m; ++i) rebuilt = rebuilt * g;
  EXPECT_EQ(rebuilt, f.monic());
  ASSERT_EQ(parts.size(), 3U);
  EXPECT_EQ(parts[0].second, 1U);
  EXPECT_EQ(parts[1].first, a);
  EXPECT_EQ(parts[1].second, 3U);
  EXPECT_EQ(parts[2].first, b);
  EXPECT_EQ(parts[2].second, 6U);
}

TEST(FpPoly, SquarefreePartsArePairwiseCoprimeAndSquarefree) {
  std::mt19937_64 rng(17);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    for (int trial = 0; trial < 300; ++trial) {
      FpPoly g = oracle::random_poly(p, 4, rng);
      FpPoly h = oracle::random_poly(p, 3, rng);
      if (g.is_zero() || h.is_zero()) continue;
      FpPoly f = g * g * h;
      for (unsigned i = 0; i < p; ++i) f = f * h;
      auto parts = hs::squarefree_decomposition(f);
      FpPoly rebuilt = FpPoly::constant(p, 1);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& [part, m] = parts[i];
        EXPECT_TRUE(hs::poly_gcd(part, part.derivative()).is_one());
        for (std::size_t j = i + 1; j < parts.size(); ++j) EXPECT_TRUE(hs::poly_gcd(part, parts[j].first).is_one());
        for (unsigned e = 0; e < m; ++e) rebuilt = rebuilt * part;
      }
      EXPECT_EQ(rebuilt, f.monic());
    }
  }
}

TEST(Factor, SmallExamples) {
  auto f1 = hs::factor(P(2, {1, 0, 1}));
  EXPECT_EQ(f1.unit, 1U);
  ASSERT_EQ(f1.factors.size(), 1U);
  EXPECT_EQ(f1.factors[0].first, P(2, {1, 1}));
  EXPECT_EQ(f1.factors[0].second, 2U);

  auto f2 = hs::factor(P(2, {1, 1, 1}));
  ASSERT_EQ(f2.factors.size(), 1U);
  EXPECT_EQ(f2.factors[0].first, P(2, {1, 1, 1}));
  EXPECT_EQ(f2.factors[0].second, 1U);

  auto f3 = hs::factor(P(7, {3}));
  EXPECT_EQ(f3.unit, 3U);
  EXPECT_TRUE(f3.factors.empty());

  EXPECT_THROW(hs::factor(FpPoly(7)), std::invalid_argument);
}

TEST(Factor, ExhaustiveAgreementWithTrialDivision) {
  const std::vector<std::pair<std::uint64_t, unsigned>> ranges = {{2, 6}, {3, 6}};
  for (const auto& [p, max_degree] : ranges) {
    for (unsigned d = 1; d <= max_degree; ++d) {
      for (const auto& f : oracle::all_monic(p, d)) {
        auto got = hs::factor(f, d);
        auto expected = oracle::trial_division_factor(f);
        ASSERT_EQ(got.factors.size(), expected.size()) << f.to_string();
        std::size_t i = 0;
        for (const auto& [g, m] : expected) {
          EXPECT_EQ(got.factors[i].first, g) << f.to_string();
          EXPECT_EQ(got.factors[i].second, m) << f.to_string();
          ++i;
        }
      }
    }
  }
}

TEST(Factor, RoundTripCertificateAndSeedIndependence) {
  std::mt19937_64 rng(2024);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 41ULL, 1000003ULL}) {
    for (int trial = 0; trial < 200; ++trial) {
      FpPoly f = oracle::random_poly(p, 24, rng);
      if (f.is_zero()) continue;
      auto fac = hs::factor(f, 1);
      EXPECT_EQ(fac.expand(), f);
      EXPECT_TRUE(std::is_sorted(fac.factors.begin(), fac.factors.end()));
      for (const auto& [g, m] : fac.factors) {
        EXPECT_TRUE(g.is_monic());
        EXPECT_GE(m, 1U);
        EXPECT_TRUE(hs::irreducibility_certificate(g)) << g.to_string();
      }
      EXPECT_EQ(hs::factor(f, 987654321), fac);
    }
  }
}

TEST(IsTotallySplit, Examples) {
  EXPECT_TRUE(hs::is_totally_split(P(2, {0, 1, 1})));
  EXPECT_FALSE(hs::is_totally_split(P(2, {1, 1, 1})));
  EXPECT_TRUE(hs::is_totally_split(P(5, {3})));
  EXPECT_TRUE(hs::is_totally_split(P(2, {1, 0, 0, 0, 1})));  // (x+1)^4
  EXPECT_THROW(hs::is_totally_split(FpPoly(3)), std::invalid_argument);
}

TEST(IsTotallySplit, AgreesWithFactorOnRandomInputs) {
  std::mt19937_64 rng(99);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    for (int trial = 0; trial < 10000; ++trial) {
      FpPoly f = oracle::random_poly(p, 12, rng);
      // Bias toward split inputs so both outcomes are exercised.
      if (trial % 3 == 0) {
        f = FpPoly::constant(p, 1);
        std::uniform_int_distribution<std::uint64_t> root(0, p - 1);
        std::uniform_int_distribution<unsigned> deg(0, 12);
        for (unsigned i = deg(rng); i > 0; --i) f = f * FpPoly(p, {(p - root(rng)) % p, 1});
      }
      ASSERT_EQ(hs::is_totally_split(f), hs::factor(f, trial).all_linear()) << f.to_string();
    }
  }
}

TEST(IsTotallySplit, AgreesWithRootStrippingExhaustively) {
  for (std::uint64_t p : {2ULL, 3ULL}) {
    for (unsigned d = 0; d <= 6; ++d) {
      for (const auto& f : oracle::all_monic(p, d)) EXPECT_EQ(hs::is_totally_split(f), oracle::splits_by_root_stripping(f));
    }
  }
}

TEST(IrreducibilityCertificate, MatchesTrialDivision) {
  for (std::uint64_t p : {2ULL, 3ULL}) {
    for (unsigned d = 1; d <= 6; ++d) {
      for (const auto& f : oracle::all_monic(p, d)) {
        auto tf = oracle::trial_division_factor(f);
        bool irreducible = tf.size() == 1 && tf.begin()->second == 1;
        EXPECT_EQ(hs::irreducibility_certificate(f), irreducible) << f.to_string();
      }
    }
  }
}

TEST(SplitCounting, ClosedForms) {
  for (unsigned d = 0; d <= 20; ++d) {
    EXPECT_EQ(hs::count_split_polys(2, d), mpz_class(d + 1));
    EXPECT_EQ(hs::count_split_polys(3, d), mpz_class((d + 1) * (d + 2) / 2));
  }
  EXPECT_THROW(hs::count_split_polys(6, 2), std::invalid_argument);
}

TEST(SplitCounting, BruteForceEnumeration) {
  const std::vector<std::pair<std::uint64_t, unsigned>> ranges = {{2, 6}, {3, 4}, {5, 4}};
  for (const auto& [p, max_d] : ranges) {
    for (unsigned d = 0; d <= max_d; ++d) {
      unsigned long count = 0;
      for (const auto& f : oracle::all_monic(p, d)) count += oracle::splits_by_root_stripping(f) ? 1 : 0;
      EXPECT_EQ(hs::count_split_polys(p, d), mpz_class(count)) << "p=" << p << " d=" << d;
    }
  }
}

TEST(SplitCounting, Probability) {
  EXPECT_EQ(hs::split_probability(7, 0), mpq_class(1));
  EXPECT_EQ(hs::split_probability(2, 1), mpq_class(1));
  EXPECT_EQ(hs::split_probability(2, 7), mpq_class(1, 16));
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
    for (unsigned d = 0; d < 30; ++d) {
      mpq_class a = hs::split_probability(p, d), b = hs::split_probability(p, d + 1);
      EXPECT_GE(a, b);
      EXPECT_LE(a, 1);
      EXPECT_GE(b, 0);
    }
  }
  EXPECT_THROW(hs::split_probability(9, 1), std::invalid_argument);
}
