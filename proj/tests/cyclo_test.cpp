#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "reinhardt/construct.hpp"
#include "reinhardt/cyclo.hpp"

namespace reinhardt {
namespace {

TEST(NumberTheory, Basics) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(97));
  EXPECT_FALSE(is_prime(91));
  EXPECT_FALSE(is_prime(1));
  EXPECT_EQ(euler_phi(240), 64u);
  EXPECT_EQ(euler_phi(210), 48u);
  EXPECT_EQ(divisors(30), (std::vector<std::uint64_t>{1, 2, 3, 5, 6, 10, 15, 30}));
  EXPECT_EQ(odd_prime_divisors(210), (std::vector<std::uint64_t>{3, 5, 7}));
}

TEST(IntPolynomial, Arithmetic) {
  const IntPolynomial a{1, -1};
  const IntPolynomial b{1, 1};
  EXPECT_EQ(a * b, (IntPolynomial{1, 0, -1}));
  EXPECT_EQ(a + b, (IntPolynomial{2}));
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ((a - a).degree(), -1);
  EXPECT_EQ((a * b).evaluate(3), -8);
}

TEST(IntPolynomial, DivideMonic) {
  const IntPolynomial f{-1, 0, 0, 1};
  const auto r = divide_monic(f, IntPolynomial{-1, 1});
  EXPECT_EQ(r.quotient, (IntPolynomial{1, 1, 1}));
  EXPECT_TRUE(r.remainder.is_zero());
  const auto s = divide_monic(IntPolynomial{2, 0, 1}, IntPolynomial{1, 1});
  EXPECT_EQ(s.quotient * IntPolynomial({1, 1}) + s.remainder, (IntPolynomial{2, 0, 1}));
  EXPECT_LT(s.remainder.degree(), 1);
}

TEST(IntPolynomial, TernaryConversion) {
  const auto t = TernarySeq::parse("+0-0");
  const auto p = IntPolynomial::from_ternary(t);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.to_ternary(4), t);
  EXPECT_FALSE((IntPolynomial{2, 1}).to_ternary());
}

// Phi_m(1) is p for m = p^k and 1 for any other m > 1.
TEST(Cyclotomic, ValueAtOne) {
  for (std::uint64_t m = 2; m <= 300; ++m) {
    std::uint64_t prime_power_base = 0;
    for (std::uint64_t p = 2; p <= m; ++p) {
      if (!is_prime(p) || m % p) continue;
      std::uint64_t x = m;
      while (x % p == 0) x /= p;
      if (x == 1) prime_power_base = p;
      break;
    }
    const mpz_class expected = prime_power_base ? prime_power_base : 1;
    EXPECT_EQ(cyclotomic(m).evaluate(1), expected) << m;
  }
}

TEST(Cyclotomic, DegreeAndProductIdentity) {
  for (std::uint64_t n = 1; n <= 60; ++n) {
    IntPolynomial prod{1};
    for (auto d : divisors(n)) prod = prod * cyclotomic(d);
    EXPECT_EQ(prod, IntPolynomial::monomial(n) - IntPolynomial{1}) << n;
    EXPECT_EQ(cyclotomic(n).degree(), static_cast<long>(euler_phi(n)));
  }
}

TEST(Cyclotomic, ComposeNegPower) {
  EXPECT_EQ(compose_neg_power(3, 2), (IntPolynomial{1, 0, -1, 0, 1}));
  // Phi_p(-z^{n/p}) is divisible by Phi_{2n}.
  for (std::uint64_t n : {15, 30, 45, 105}) {
    for (auto p : odd_prime_divisors(n)) {
      EXPECT_TRUE(divides_cyclotomic(compose_neg_power(p, n / p), n)) << n << " " << p;
    }
  }
}

std::complex<double> eval_at_root(const TernarySeq& s, int n) {
  std::complex<double> acc = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k]) acc += double(s[k]) * std::polar(1.0, std::numbers::pi * double(k) / n);
  }
  return acc;
}

TernarySeq random_ternary(std::mt19937_64& rng, std::size_t len) {
  std::uniform_int_distribution<int> d(-1, 1);
  std::vector<std::int8_t> v(len);
  for (auto& x : v) x = static_cast<std::int8_t>(d(rng));
  return TernarySeq(std::move(v));
}

// Exact divisibility against floating evaluation at exp(i pi / n). Half the
// samples are forced divisible by building them from the generators.
TEST(Cyclotomic, DivisibilityMatchesFloatRoot) {
  std::mt19937_64 rng(7);
  const std::vector<int> ns{6, 10, 12, 15, 18, 21, 30};
  int divisible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = ns[static_cast<std::size_t>(trial) % ns.size()];
    TernarySeq s;
    if (trial % 2 == 0) {
      s = random_ternary(rng, static_cast<std::size_t>(n));
    } else {
      const auto ps = odd_prime_divisors(static_cast<std::uint64_t>(n));
      const std::uint64_t p = ps.front();
      const auto f = IntPolynomial::from_ternary(random_ternary(rng, static_cast<std::size_t>(n) / p));
      const auto t = (f * compose_neg_power(p, static_cast<std::uint64_t>(n) / p)).to_ternary(static_cast<std::size_t>(n));
      ASSERT_TRUE(t);
      s = *t;
    }
    if (s.nonzero_count() == 0) continue;
    const bool exact = divides_cyclotomic(IntPolynomial::from_ternary(s), static_cast<std::uint64_t>(n));
    const bool numeric = std::abs(eval_at_root(s, n)) < 1e-9;
    EXPECT_EQ(exact, numeric) << s.str() << " n=" << n;
    const RootOfUnityCheck check(static_cast<std::uint64_t>(n));
    if (exact) {
      EXPECT_TRUE(check.vanishes(s.values()));
      ++divisible;
    }
  }
  EXPECT_GE(divisible, 80);
}

TEST(Residues, MatchExactRemainders) {
  for (std::uint64_t n : {15, 30}) {
    const CyclotomicResidues res(n);
    EXPECT_EQ(res.dimension(), euler_phi(2 * n));
    const auto phi = cyclotomic(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto r = divide_monic(IntPolynomial::monomial(k), phi).remainder;
      for (std::size_t i = 0; i < res.dimension(); ++i) {
        const long want = i < r.coefficients().size() ? r[i].get_si() : 0;
        EXPECT_EQ(res.power(k)[i], want);
      }
    }
  }
}

TEST(Decompose, RoundTrip) {
  const std::uint64_t n = 30, p = 3, q = 5;
  const auto caps = default_degree_caps(n, p, q);
  EXPECT_EQ(caps.f1_terms, 6u);
  EXPECT_EQ(caps.f2_terms, 10u);
  const auto g1 = compose_neg_power(q, n / q);
  const auto g2 = compose_neg_power(p, n / p);
  const SpecEnumerator en(ConstructionParams(3, 5, EvenComposition({1, 1})));
  int found = 0;
  en.run([&](std::uint64_t, std::span<const std::int8_t> coeffs) {
    const auto F = IntPolynomial::from_ternary(TernarySeq(std::vector<std::int8_t>(coeffs.begin(), coeffs.end())));
    const auto r = decompose_two_term(F, n, p, q);
    ASSERT_EQ(r.status, DecompositionStatus::Found);
    const auto& d = *r.decomposition;
    EXPECT_TRUE(d.f1.to_ternary());
    EXPECT_TRUE(d.f2.to_ternary());
    EXPECT_LT(d.f1.degree(), static_cast<long>(caps.f1_terms));
    EXPECT_LT(d.f2.degree(), static_cast<long>(caps.f2_terms));
    EXPECT_EQ(poly_mul_add(d.f1, g1, d.f2, g2), F);
    ++found;
  });
  EXPECT_EQ(found, 256);
  // The (5, 3) order puts the same F in the other roles.
  std::vector<std::int8_t> first(30);
  en.coefficients(0, first);
  EXPECT_EQ(decompose_two_term(IntPolynomial::from_ternary(TernarySeq(first)), n, q, p).status,
            DecompositionStatus::Found);
}

TEST(Decompose, InconsistentWhenNotInIdeal) {
  const auto r = decompose_two_term(IntPolynomial{1}, 30, 3, 5);
  EXPECT_EQ(r.status, DecompositionStatus::Inconsistent);
  EXPECT_FALSE(r.decomposition);
}

}  // namespace
}  // namespace reinhardt
