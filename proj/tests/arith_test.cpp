#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "taulab/arith.hpp"

using namespace taulab;

TEST(Tau, Examples) {
  EXPECT_EQ(tau(1), 1u);
  EXPECT_EQ(tau(12), 6u);
  EXPECT_EQ(tau(1'048'577), 4u);
  EXPECT_EQ(oracle::tau(1'048'577), 4u);
  EXPECT_THROW(tau(0), DomainError);
}

TEST(BigDelta, Examples) {
  EXPECT_EQ(big_delta(1), 0u);
  EXPECT_EQ(big_delta(360), 6u);
  EXPECT_EQ(big_delta(natural{1} << 40), 40u);
  EXPECT_THROW(big_delta(0), DomainError);
}

TEST(Nu, Examples) {
  EXPECT_EQ(nu(2, 40), 3u);
  EXPECT_EQ(nu(5, 7), 0u);
  EXPECT_EQ(nu(3, 14'348'907), 15u);  // 3^15
  EXPECT_THROW(nu(4, 16), DomainError);
  EXPECT_THROW(nu(1, 16), DomainError);
}

TEST(Legendre, Examples) {
  EXPECT_EQ(legendre_nu_factorial(2, 10), 8u);
  EXPECT_EQ(legendre_nu_factorial(3, 10), 4u);
  EXPECT_EQ(legendre_nu_factorial(7, 6), 0u);
  EXPECT_THROW(legendre_nu_factorial(9, 10), DomainError);
}

TEST(Legendre, EqualsSumOfValuations) {
  for (const natural p : {2, 3, 5, 7, 11, 97}) {
    natural running = 0;
    for (natural n = 1; n <= 3000; ++n) {
      running += nu(p, n);
      ASSERT_EQ(legendre_nu_factorial(p, n), running) << p << " " << n;
    }
  }
}

TEST(DeltaFactorial, Examples) {
  EXPECT_EQ(delta_factorial(0), 0u);
  EXPECT_EQ(delta_factorial(1), 0u);
  EXPECT_EQ(delta_factorial(6), 7u);
  EXPECT_EQ(delta_factorial(10), 15u);
  EXPECT_EQ(delta_factorial(100), 239u);
  EXPECT_THROW(delta_factorial(200, build_prime_tables(100)), PreconditionError);
}

TEST(DeltaFactorial, MatchesRunningSumOfBigDelta) {
  natural running = 0;
  const auto tables = build_prime_tables(5000);
  for (natural k = 2; k <= 5000; ++k) {
    running += oracle::big_delta(k);
    ASSERT_EQ(delta_factorial(k, tables), running) << k;
  }
}

TEST(DeltaFactorialRatio, Examples) {
  EXPECT_EQ(delta_factorial_ratio(5, 2), 4u);
  EXPECT_EQ(delta_factorial_ratio(77, 77), 0u);
  EXPECT_EQ(delta_factorial_ratio(100, 99), oracle::big_delta(100));
  EXPECT_EQ(delta_factorial_ratio(100, 99), 4u);
  EXPECT_THROW(delta_factorial_ratio(3, 4), DomainError);
}

TEST(DeltaFactorialRatio, TelescopesOverRandomPairs) {
  auto rng = oracle::rng(5);
  const auto tables = build_prime_tables(20'000);
  std::uniform_int_distribution<natural> pick(0, 20'000);
  for (int i = 0; i < 300; ++i) {
    natural a = pick(rng), b = pick(rng);
    if (a < b) std::swap(a, b);
    natural expected = 0;
    for (natural j = b + 1; j <= a; ++j) expected += oracle::big_delta(j);
    ASSERT_EQ(delta_factorial_ratio(a, b, tables), expected) << a << " " << b;
  }
}

TEST(TauPrimePowerSum, Examples) {
  EXPECT_EQ(tau_prime_power_sum(3, 3, 1), 8u);
  EXPECT_EQ(oracle::tau(30), 8u);
  EXPECT_EQ(tau_prime_power_sum(2, 4, 2), 6u);
  EXPECT_EQ(oracle::tau(20), 6u);
  EXPECT_EQ(tau_prime_power_sum(2, 20, 1), 8u);
  EXPECT_EQ(tau_prime_power_sum_direct(2, 20, 1), 8u);
  EXPECT_THROW(tau_prime_power_sum(4, 3, 1), DomainError);
  EXPECT_THROW(tau_prime_power_sum(2, 3, 3), DomainError);
  EXPECT_THROW(tau_prime_power_sum(2, 64, 1), CapacityError);
}

TEST(TauPrimePowerSum, BothPathsAgree) {
  for (const natural p : {2, 3, 5, 7, 11, 13}) {
    for (natural k = 1; k <= 40; ++k) {
      if (!detail::pow_at_most(p, k, kNaturalCap / 2)) break;
      for (natural s = 0; s < k; ++s) ASSERT_EQ(tau_prime_power_sum(p, k, s), tau_prime_power_sum_direct(p, k, s));
    }
  }
}

TEST(Wigert, Examples) {
  EXPECT_NEAR(wigert_index(1024), std::log2(11.0) * std::log(std::log(1024.0)) / std::log(1024.0), 1e-12);
  EXPECT_NEAR(wigert_index(1024), 0.966, 5e-4);
  const natural p = 1'000'000'007;
  EXPECT_NEAR(wigert_index(p), std::log(std::log(1e9 + 7)) / std::log(1e9 + 7), 1e-12);
  EXPECT_LT(wigert_index(p), 0.15);
  const double highly = wigert_index(720'720);
  EXPECT_NEAR(highly, std::log2(240.0) * std::log(std::log(720720.0)) / std::log(720720.0), 1e-12);
  EXPECT_THROW(wigert_index(15), DomainError);
}

TEST(Lnln, Domain) {
  EXPECT_THROW(lnln(2.0), DomainError);
  EXPECT_NEAR(lnln(100.0), std::log(std::log(100.0)), 0);
}

// Property checks against trial division.

TEST(ArithProperties, TauAndDeltaMatchOracleOnRange) {
  const auto t = oracle::tau_table(200'000);
  for (natural n = 1; n <= 200'000; ++n) {
    ASSERT_EQ(tau(n), t[n]) << n;
    ASSERT_EQ(big_delta(n), n == 1 ? 0 : oracle::big_delta(n)) << n;
  }
}

TEST(ArithProperties, TauExceedsDeltaUpToOneMillion) {
  for (natural n = 1; n <= 1'000'000; ++n) {
    const auto v = arith_value(n);
    ASSERT_GT(v.tau, v.delta) << n;
  }
}

TEST(ArithProperties, MultiplicativeOnCoprimePairs) {
  auto rng = oracle::rng(31);
  std::uniform_int_distribution<natural> pick(1, 3'000'000);
  int checked = 0;
  while (checked < 5000) {
    const natural a = pick(rng), b = pick(rng);
    if (std::gcd(a, b) != 1) continue;
    ASSERT_EQ(tau(a * b), tau(a) * tau(b)) << a << " " << b;
    ++checked;
  }
}

TEST(ArithProperties, DeltaCompletelyAdditive) {
  auto rng = oracle::rng(32);
  std::uniform_int_distribution<natural> pick(1, 3'000'000'000ULL);
  for (int i = 0; i < 5000; ++i) {
    const natural a = pick(rng), b = pick(rng);
    ASSERT_EQ(big_delta(a * b), big_delta(a) + big_delta(b)) << a << " " << b;
  }
}

TEST(ArithProperties, LargeRandomAgainstTrialDivision) {
  auto rng = oracle::rng(33);
  std::uniform_int_distribution<natural> pick(1, 1'000'000'000'000ULL);
  for (int i = 0; i < 300; ++i) {
    const natural n = pick(rng);
    ASSERT_EQ(tau(n), oracle::tau(n)) << n;
    ASSERT_EQ(big_delta(n), oracle::big_delta(n)) << n;
  }
}

TEST(ArithProperties, OddPowerPlusOneDivisibility) {
  // (m^b + 1) | (m^a + 1) for odd b | a, and tau(m^a+1) >= tau(a) >= Delta(a).
  for (const natural m : {2, 3, 5, 6, 10}) {
    for (natural a = 1; a <= 35; a += 2) {
      if (!detail::pow_at_most(m, a, kNaturalCap - 1)) break;
      const natural big = detail::checked_pow(m, a) + 1;
      for (natural b = 1; b <= a; b += 2) {
        if (a % b != 0) continue;
        ASSERT_EQ(big % (detail::checked_pow(m, b) + 1), 0u) << m << "^" << a;
      }
      ASSERT_GE(tau(big), tau(a));
      ASSERT_GE(tau(a), big_delta(a));
    }
  }
}
