#pragma once

// Exact arithmetic functions: tau, big delta (prime factors with
// multiplicity), p-adic valuations and factorial valuations via Legendre.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "taulab/errors.hpp"
#include "taulab/sieve.hpp"

namespace taulab {

/// n together with tau(n) and big_delta(n).
struct ArithValue {
  natural n = 1;
  natural tau = 1;
  natural delta = 0;
};

inline ArithValue arith_value(natural n) {
  if (n == 0) throw DomainError("arith_value: n must be positive");
  const auto f = factorize(n);
  return {n, f.tau(), f.big_delta()};
}

/// Number of positive divisors.
inline natural tau(natural n) {
  if (n == 0) throw DomainError("tau: n must be positive");
  return factorize(n).tau();
}

/// Prime factors counted with multiplicity; big_delta(1) = 0.
inline natural big_delta(natural n) {
  if (n == 0) throw DomainError("big_delta: n must be positive");
  return factorize(n).big_delta();
}

/// Largest k with p^k | n.
inline natural nu(natural p, natural n) {
  if (!is_prime(p)) throw DomainError("nu: " + std::to_string(p) + " is not prime");
  if (n == 0) throw DomainError("nu: n must be positive");
  natural k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

namespace detail {

inline natural legendre_unchecked(natural p, natural n) {
  natural total = 0;
  while (n >= p) {
    n /= p;
    total += n;
  }
  return total;
}

}  // namespace detail

/// nu_p(n!) = sum_{s>=1} floor(n / p^s).
inline natural legendre_nu_factorial(natural p, natural n) {
  if (!is_prime(p)) throw DomainError("legendre_nu_factorial: " + std::to_string(p) + " is not prime");
  return detail::legendre_unchecked(p, n);
}

/// big_delta(k!) using the supplied primes, which must cover k.
inline natural delta_factorial(natural k, const PrimeTables& tables) {
  if (k < 2) return 0;
  if (tables.limit() < k) throw PreconditionError("delta_factorial: prime table below k");
  natural total = 0;
  for (const natural p : tables.primes()) {
    if (p > k) break;
    total += detail::legendre_unchecked(p, k);
  }
  return total;
}

inline natural delta_factorial(natural k) {
  if (k < 2) return 0;
  return delta_factorial(k, build_prime_tables(k));
}

/// big_delta(n! / m!) without forming either factorial.
inline natural delta_factorial_ratio(natural n, natural m, const PrimeTables& tables) {
  if (m > n) throw DomainError("delta_factorial_ratio: m must not exceed n");
  if (n < 2) return 0;
  if (tables.limit() < n) throw PreconditionError("delta_factorial_ratio: prime table below n");
  natural total = 0;
  for (const natural p : tables.primes()) {
    if (p > n) break;
    total += detail::legendre_unchecked(p, n) - detail::legendre_unchecked(p, m);
  }
  return total;
}

inline natural delta_factorial_ratio(natural n, natural m) {
  if (m > n) throw DomainError("delta_factorial_ratio: m must not exceed n");
  if (n < 2) return 0;
  return delta_factorial_ratio(n, m, build_prime_tables(n));
}

/// tau(p^k + p^s) through the factorization p^s (p^{k-s} + 1), which gives
/// (s + 1) tau(p^{k-s} + 1) since p does not divide p^{k-s} + 1.
inline natural tau_prime_power_sum(natural p, natural k, natural s) {
  if (!is_prime(p)) throw DomainError("tau_prime_power_sum: " + std::to_string(p) + " is not prime");
  if (k == 0 || s >= k) throw DomainError("tau_prime_power_sum: need 0 <= s < k");
  const natural shifted = detail::checked_add(detail::checked_pow(p, k - s, "p^(k-s)"), 1, "p^(k-s)+1");
  return (s + 1) * tau(shifted);
}

/// tau(p^k + p^s) by factorizing the sum itself.
inline natural tau_prime_power_sum_direct(natural p, natural k, natural s) {
  if (!is_prime(p)) throw DomainError("tau_prime_power_sum_direct: " + std::to_string(p) + " is not prime");
  if (k == 0 || s >= k) throw DomainError("tau_prime_power_sum_direct: need 0 <= s < k");
  const natural pk = detail::checked_pow(p, k, "p^k");
  return tau(detail::checked_add(pk, detail::checked_pow(p, s), "p^k+p^s"));
}

/// Natural log of natural log; requires x > e.
inline double lnln(double x) {
  if (!(x > std::exp(1.0))) throw DomainError("ln ln x requires x > e");
  return std::log(std::log(x));
}

/// log2(tau(n)) * ln ln n / ln n. Values persistently above 1 would
/// contradict the maximal order of tau; report only.
inline double wigert_index(natural n) {
  if (n < 16) throw DomainError("wigert_index: n must be at least 16");
  const double x = static_cast<double>(n);
  return std::log2(static_cast<double>(tau(n))) * lnln(x) / std::log(x);
}

}  // namespace taulab
