#pragma once

// Brute-force reference implementations. These deliberately share no code
// with the library: divisor counts come from trial division or a plain
// multiples sieve, never from SPF tables or segmented sieving.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

/// Divisors counted in pairs up to sqrt(n).
inline u64 tau(u64 n) {
  u64 c = 0;
  for (u64 d = 1; d * d <= n; ++d)
    if (n % d == 0) c += (d * d == n) ? 1 : 2;
  return c;
}

/// Trial-division factorization, ascending primes.
inline std::map<u64, u64> factor(u64 n) {
  std::map<u64, u64> f;
  for (u64 d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      ++f[d];
      n /= d;
    }
  if (n > 1) ++f[n];
  return f;
}

inline u64 big_delta(u64 n) {
  u64 s = 0;
  for (const auto& [p, e] : factor(n)) s += e;
  return s;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// tau(1..limit) by walking every multiple of every d.
inline std::vector<u64> tau_table(u64 limit) {
  std::vector<u64> t(limit + 1, 0);
  for (u64 d = 1; d <= limit; ++d)
    for (u64 k = d; k <= limit; k += d) ++t[k];
  return t;
}

/// T_n(mu) from a tau table: returns {max tau(n+m), tau(n), first argmax}.
struct TnBrute {
  u64 max_tau, tau_n, argmax;
};

inline u64 root_floor(u64 n, u64 k) {
  u64 r = 0;
  for (;;) {
    unsigned __int128 p = 1;
    for (u64 i = 0; i < k; ++i) p *= (r + 1);
    if (p > n) return r;
    ++r;
  }
}

inline TnBrute tn(u64 n, u64 mu, const std::vector<u64>& table) {
  const u64 w = root_floor(n, mu);
  TnBrute out{0, table[n], 0};
  for (u64 m = 1; m <= w; ++m)
    if (table[n + m] > out.max_tau) {
      out.max_tau = table[n + m];
      out.argmax = m;
    }
  return out;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracle
