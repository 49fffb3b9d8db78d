#pragma once

// Prime tables, 64-bit factorization and segmented divisor counting over
// short windows [base+1, base+w].

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "taulab/errors.hpp"

namespace taulab {

/// Default upper bound on sieve tables.
inline constexpr natural kSieveCap = natural{1} << 31;

/// Smallest-prime-factor table for [0, limit]. Entries 0 and 1 are zero.
class SpfTable {
 public:
  SpfTable() = default;

  natural limit() const noexcept { return limit_; }
  natural spf(natural n) const { return spf_.at(n); }
  bool is_prime(natural n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

  /// Ascending primes <= min(limit, bound).
  std::vector<natural> primes_up_to(natural bound) const {
    std::vector<natural> out;
    const natural hi = std::min(bound, limit_);
    for (natural n = 2; n <= hi; ++n)
      if (spf_[n] == n) out.push_back(n);
    return out;
  }

 private:
  friend SpfTable build_spf(natural limit);
  natural limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

/// Linear sieve producing smallest prime factors up to limit.
inline SpfTable build_spf(natural limit) {
  if (limit < 2 || limit > kSieveCap)
    throw CapacityError("spf table limit must lie in [2, 2^31], got " + std::to_string(limit));
  SpfTable t;
  t.limit_ = limit;
  t.spf_.assign(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (natural i = 2; i <= limit; ++i) {
    if (t.spf_[i] == 0) {
      t.spf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t si = t.spf_[i];
    for (const std::uint32_t p : primes) {
      if (p > si || static_cast<natural>(p) * i > limit) break;
      t.spf_[p * i] = p;
    }
  }
  return t;
}

/// Primes up to a limit together with prefix sums over them. Each query at
/// x covers the primes p <= x.
class PrimeTables {
 public:
  PrimeTables() = default;

  natural limit() const noexcept { return limit_; }
  std::span<const natural> primes() const noexcept { return primes_; }

  /// pi(x) for x <= limit.
  natural pi(natural x) const {
    check(x);
    return static_cast<natural>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
  }
  /// Sum of 1/p over p <= x.
  double recip_sum(natural x) const { return prefix(recip_, x); }
  /// Sum of 1/(p-1) over p <= x.
  double recip_pm1_sum(natural x) const { return prefix(recip_pm1_, x); }
  /// Sum of 1/ln p over p <= x.
  double recip_log_sum(natural x) const { return prefix(recip_log_, x); }

 private:
  friend PrimeTables build_prime_tables(natural limit);

  void check(natural x) const {
    if (x > limit_)
      throw PreconditionError("prime table limit " + std::to_string(limit_) + " below query " +
                              std::to_string(x));
  }
  double prefix(const std::vector<double>& sums, natural x) const {
    const natural count = pi(x);
    return count == 0 ? 0.0 : sums[count - 1];
  }

  natural limit_ = 0;
  std::vector<natural> primes_;
  // Running sums indexed by prime ordinal; compensated summation keeps the
  // tail accurate to a few ulps.
  std::vector<double> recip_, recip_pm1_, recip_log_;
};

namespace detail {

/// Plain Eratosthenes bit sieve, odd numbers only.
inline std::vector<natural> sieve_primes(natural limit) {
  std::vector<natural> out;
  if (limit < 2) return out;
  out.push_back(2);
  const natural half = (limit - 1) / 2;  // index i represents 2i+1 for i >= 1
  std::vector<bool> composite(half + 1, false);
  for (natural i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const natural p = 2 * i + 1;
    out.push_back(p);
    if (p * p > limit) continue;
    for (natural j = (p * p - 1) / 2; j <= half; j += p) composite[j] = true;
  }
  return out;
}

/// Neumaier running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

inline PrimeTables build_prime_tables(natural limit) {
  if (limit < 2 || limit > kSieveCap)
    throw CapacityError("prime table limit must lie in [2, 2^31], got " + std::to_string(limit));
  PrimeTables t;
  t.limit_ = limit;
  t.primes_ = detail::sieve_primes(limit);
  const std::size_t n = t.primes_.size();
  t.recip_.resize(n);
  t.recip_pm1_.resize(n);
  t.recip_log_.resize(n);
  detail::CompensatedSum a, b, c;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = static_cast<double>(t.primes_[i]);
    a.add(1.0 / p);
    b.add(1.0 / (p - 1.0));
    c.add(1.0 / std::log(p));
    t.recip_[i] = a.value();
    t.recip_pm1_[i] = b.value();
    t.recip_log_[i] = c.value();
  }
  return t;
}

/// Largest r with r^k <= n, by integer binary search.
inline natural integer_kth_root(natural n, natural k) {
  if (k == 0) throw DomainError("integer_kth_root: k must be positive");
  if (k == 1 || n < 2) return n;
  if (k >= 64) return 1;
  natural lo = 1;
  natural hi = natural{1} << (64 / k + 1);  // (2^(64/k+1))^k > 2^64
  while (hi - lo > 1) {
    const natural mid = lo + (hi - lo) / 2;
    if (detail::pow_at_most(mid, k, n))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

inline natural isqrt(natural n) { return integer_kth_root(n, 2); }

// ---------------------------------------------------------------------------
// Deterministic primality and factorization for n < 2^63.

namespace detail {

inline natural mulmod(natural a, natural b, natural m) {
  return static_cast<natural>(static_cast<u128>(a) * b % m);
}

inline natural powmod(natural a, natural e, natural m) {
  natural r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Miller-Rabin with the first twelve prime bases; exact for all 64-bit n.
inline bool is_prime(natural n) {
  if (n < 2) return false;
  static constexpr natural kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (const natural p : kBases) {
    if (n % p == 0) return n == p;
  }
  natural d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (const natural a : kBases) {
    natural x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Canonical prime-exponent decomposition.
struct Factorization {
  struct Term {
    natural prime;
    natural exponent;
    friend bool operator==(const Term&, const Term&) = default;
  };

  natural n = 1;
  std::vector<Term> factors;

  /// Number of divisors, prod (1 + e_i).
  natural tau() const {
    natural t = 1;
    for (const auto& f : factors) t *= f.exponent + 1;
    return t;
  }
  /// Total prime-factor count with multiplicity.
  natural big_delta() const {
    natural d = 0;
    for (const auto& f : factors) d += f.exponent;
    return d;
  }
  /// Exponent of p (zero when p does not divide n).
  natural valuation(natural p) const {
    for (const auto& f : factors)
      if (f.prime == p) return f.exponent;
    return 0;
  }
};

inline constexpr std::uint64_t kDefaultSplitSeed = 0x7a75'6c61'6231ULL;

namespace detail {

/// Brent's variant of Pollard rho. n must be odd, composite, not a perfect
/// prime power of a small prime. Returns a nontrivial divisor.
inline natural pollard_brent(natural n, std::mt19937_64& rng) {
  for (;;) {
    const natural c = rng() % (n - 1) + 1;
    natural y = rng() % n;
    const natural m = 128;
    natural g = 1, q = 1, r = 1, x = 0, ys = 0;
    auto f = [&](natural v) {
      const natural sq = mulmod(v, v, n);
      return sq + c >= n ? sq + c - n : sq + c;
    };
    do {
      x = y;
      for (natural i = 0; i < r; ++i) y = f(y);
      natural k = 0;
      do {
        ys = y;
        const natural lim = std::min(m, r - k);
        for (natural i = 0; i < lim; ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void split_into(natural n, std::vector<natural>& out, std::mt19937_64& rng) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const natural d = pollard_brent(n, rng);
  split_into(d, out, rng);
  split_into(n / d, out, rng);
}

inline Factorization collect(natural n, std::vector<natural>& primes) {
  std::sort(primes.begin(), primes.end());
  Factorization f;
  f.n = n;
  for (const natural p : primes) {
    if (!f.factors.empty() && f.factors.back().prime == p)
      ++f.factors.back().exponent;
    else
      f.factors.push_back({p, 1});
  }
  return f;
}

inline void check_factor_input(natural n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  if (n > kNaturalCap) throw CapacityError("factorize: n must be below 2^63");
}

/// Trial division by the given ascending primes, then Miller-Rabin plus
/// Pollard-Brent on whatever cofactor remains.
inline Factorization factorize_trial(natural n, std::span<const natural> primes, std::uint64_t seed) {
  check_factor_input(n);
  std::vector<natural> found;
  natural rest = n;
  // Trial division only pays off for small primes; rho handles the rest.
  constexpr natural kTrialBound = 1u << 12;
  for (const natural p : primes) {
    if (p > kTrialBound || p * p > rest) break;
    while (rest % p == 0) {
      found.push_back(p);
      rest /= p;
    }
  }
  while (rest % 2 == 0) {
    found.push_back(2);
    rest /= 2;
  }
  if (rest > 1) {
    std::mt19937_64 rng(seed);
    split_into(rest, found, rng);
  }
  return collect(n, found);
}

}  // namespace detail

/// Factorization with the SPF fast path for n <= table limit.
inline Factorization factorize(natural n, const SpfTable& tables, std::uint64_t seed = kDefaultSplitSeed) {
  detail::check_factor_input(n);
  if (n <= tables.limit()) {
    Factorization f;
    f.n = n;
    while (n > 1) {
      const natural p = tables.spf(n);
      natural e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      f.factors.push_back({p, e});
    }
    return f;
  }
  static constexpr natural kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  return detail::factorize_trial(n, kSmall, seed);
}

inline Factorization factorize(natural n, const PrimeTables& tables, std::uint64_t seed = kDefaultSplitSeed) {
  return detail::factorize_trial(n, tables.primes(), seed);
}

/// Process-wide SPF table used by convenience overloads. Built on first use,
/// immutable afterwards.
inline const SpfTable& default_spf() {
  static const SpfTable table = build_spf(natural{1} << 20);
  return table;
}

inline Factorization factorize(natural n) { return factorize(n, default_spf()); }

// ---------------------------------------------------------------------------
// Segmented divisor counting.

/// tau over the window [base+1, base+w].
struct WindowTauSummary {
  natural base = 0;
  natural w = 0;
  std::vector<natural> tau_values;
  natural max_tau = 0;
  natural argmax_offset = 0;  // 1-based, smallest maximizer
  natural sum_tau = 0;
};

namespace detail {

/// Segmented count over [lo, lo+len) writing tau into out. Primes must
/// cover sqrt(lo+len-1).
inline void window_tau_block(natural lo, natural len, std::span<const natural> primes, natural* out) {
  const natural hi = lo + len - 1;
  std::vector<natural> rest(len);
  std::vector<std::uint8_t> exps(len, 0);
  for (natural i = 0; i < len; ++i) {
    rest[i] = lo + i;
    out[i] = 1;
  }
  for (const natural p : primes) {
    if (p > hi / p) break;
    // Mark every power p^e <= hi; each element gets one increment per power
    // that divides it.
    natural pk = p;
    for (;;) {
      const natural first = (lo + pk - 1) / pk * pk;
      for (natural x = first; x <= hi; x += pk) {
        ++exps[x - lo];
        rest[x - lo] /= p;
      }
      if (pk > hi / p) break;
      pk *= p;
    }
    const natural first = (lo + p - 1) / p * p;
    for (natural x = first; x <= hi; x += p) {
      out[x - lo] *= exps[x - lo] + natural{1};
      exps[x - lo] = 0;
    }
  }
  for (natural i = 0; i < len; ++i)
    if (rest[i] > 1) out[i] *= 2;
}

}  // namespace detail

/// tau(base+1), ..., tau(base+w) by segmented sieving. With threads > 1 the
/// window is split into contiguous blocks; results are identical to the
/// single-threaded run.
inline WindowTauSummary window_tau(natural base, natural w, const PrimeTables& tables, unsigned threads = 1) {
  if (w == 0) throw DomainError("window_tau: w must be positive");
  const natural hi = detail::checked_add(base, w, "window end");
  if (tables.limit() < isqrt(hi))
    throw PreconditionError("window_tau: prime table limit " + std::to_string(tables.limit()) +
                            " below sqrt(" + std::to_string(hi) + ")");
  const auto primes = tables.primes();
  WindowTauSummary s;
  s.base = base;
  s.w = w;
  s.tau_values.resize(w);

  // Bounded block size keeps scratch memory flat for wide windows.
  constexpr natural kBlock = natural{1} << 18;
  const natural blocks = (w + kBlock - 1) / kBlock;
  auto run_block = [&](natural b) {
    const natural off = b * kBlock;
    const natural len = std::min(kBlock, w - off);
    detail::window_tau_block(base + 1 + off, len, primes, s.tau_values.data() + off);
  };
  const unsigned workers = static_cast<unsigned>(std::min<natural>(std::max(1u, threads), blocks));
  if (workers <= 1) {
    for (natural b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (natural b = t; b < blocks; b += workers) run_block(b);
      });
    for (auto& th : pool) th.join();
  }

  for (natural i = 0; i < w; ++i) {
    const natural v = s.tau_values[i];
    s.sum_tau += v;
    if (v > s.max_tau) {
      s.max_tau = v;
      s.argmax_offset = i + 1;
    }
  }
  return s;
}

/// Prime tables just large enough to sieve windows ending at or below hi.
inline PrimeTables tables_covering(natural hi) { return build_prime_tables(std::max<natural>(2, isqrt(hi) + 1)); }

}  // namespace taulab
