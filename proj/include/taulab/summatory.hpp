#pragma once

// Divisor summatory function D(N) = sum_{k<=N} tau(k), its error against
// N ln N + (2 gamma - 1) N, power-law fits of that error, window averages of
// tau, and the ratio sum S_a(x) = sum_{n<=x} tau(n) / tau(n+a).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "taulab/arith.hpp"
#include "taulab/errors.hpp"
#include "taulab/sieve.hpp"

namespace taulab {

/// Euler-Mascheroni constant to 20 significant digits.
inline constexpr long double kEulerGamma = 0.57721566490153286061L;

/// Default exponent for the divisor-problem error term, O(N^{13/40+eps}).
inline constexpr double kDefaultTheta = 13.0 / 40.0;

inline constexpr natural kNaiveSumCap = 100'000'000;
inline constexpr natural kHyperbolaCap = natural{1} << 62;

/// sum_{k<=N} floor(N/k), linear time.
inline natural divisor_sum_naive(natural N) {
  if (N > kNaiveSumCap) throw CapacityError("divisor_sum_naive: N above 10^8");
  natural total = 0;
  // 32-bit division is several times faster and N fits.
  const auto n32 = static_cast<std::uint32_t>(N);
  for (std::uint32_t k = 1; k <= n32; ++k) total += n32 / k;
  return total;
}

/// D(N) = 2 sum_{k<=r} floor(N/k) - r^2 with r = isqrt(N).
inline natural divisor_sum_hyperbola(natural N) {
  if (N >= kHyperbolaCap) throw CapacityError("divisor_sum_hyperbola: N must be below 2^62");
  const natural r = isqrt(N);
  detail::u128 total = 0;
  for (natural k = 1; k <= r; ++k) total += N / k;
  total = 2 * total - static_cast<detail::u128>(r) * r;
  if (total > kNaturalCap) throw CapacityError("divisor_sum_hyperbola: D(N) exceeds 2^63-1");
  return static_cast<natural>(total);
}

/// D(N) against its two-term main term.
struct SummatoryResult {
  natural N = 0;
  natural D = 0;
  double main_term = 0.0;
  double error = 0.0;
};

inline double summatory_main_term(natural N) {
  const long double x = static_cast<long double>(N);
  return static_cast<double>(x * std::log(x) + (2 * kEulerGamma - 1) * x);
}

/// Error term for a D(N) computed elsewhere.
inline SummatoryResult error_term_of(natural N, natural D) {
  if (N == 0) throw DomainError("error_term: N must be positive");
  SummatoryResult r;
  r.N = N;
  r.D = D;
  const long double x = static_cast<long double>(N);
  const long double main = x * std::log(x) + (2 * kEulerGamma - 1) * x;
  r.main_term = static_cast<double>(main);
  r.error = static_cast<double>(static_cast<long double>(r.D) - main);
  return r;
}

inline SummatoryResult error_term(natural N) {
  if (N == 0) throw DomainError("error_term: N must be positive");
  return error_term_of(N, divisor_sum_hyperbola(N));
}

/// Least-squares line through (ln N, ln |error|).
struct ExponentFit {
  std::vector<std::pair<natural, double>> samples;  // (N, |error|), all inputs
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t discarded = 0;  // samples with |error| < 1
};

class DegenerateFitError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Fits ln|error| = intercept + slope ln N, skipping |error| < 1.
inline ExponentFit fit_power_law(std::span<const std::pair<natural, double>> samples) {
  ExponentFit fit;
  fit.samples.assign(samples.begin(), samples.end());
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, e] : samples) {
    const double mag = std::abs(e);
    if (mag < 1.0 || n == 0) {
      ++fit.discarded;
      continue;
    }
    pts.emplace_back(std::log(static_cast<double>(n)), std::log(mag));
  }
  if (pts.size() < 5)
    throw DegenerateFitError("fit needs at least 5 samples with |error| >= 1, have " +
                             std::to_string(pts.size()));
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) throw DegenerateFitError("fit needs at least two distinct N");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

/// Geometric grid of `samples` integers from N_min to N_max inclusive,
/// duplicates removed.
inline std::vector<natural> geometric_grid(natural lo, natural hi, natural samples) {
  std::vector<natural> grid;
  const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo));
  for (natural i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(samples - 1);
    auto v = static_cast<natural>(std::llround(static_cast<double>(lo) * std::exp(ratio * t)));
    grid.push_back(std::clamp(v, lo, hi));
  }
  grid.front() = lo;
  grid.back() = hi;
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

inline ExponentFit fit_error_exponent(natural N_min, natural N_max, natural samples) {
  if (N_min < 100 || N_max > 1'000'000'000'000ULL || N_min >= N_max || samples < 10)
    throw DomainError("fit_error_exponent: need 100 <= N_min < N_max <= 10^12 and samples >= 10");
  std::vector<std::pair<natural, double>> pts;
  for (const natural n : geometric_grid(N_min, N_max, samples)) pts.emplace_back(n, std::abs(error_term(n).error));
  return fit_power_law(pts);
}

/// tau statistics over the window (N, N + floor(N^{1/mu})].
struct WindowBound {
  natural N = 0;
  natural mu = 0;
  natural w = 0;
  natural window_sum = 0;
  double window_mean = 0.0;
  natural window_max = 0;
  double ratio_to_logN = 0.0;
  /// window_max * w >= window_sum, checked in integers.
  bool pigeonhole_holds() const { return static_cast<detail::u128>(window_max) * w >= window_sum; }
};

inline WindowBound window_average_bound(natural N, natural mu, const PrimeTables& tables, unsigned threads = 1) {
  if (N < 4) throw DomainError("window_average_bound: N must be at least 4");
  if (mu == 0) throw DomainError("window_average_bound: mu must be positive");
  WindowBound b;
  b.N = N;
  b.mu = mu;
  b.w = integer_kth_root(N, mu);
  if (b.w == 0) throw DomainError("window_average_bound: empty window");
  const natural end = detail::checked_add(N, b.w, "window end");
  b.window_sum = divisor_sum_hyperbola(end) - divisor_sum_hyperbola(N);
  const auto win = window_tau(N, b.w, tables, threads);
  if (win.sum_tau != b.window_sum)
    throw std::logic_error("window_average_bound: sieve and summatory window sums disagree");
  b.window_max = win.max_tau;
  b.window_mean = static_cast<double>(b.window_sum) / static_cast<double>(b.w);
  b.ratio_to_logN = b.window_mean / std::log(static_cast<double>(N));
  if (!b.pigeonhole_holds()) throw std::logic_error("window_average_bound: max below mean");
  return b;
}

/// S_a(x) = sum_{n<=x} tau(n)/tau(n+a).
struct KaratsubaSum {
  natural x = 0;
  natural a = 0;
  double value = 0.0;
  bool exact = false;  // numerator/denominator valid
  detail::u128 numerator = 0;
  detail::u128 denominator = 1;
};

inline constexpr natural kKaratsubaCap = 100'000'000;

namespace detail {

inline u128 gcd128(u128 a, u128 b) {
  while (b) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

inline KaratsubaSum karatsuba_sum(natural x, natural a, unsigned threads = 1) {
  if (x == 0 || a == 0) throw DomainError("karatsuba_sum: x and a must be positive");
  if (x > kKaratsubaCap) throw CapacityError("karatsuba_sum: x above 10^8");
  const natural hi = detail::checked_add(x, a, "x+a");
  const PrimeTables tables = tables_covering(hi);

  // Group numerators by denominator: S = sum_d (sum_{tau(n+a)=d} tau(n)) / d.
  std::map<natural, natural> by_denominator;
  constexpr natural kChunk = natural{1} << 16;
  for (natural start = 0; start < x; start += kChunk) {
    const natural len = std::min(kChunk, x - start);
    const auto num = window_tau(start, len, tables, threads);
    const auto den = window_tau(start + a, len, tables, threads);
    for (natural i = 0; i < len; ++i) by_denominator[den.tau_values[i]] += num.tau_values[i];
  }

  KaratsubaSum out;
  out.x = x;
  out.a = a;
  using detail::u128;
  constexpr u128 kLimit = ~u128{0} >> 1;
  u128 num = 0, den = 1;
  bool exact = true;
  for (const auto& [d, n] : by_denominator) {
    // num/den + n/d over lcm(den, d).
    const u128 g = detail::gcd128(den, d);
    const u128 scale = d / g;
    if (den > kLimit / scale) {
      exact = false;
      break;
    }
    const u128 new_den = den * scale;
    const u128 mult = new_den / d;
    if (num > kLimit / scale || static_cast<u128>(n) > kLimit / mult || num * scale > kLimit - n * mult) {
      exact = false;
      break;
    }
    num = num * scale + static_cast<u128>(n) * mult;
    den = new_den;
    const u128 r = detail::gcd128(num, den);
    num /= r;
    den /= r;
  }
  if (exact) {
    out.exact = true;
    out.numerator = num;
    out.denominator = den;
    const u128 whole = num / den;
    out.value = static_cast<double>(static_cast<long double>(whole) +
                                    static_cast<long double>(num % den) / static_cast<long double>(den));
  } else {
    detail::CompensatedSum s;
    for (const auto& [d, n] : by_denominator) s.add(static_cast<double>(n) / static_cast<double>(d));
    out.value = s.value();
  }
  return out;
}

}  // namespace taulab
