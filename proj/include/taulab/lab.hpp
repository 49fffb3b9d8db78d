#pragma once

// Weighted offset sums A(k) = sum_{s=1}^m (s+1) big_delta(k-s) for k = mu m,
// their factorial decomposition, the 2-adic split I / I*, selection of a
// heavy offset s0 and its conversion to an odd offset.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "taulab/arith.hpp"
#include "taulab/errors.hpp"
#include "taulab/sieve.hpp"

namespace taulab {

/// (mu, m, k = mu m, beta, c). Immutable once validated.
class LabParams {
 public:
  LabParams(natural mu, natural m, double beta = 2.0, double c = 0.25) : mu_(mu), m_(m), beta_(beta), c_(c) {
    if (mu < 2) throw DomainError("mu must be at least 2");
    if (m < 3) throw DomainError("m must be at least 3");
    if (!(beta > 0)) throw DomainError("beta must be positive");
    if (!(c > 0)) throw DomainError("c must be positive");
    k_ = detail::checked_mul(mu, m, "mu*m");
    lnln_m_ = std::log(std::log(static_cast<double>(m)));
  }

  natural mu() const noexcept { return mu_; }
  natural m() const noexcept { return m_; }
  natural k() const noexcept { return k_; }
  double beta() const noexcept { return beta_; }
  double c() const noexcept { return c_; }
  double lnln_m() const noexcept { return lnln_m_; }
  /// beta ln ln m, the 2-adic cut separating I from I*.
  double nu2_threshold() const noexcept { return beta_ * lnln_m_; }

 private:
  natural mu_, m_, k_ = 0;
  double beta_, c_, lnln_m_ = 0;
};

inline natural nu2(natural n) { return n == 0 ? 0 : static_cast<natural>(std::countr_zero(n)); }

/// A(k) summed term by term.
inline natural quantity_A_direct(const LabParams& p) {
  natural total = 0;
  for (natural s = 1; s <= p.m(); ++s) total += (s + 1) * big_delta(p.k() - s);
  return total;
}

/// B = Delta((mu m - 1)! / ((mu-1)m - 1)!), C = sum_s Delta((mu m - s)! / ((mu-1)m - 1)!).
struct FactorialSplit {
  natural B = 0;
  natural C = 0;
  natural A() const noexcept { return B + C; }
};

inline FactorialSplit quantity_A_via_factorials(const LabParams& p, const PrimeTables& tables) {
  const natural floor_index = (p.mu() - 1) * p.m() - 1;
  if (floor_index < 1) throw DomainError("quantity_A_via_factorials: (mu-1)m-1 must be at least 1");
  FactorialSplit out;
  out.B = delta_factorial_ratio(p.k() - 1, floor_index, tables);
  for (natural s = 1; s <= p.m(); ++s) out.C += delta_factorial_ratio(p.k() - s, floor_index, tables);
  return out;
}

inline FactorialSplit quantity_A_via_factorials(const LabParams& p) {
  return quantity_A_via_factorials(p, build_prime_tables(p.k()));
}

/// Delta(prod_s (k-s)^{s+1}) from accumulated per-prime valuations.
inline natural delta_of_offset_product(const LabParams& p) {
  std::map<natural, natural> valuation;
  for (natural s = 1; s <= p.m(); ++s)
    for (const auto& f : factorize(p.k() - s).factors) valuation[f.prime] += (s + 1) * f.exponent;
  natural total = 0;
  for (const auto& [prime, e] : valuation) total += e;
  return total;
}

/// X = m(m-1)/2 sum 1/(p-1), Y = (m-1) pi(mu m - 1), Z = ln(m!) sum 1/ln p,
/// all over primes p <= mu m - 1.
struct XYZ {
  double X = 0.0;
  natural Y = 0;
  double Z = 0.0;
};

inline XYZ quantities_XYZ(const LabParams& p, const PrimeTables& tables) {
  const natural top = p.k() - 1;
  if (tables.limit() < top) throw PreconditionError("quantities_XYZ: prime table below mu*m-1");
  const double m = static_cast<double>(p.m());
  double ln_mfact = 0.0;
  for (natural j = 2; j <= p.m(); ++j) ln_mfact += std::log(static_cast<double>(j));
  XYZ out;
  out.X = m * (m - 1) / 2 * tables.recip_pm1_sum(top);
  out.Y = (p.m() - 1) * tables.pi(top);
  out.Z = ln_mfact * tables.recip_log_sum(top);
  return out;
}

/// I over offsets with nu2(k-s) > beta ln ln m, its complement I*, and the
/// split of I into the 2-power part I1 and the odd part I2.
struct IDecomposition {
  natural I = 0;
  natural I_star = 0;
  natural I1 = 0;
  natural I2 = 0;
};

inline IDecomposition quantity_I(const LabParams& p) {
  IDecomposition out;
  const double cut = p.nu2_threshold();
  for (natural s = 1; s <= p.m(); ++s) {
    const natural offset = p.k() - s;
    const natural l = nu2(offset);
    const natural weighted = (s + 1) * big_delta(offset);
    if (static_cast<double>(l) > cut) {
      out.I += weighted;
      out.I1 += (s + 1) * l;
      out.I2 += (s + 1) * big_delta(offset >> l);
    } else {
      out.I_star += weighted;
    }
  }
  return out;
}

struct QuantityBundle {
  natural A = 0;
  natural B = 0;
  natural C = 0;
  double X = 0.0;
  natural Y = 0;
  double Z = 0.0;
  natural I = 0;
  natural I_star = 0;
  natural I1 = 0;
  natural I2 = 0;
};

inline QuantityBundle compute_quantities(const LabParams& p, const PrimeTables& tables) {
  QuantityBundle q;
  q.A = quantity_A_direct(p);
  const auto split = quantity_A_via_factorials(p, tables);
  q.B = split.B;
  q.C = split.C;
  const auto xyz = quantities_XYZ(p, tables);
  q.X = xyz.X;
  q.Y = xyz.Y;
  q.Z = xyz.Z;
  const auto i = quantity_I(p);
  q.I = i.I;
  q.I_star = i.I_star;
  q.I1 = i.I1;
  q.I2 = i.I2;
  return q;
}

inline QuantityBundle compute_quantities(const LabParams& p) { return compute_quantities(p, build_prime_tables(p.k())); }

// ---------------------------------------------------------------------------
// Heavy offset selection and the odd-offset construction.

enum class ShiftCase { AlreadyOdd, LargePrime, SmallPrimes, Degenerate };

inline std::string_view to_string(ShiftCase c) {
  switch (c) {
    case ShiftCase::AlreadyOdd: return "already-odd";
    case ShiftCase::LargePrime: return "case1-large-prime";
    case ShiftCase::SmallPrimes: return "case2-small-primes";
    case ShiftCase::Degenerate: return "degenerate";
  }
  return "?";
}

struct ShiftSelection {
  natural s0 = 0;
  natural value = 0;  // (s0+1) Delta(k-s0)
  natural nu2 = 0;
  natural t = 0;  // k - s0 = 2^t a
  natural a = 0;
  bool meets_bound = false;  // value >= c m ln ln m
  ShiftCase case_taken = ShiftCase::Degenerate;
  std::optional<natural> s_star;
  std::optional<natural> star_value;  // (s*+1) Delta(k-s*)
  std::optional<natural> q;           // large prime factor of a
  std::optional<natural> b;
  std::optional<natural> r;
  bool below_regime = false;  // small-prime exponent floored up to 1
  std::string diagnostic;
};

/// Selection record for a given s0 (no optimality implied).
inline ShiftSelection make_selection(const LabParams& p, natural s0) {
  if (s0 < 1 || s0 > p.m()) throw DomainError("s0 must lie in [1, m]");
  ShiftSelection sel;
  sel.s0 = s0;
  const natural offset = p.k() - s0;
  sel.value = (s0 + 1) * big_delta(offset);
  sel.nu2 = nu2(offset);
  sel.t = sel.nu2;
  sel.a = offset >> sel.t;
  sel.meets_bound = static_cast<double>(sel.value) >= p.c() * static_cast<double>(p.m()) * p.lnln_m();
  if (sel.t == 0) {
    sel.case_taken = ShiftCase::AlreadyOdd;
    sel.s_star = s0;
    sel.star_value = sel.value;
  } else {
    sel.diagnostic = "k-s0 even: odd shift not yet constructed";
  }
  return sel;
}

/// Among s in [1, m] with nu2(k-s) <= beta ln ln m, the maximizer of
/// (s+1) Delta(k-s); smallest s on ties.
inline ShiftSelection select_s0(const LabParams& p) {
  const double cut = p.nu2_threshold();
  natural best_s = 0, best_value = 0;
  for (natural s = 1; s <= p.m(); ++s) {
    if (static_cast<double>(nu2(p.k() - s)) > cut) continue;
    const natural v = (s + 1) * big_delta(p.k() - s);
    if (best_s == 0 || v > best_value) {
      best_s = s;
      best_value = v;
    }
  }
  if (best_s == 0) {
    ShiftSelection sel;
    sel.case_taken = ShiftCase::Degenerate;
    sel.diagnostic = "no admissible offset: every k-s exceeds the 2-adic cut";
    return sel;
  }
  return make_selection(p, best_s);
}

namespace detail {

inline void place_odd_multiple(const LabParams& p, ShiftSelection& out, natural b) {
  out.b = b;
  const natural lo = (p.mu() - 1) * p.m();
  const natural hi = p.k() - 1;
  natural r = (lo + b - 1) / b;
  if (r % 2 == 0) ++r;
  if (r * b > hi) {
    out.case_taken = ShiftCase::Degenerate;
    out.diagnostic = "no odd r with r*b in [(mu-1)m, mu*m-1]";
    return;
  }
  out.r = r;
  out.s_star = p.k() - r * b;
  out.star_value = (*out.s_star + 1) * big_delta(r * b);
}

}  // namespace detail

/// Turns a selection with even k - s0 into an odd offset k - s*.
inline ShiftSelection construct_odd_shift(const LabParams& p, const ShiftSelection& sel) {
  ShiftSelection out = sel;
  if (sel.s0 < 1 || sel.s0 > p.m()) {
    out.case_taken = ShiftCase::Degenerate;
    if (out.diagnostic.empty()) out.diagnostic = "no s0 to start from";
    return out;
  }
  const natural offset = p.k() - sel.s0;
  out.diagnostic.clear();
  out.t = nu2(offset);
  out.a = offset >> out.t;
  if (out.t == 0) {
    out.case_taken = ShiftCase::AlreadyOdd;
    out.s_star = sel.s0;
    out.star_value = (sel.s0 + 1) * big_delta(offset);
    return out;
  }
  if (out.a == 1) {
    out.case_taken = ShiftCase::Degenerate;
    out.diagnostic = "k-s0 is a power of two";
    return out;
  }
  const auto fa = factorize(out.a);
  const natural two_mu = 2 * p.mu();
  const auto& largest = fa.factors.back();
  if (largest.prime > two_mu) {
    out.case_taken = ShiftCase::LargePrime;
    out.q = largest.prime;
    detail::place_odd_multiple(p, out, out.a / largest.prime);
    return out;
  }

  out.case_taken = ShiftCase::SmallPrimes;
  // Prime of largest exponent; smallest such prime on ties.
  const Factorization::Term* dominant = &fa.factors.front();
  for (const auto& f : fa.factors)
    if (f.exponent > dominant->exponent) dominant = &f;
  const double small_primes = static_cast<double>(build_prime_tables(std::max<natural>(2, two_mu)).pi(two_mu));
  const double raw = p.c() / (4.0 * small_primes) * p.lnln_m();
  auto exponent = static_cast<natural>(std::floor(std::max(0.0, raw)));
  if (exponent == 0) {
    exponent = 1;
    out.below_regime = true;
  }
  natural b = 1;
  bool fits = detail::pow_at_most(dominant->prime, exponent, kNaturalCap);
  if (fits) b = detail::checked_pow(dominant->prime, exponent);
  if (!fits || 4 * static_cast<detail::u128>(b) >= p.m()) {
    out.b = fits ? std::optional<natural>(b) : std::nullopt;
    out.case_taken = ShiftCase::Degenerate;
    out.diagnostic = "small-prime block b = " + std::to_string(dominant->prime) + "^" + std::to_string(exponent) +
                     " is not below m/4" + (out.below_regime ? " (below guaranteed regime)" : "");
    return out;
  }
  detail::place_odd_multiple(p, out, b);
  if (out.below_regime && out.diagnostic.empty()) out.diagnostic = "exponent floored to 1: below guaranteed regime";
  return out;
}

// ---------------------------------------------------------------------------

/// Both sides of (s+1) tau(p^{mu m - r} + p^{s-r}) = (s-r+1) tau(p^{mu m} + p^s).
struct ReductionCheck {
  natural lhs_tau = 0;  // tau(p^{mu m - r} + p^{s-r})
  natural rhs_tau = 0;  // tau(p^{mu m} + p^s)
  natural lhs_scaled = 0;
  natural rhs_scaled = 0;
  bool holds() const noexcept { return lhs_scaled == rhs_scaled; }
};

inline ReductionCheck verify_reduction_identity(natural prime, natural mu, natural m, natural r, natural s) {
  if (!is_prime(prime)) throw DomainError("verify_reduction_identity: p is not prime");
  if (mu < 2 || m < 1) throw DomainError("verify_reduction_identity: need mu >= 2, m >= 1");
  if (r >= mu) throw DomainError("verify_reduction_identity: r must lie in [0, mu-1]");
  const natural top = detail::checked_mul(mu, m, "mu*m");
  if (s <= r || s >= top) throw DomainError("verify_reduction_identity: need r < s < mu*m");
  ReductionCheck c;
  const natural big = detail::checked_add(detail::checked_pow(prime, top), detail::checked_pow(prime, s), "p^{mu m}+p^s");
  const natural small =
      detail::checked_add(detail::checked_pow(prime, top - r), detail::checked_pow(prime, s - r), "p^{mu m-r}+p^{s-r}");
  c.lhs_tau = tau(small);
  c.rhs_tau = tau(big);
  c.lhs_scaled = (s + 1) * c.lhs_tau;
  c.rhs_scaled = (s - r + 1) * c.rhs_tau;
  return c;
}

}  // namespace taulab
