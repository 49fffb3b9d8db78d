#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace taulab {

using natural = std::uint64_t;

/// Largest value any natural may take; products are formed in 128 bits and
/// checked against this cap.
inline constexpr natural kNaturalCap = std::numeric_limits<std::int64_t>::max();

/// Argument outside the mathematical domain of an operation (n = 0, p not
/// prime, m > n, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Result or intermediate would leave the exact 63-bit range, or a table
/// request exceeds the memory cap.
class CapacityError : public std::overflow_error {
 public:
  explicit CapacityError(const std::string& what) : std::overflow_error(what) {}
};

/// A caller-supplied resource does not satisfy an operation's requirement
/// (for example a prime table that is too short).
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

namespace detail {

using u128 = unsigned __int128;

/// a * b, throwing CapacityError when the product exceeds kNaturalCap.
inline natural checked_mul(natural a, natural b, const char* what = "product") {
  const u128 p = static_cast<u128>(a) * b;
  if (p > kNaturalCap) throw CapacityError(std::string(what) + " exceeds 2^63-1");
  return static_cast<natural>(p);
}

inline natural checked_add(natural a, natural b, const char* what = "sum") {
  const u128 s = static_cast<u128>(a) + b;
  if (s > kNaturalCap) throw CapacityError(std::string(what) + " exceeds 2^63-1");
  return static_cast<natural>(s);
}

/// base^exp, throwing CapacityError past kNaturalCap.
inline natural checked_pow(natural base, natural exp, const char* what = "power") {
  natural r = 1;
  for (natural i = 0; i < exp; ++i) r = checked_mul(r, base, what);
  return r;
}

/// base^exp compared against bound without overflow: returns true iff
/// base^exp <= bound.
inline bool pow_at_most(natural base, natural exp, natural bound) {
  u128 r = 1;
  for (natural i = 0; i < exp; ++i) {
    r *= base;
    if (r > bound) return false;
  }
  return true;
}

}  // namespace detail
}  // namespace taulab
