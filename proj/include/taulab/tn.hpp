#pragma once

// T_n(mu) = max_{1<=m<=n^{1/mu}} tau(n+m) / tau(n), single values and scans
// over prime powers or ranges of n.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "taulab/arith.hpp"
#include "taulab/errors.hpp"
#include "taulab/sieve.hpp"
#include "taulab/summatory.hpp"

namespace taulab {

/// Exact quotient of two divisor counts; ordered by cross-multiplication.
struct TauRatio {
  natural num = 0;
  natural den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend std::strong_ordering operator<=>(const TauRatio& a, const TauRatio& b) noexcept {
    return static_cast<detail::u128>(a.num) * b.den <=> static_cast<detail::u128>(b.num) * a.den;
  }
  friend bool operator==(const TauRatio& a, const TauRatio& b) noexcept { return (a <=> b) == 0; }
};

struct TnResult {
  natural n = 0;
  natural mu = 0;
  natural w = 0;
  natural tau_n = 0;
  natural max_tau = 0;
  natural argmax_m = 0;
  /// window mean numerator, sum of tau(n+m) over the window
  natural window_sum = 0;

  TauRatio ratio() const noexcept { return {max_tau, tau_n}; }
  double value() const noexcept { return ratio().value(); }
};

namespace detail {

inline TnResult tn_over_window(natural n, natural mu, natural w, const PrimeTables& tables, unsigned threads) {
  if (w == 0) throw DomainError("T_n: empty window");
  TnResult r;
  r.n = n;
  r.mu = mu;
  r.w = w;
  const auto win = window_tau(n, w, tables, threads);
  r.max_tau = win.max_tau;
  r.argmax_m = win.argmax_offset;
  r.window_sum = win.sum_tau;
  r.tau_n = factorize(n, tables).tau();
  return r;
}

}  // namespace detail

/// T_n(mu) for integer mu >= 1.
inline TnResult compute_tn(natural n, natural mu, const PrimeTables& tables, unsigned threads = 1) {
  if (n < 2) throw DomainError("compute_tn: n must be at least 2");
  if (mu == 0) throw DomainError("compute_tn: mu must be positive");
  return detail::tn_over_window(n, mu, integer_kth_root(n, mu), tables, threads);
}

inline TnResult compute_tn(natural n, natural mu, unsigned threads = 1) {
  if (n < 2) throw DomainError("compute_tn: n must be at least 2");
  if (mu == 0) throw DomainError("compute_tn: mu must be positive");
  const natural w = integer_kth_root(n, mu);
  return detail::tn_over_window(n, mu, w, tables_covering(detail::checked_add(n, w)), threads);
}

/// floor(n^{1/mu}) for real mu > 0: floating estimate corrected so that
/// r^mu <= n < (r+1)^mu holds in long double.
inline natural real_root_floor(natural n, double mu) {
  if (!(mu > 0)) throw DomainError("real_root_floor: mu must be positive");
  const double rounded = std::round(mu);
  if (std::abs(mu - rounded) < 1e-12 && rounded >= 1) return integer_kth_root(n, static_cast<natural>(rounded));
  const long double x = static_cast<long double>(n);
  const long double est = std::pow(x, 1.0L / mu);
  if (est >= static_cast<long double>(kNaturalCap)) throw CapacityError("real_root_floor: root exceeds 2^63-1");
  auto r = static_cast<natural>(std::floor(est));
  auto pow_le = [&](natural v) { return std::pow(static_cast<long double>(v), static_cast<long double>(mu)) <= x; };
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

/// Reporting mode for non-integer mu; the stored mu is rounded down and
/// only w carries the real exponent.
inline TnResult compute_tn_real(natural n, double mu, const PrimeTables& tables, unsigned threads = 1) {
  if (n < 2) throw DomainError("compute_tn_real: n must be at least 2");
  auto r = detail::tn_over_window(n, static_cast<natural>(mu), real_root_floor(n, mu), tables, threads);
  return r;
}

// ---------------------------------------------------------------------------
// Scans.

struct ScanPoint {
  natural index = 0;  // j for prime-power scans, n for range scans
  TnResult result;
};

enum class ScanKind { PrimePower, Range };

struct ScanSeries {
  ScanKind kind = ScanKind::Range;
  natural p = 0;  // prime-power scans only
  natural lo = 0;
  natural hi = 0;
  natural mu = 0;
  std::vector<ScanPoint> points;  // ascending index
  std::string diagnostic;          // set when the series was truncated
  bool in_guaranteed_regime = false;

  /// Smallest value and the first index attaining it.
  std::optional<ScanPoint> minimum() const {
    std::optional<ScanPoint> best;
    for (const auto& pt : points)
      if (!best || pt.result.ratio() < best->result.ratio()) best = pt;
    return best;
  }

  /// Minimum over points[i..end) for each i.
  std::vector<TauRatio> tail_minimum() const {
    std::vector<TauRatio> out(points.size());
    for (std::size_t i = points.size(); i-- > 0;) {
      out[i] = points[i].result.ratio();
      if (i + 1 < points.size() && out[i + 1] < out[i]) out[i] = out[i + 1];
    }
    return out;
  }

  /// Minimum over points whose index lies in [from, to].
  std::optional<TauRatio> minimum_between(natural from, natural to) const {
    std::optional<TauRatio> best;
    for (const auto& pt : points)
      if (pt.index >= from && pt.index <= to && (!best || pt.result.ratio() < *best)) best = pt.result.ratio();
    return best;
  }
};

/// Whether 1 <= mu < 1/theta.
inline bool in_guaranteed_regime(natural mu, double theta) {
  return mu >= 1 && static_cast<double>(mu) * theta < 1.0;
}

/// Append-only CSV log of completed scan points; reloading it skips work
/// already done. The first line identifies the scan; a mismatch is an error.
class ScanCheckpoint {
 public:
  ScanCheckpoint(std::filesystem::path path, std::string key) : path_(std::move(path)), key_(std::move(key)) {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    if (!std::getline(in, line)) return;
    if (line != "# " + key_) throw PreconditionError("checkpoint " + path_.string() + " belongs to another scan");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      ScanPoint pt;
      char sep = 0;
      row >> pt.index >> sep >> pt.result.n >> sep >> pt.result.mu >> sep >> pt.result.w >> sep >> pt.result.tau_n >>
          sep >> pt.result.max_tau >> sep >> pt.result.argmax_m >> sep >> pt.result.window_sum;
      if (row) done_[pt.index] = pt;  // a torn final line is dropped
    }
    // A torn final line has no newline; start the next record on a fresh one.
    in.clear();
    in.seekg(-1, std::ios::end);
    char last = '\n';
    if (in.get(last) && last != '\n') torn_ = true;
  }

  std::optional<ScanPoint> find(natural index) const {
    const auto it = done_.find(index);
    if (it == done_.end()) return std::nullopt;
    return it->second;
  }

  void record(const ScanPoint& pt) {
    const bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
    std::ofstream out(path_, std::ios::app);
    if (fresh) out << "# " << key_ << '\n';
    if (torn_ && !fresh) out << '\n';
    torn_ = false;
    const auto& r = pt.result;
    out << pt.index << ',' << r.n << ',' << r.mu << ',' << r.w << ',' << r.tau_n << ',' << r.max_tau << ','
        << r.argmax_m << ',' << r.window_sum << '\n';
    if (!out) throw std::runtime_error("failed writing checkpoint " + path_.string());
    done_[pt.index] = pt;
  }

 private:
  std::filesystem::path path_;
  std::string key_;
  std::map<natural, ScanPoint> done_;
  bool torn_ = false;
};

struct ScanOptions {
  unsigned threads = 1;
  double theta = kDefaultTheta;
  natural stride = 1;
  std::optional<std::filesystem::path> checkpoint;
};

/// T_{p^j}(mu) for j in [j_min, j_max]. Stops early, with a diagnostic, at
/// the first j whose window leaves the exact range.
inline ScanSeries prime_power_scan(natural p, natural j_min, natural j_max, natural mu, const ScanOptions& opt = {}) {
  if (!is_prime(p)) throw DomainError("prime_power_scan: p is not prime");
  if (j_min == 0 || j_min > j_max) throw DomainError("prime_power_scan: need 1 <= j_min <= j_max");
  if (mu == 0) throw DomainError("prime_power_scan: mu must be positive");
  ScanSeries series;
  series.kind = ScanKind::PrimePower;
  series.p = p;
  series.lo = j_min;
  series.hi = j_max;
  series.mu = mu;
  series.in_guaranteed_regime = in_guaranteed_regime(mu, opt.theta);

  // Highest j that fits, then one table for the whole series.
  natural last = j_min - 1;
  natural top = 0;
  for (natural j = j_min; j <= j_max; ++j) {
    if (!detail::pow_at_most(p, j, kNaturalCap)) {
      series.diagnostic = "truncated at j=" + std::to_string(j) + ": p^j exceeds 2^63-1";
      break;
    }
    const natural n = detail::checked_pow(p, j);
    const natural w = integer_kth_root(n, mu);
    if (n > kNaturalCap - w || isqrt(n + w) + 1 > kSieveCap) {
      series.diagnostic = "truncated at j=" + std::to_string(j) + ": window leaves capacity";
      break;
    }
    last = j;
    top = n + w;
  }
  if (last < j_min) return series;
  const PrimeTables tables = tables_covering(top);

  std::optional<ScanCheckpoint> ckpt;
  if (opt.checkpoint)
    ckpt.emplace(*opt.checkpoint, "prime-power p=" + std::to_string(p) + " mu=" + std::to_string(mu));
  for (natural j = j_min; j <= last; ++j) {
    if (ckpt) {
      if (auto done = ckpt->find(j)) {
        series.points.push_back(*done);
        continue;
      }
    }
    ScanPoint pt{j, compute_tn(detail::checked_pow(p, j), mu, tables, opt.threads)};
    if (ckpt) ckpt->record(pt);
    series.points.push_back(pt);
  }
  return series;
}

/// T_n(mu) for n = n_lo, n_lo + stride, ..., <= n_hi.
inline ScanSeries conjecture_scan(natural n_lo, natural n_hi, natural mu, const ScanOptions& opt = {}) {
  if (n_lo < 2 || n_lo > n_hi) throw DomainError("conjecture_scan: need 2 <= n_lo <= n_hi");
  if (mu == 0) throw DomainError("conjecture_scan: mu must be positive");
  if (opt.stride == 0) throw DomainError("conjecture_scan: stride must be positive");
  const natural w_hi = integer_kth_root(n_hi, mu);
  if (n_hi > kNaturalCap - w_hi) throw CapacityError("conjecture_scan: window leaves 63-bit range");
  ScanSeries series;
  series.kind = ScanKind::Range;
  series.lo = n_lo;
  series.hi = n_hi;
  series.mu = mu;
  series.in_guaranteed_regime = in_guaranteed_regime(mu, opt.theta);
  const PrimeTables tables = tables_covering(n_hi + w_hi);

  std::vector<natural> ns;
  for (natural n = n_lo; n <= n_hi; n += opt.stride) {
    ns.push_back(n);
    if (n > n_hi - opt.stride) break;
  }
  series.points.resize(ns.size());

  std::optional<ScanCheckpoint> ckpt;
  if (opt.checkpoint)
    ckpt.emplace(*opt.checkpoint, "range lo=" + std::to_string(n_lo) + " hi=" + std::to_string(n_hi) +
                                      " mu=" + std::to_string(mu) + " stride=" + std::to_string(opt.stride));
  std::vector<bool> pending(ns.size(), true);
  if (ckpt)
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (auto done = ckpt->find(ns[i])) {
        series.points[i] = *done;
        pending[i] = false;
      }

  auto work = [&](std::size_t i) { series.points[i] = {ns[i], compute_tn(ns[i], mu, tables)}; };
  const unsigned workers = std::max(1u, opt.threads);
  if (workers == 1 || ckpt) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (!pending[i]) continue;
      work(i);
      if (ckpt) ckpt->record(series.points[i]);
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < ns.size(); i += workers) work(i);
      });
    for (auto& th : pool) th.join();
  }
  return series;
}

}  // namespace taulab
