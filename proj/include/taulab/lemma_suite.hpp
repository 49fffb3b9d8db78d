#pragma once

// Grid runs checking the finite-range content of each lemma. Every row is a
// pure function of its grid tuple; verdicts compare rows against thresholds.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "taulab/arith.hpp"
#include "taulab/errors.hpp"
#include "taulab/lab.hpp"
#include "taulab/sieve.hpp"
#include "taulab/summatory.hpp"
#include "taulab/table.hpp"

namespace taulab {

/// Parameter grid. The index range means: odd exponents a (lemma 1), k
/// (lemma 2), m (lemmas 3-5), upper bound for random N (lemma 6).
struct LemmaGrid {
  natural lo = 0;
  natural hi = 0;
  natural step = 1;
  std::vector<natural> mu;
  std::vector<natural> bases;  // lemma 1
  std::vector<double> beta;    // lemmas 4, 5
  double c = 0.25;             // lemma 5
  natural samples = 100;       // lemma 6
  std::uint64_t seed = 1;      // lemma 6
};

struct Thresholds {
  std::optional<double> lower;
  std::optional<double> upper;
};

struct Verdict {
  bool passed = true;
  std::vector<std::string> failures;
  std::string summary;
};

struct LemmaReport {
  int lemma_id = 0;
  Row params;
  std::vector<Row> rows;
  Verdict verdict;
};

inline LemmaGrid default_grid(int lemma_id) {
  LemmaGrid g;
  switch (lemma_id) {
    case 1:
      g.lo = 1;
      g.hi = 35;
      g.bases = {2, 3, 5, 6, 10};
      break;
    case 2:
      g.lo = 10;
      g.hi = 100'000;
      break;
    case 3:
      g.lo = 10;
      g.hi = 2000;
      g.mu = {2, 3};
      break;
    case 4:
      g.lo = 100;
      g.hi = 2000;
      g.mu = {2};
      g.beta = {2.0};
      break;
    case 5:
      g.lo = 100;
      g.hi = 2000;
      g.mu = {2};
      g.beta = {2.0};
      g.c = 0.25;
      break;
    case 6:
      g.lo = 4;
      g.hi = 100'000'000;
      g.mu = {2};
      g.samples = 100;
      break;
    default:
      throw DomainError("lemma id must be 1..6");
  }
  return g;
}

inline Thresholds default_thresholds(int lemma_id) {
  switch (lemma_id) {
    case 1: return {};
    case 2: return {1.0, 2.0};
    case 3: return {0.5, std::nullopt};
    case 4: return {std::nullopt, 0.5};
    case 5: return {};
    case 6: return {0.8, 1.5};
    default: throw DomainError("lemma id must be 1..6");
  }
}

/// Parses "key=value;key=value" grids. Keys: range|a|k|m|n=LO..HI,
/// step, mu, bases, beta (comma lists), c, samples, seed. Unset keys keep
/// the lemma's defaults.
inline LemmaGrid parse_grid(int lemma_id, const std::string& text) {
  LemmaGrid g = default_grid(lemma_id);
  auto fail = [&](const std::string& why) { throw DomainError("bad grid '" + text + "': " + why); };
  auto to_nat = [&](const std::string& s) -> natural {
    std::size_t used = 0;
    natural v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      fail("not a natural: " + s);
    }
    if (used != s.size()) fail("not a natural: " + s);
    return v;
  };
  auto to_real = [&](const std::string& s) -> double {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      fail("not a number: " + s);
    }
    if (used != s.size()) fail("not a number: " + s);
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, sep);)
      if (!part.empty()) out.push_back(part);
    return out;
  };
  for (const auto& item : split(text, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail("missing '=' in " + item);
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "range" || key == "a" || key == "k" || key == "m" || key == "n") {
      const auto dots = value.find("..");
      if (dots == std::string::npos) {
        g.lo = g.hi = to_nat(value);
      } else {
        g.lo = to_nat(value.substr(0, dots));
        g.hi = to_nat(value.substr(dots + 2));
      }
      if (g.lo > g.hi) fail("empty range");
    } else if (key == "step") {
      g.step = to_nat(value);
      if (g.step == 0) fail("step must be positive");
    } else if (key == "mu") {
      g.mu.clear();
      for (const auto& v : split(value, ',')) g.mu.push_back(to_nat(v));
    } else if (key == "bases") {
      g.bases.clear();
      for (const auto& v : split(value, ',')) g.bases.push_back(to_nat(v));
    } else if (key == "beta") {
      g.beta.clear();
      for (const auto& v : split(value, ',')) g.beta.push_back(to_real(v));
    } else if (key == "c") {
      g.c = to_real(value);
    } else if (key == "samples") {
      g.samples = to_nat(value);
    } else if (key == "seed") {
      g.seed = to_nat(value);
    } else {
      fail("unknown key " + key);
    }
  }
  return g;
}

namespace detail {

inline std::vector<natural> grid_points(const LemmaGrid& g) {
  std::vector<natural> out;
  for (natural v = g.lo; v <= g.hi; v += g.step) {
    out.push_back(v);
    if (v > g.hi - g.step) break;
  }
  return out;
}

/// Evaluates fn(i) for i < count, in parallel when threads > 1, keeping
/// the output order.
template <typename Fn>
std::vector<Row> ordered_rows(std::size_t count, unsigned threads, Fn fn) {
  std::vector<Row> rows(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) rows[i] = fn(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < count; i += workers) rows[i] = fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return rows;
}

inline void fail(Verdict& v, std::string why) {
  v.passed = false;
  if (v.failures.size() < 50) v.failures.push_back(std::move(why));
}

inline double cell_real(const Row& row, const std::string& key) {
  for (const auto& [k, v] : row)
    if (k == key) {
      if (const auto* d = std::get_if<double>(&v)) return *d;
      if (const auto* u = std::get_if<std::uint64_t>(&v)) return static_cast<double>(*u);
    }
  throw std::logic_error("row has no numeric column " + key);
}

inline bool cell_bool(const Row& row, const std::string& key) {
  for (const auto& [k, v] : row)
    if (k == key) return std::get<bool>(v);
  throw std::logic_error("row has no bool column " + key);
}

inline std::string join_naturals(const std::vector<natural>& v) {
  std::string s;
  for (const natural x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

inline std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (const double x : v) s += (s.empty() ? "" : ",") + format_double(x);
  return s;
}

// tau(m^a+1) >= tau(a) >= Delta(a) and (m^b+1) | (m^a+1) for odd b | a.
inline LemmaReport lemma1(const LemmaGrid& g) {
  LemmaReport rep;
  for (const natural base : g.bases) {
    if (base < 2) throw DomainError("lemma 1: bases must be at least 2");
    for (natural a = g.lo | 1; a <= g.hi; a += 2) {
      if (!pow_at_most(base, a, kNaturalCap - 1)) break;
      const natural big = checked_pow(base, a) + 1;
      const natural ta = tau(big), t = tau(a), d = big_delta(a);
      bool divides = true;
      for (natural b = 1; b <= a; b += 2)
        if (a % b == 0 && big % (checked_pow(base, b) + 1) != 0) divides = false;
      const bool ok = ta >= t && t >= d && divides;
      rep.rows.push_back({{"m", base},
                          {"a", a},
                          {"m_pow_a_plus_1", big},
                          {"tau_m_pow_a_plus_1", ta},
                          {"tau_a", t},
                          {"delta_a", d},
                          {"divisibility", divides},
                          {"holds", ok}});
      if (!ok) fail(rep.verdict, "m=" + std::to_string(base) + " a=" + std::to_string(a));
    }
  }
  rep.verdict.summary = std::to_string(rep.rows.size()) + " (m, a) pairs checked";
  return rep;
}

// Delta(k!) / (k ln ln k) inside (lower, upper).
inline LemmaReport lemma2(const LemmaGrid& g, const Thresholds& th) {
  if (g.lo < 3) throw DomainError("lemma 2: k must be at least 3");
  LemmaReport rep;
  const PrimeTables tables = build_prime_tables(std::max<natural>(2, g.hi));
  natural running = delta_factorial(g.lo - 1, tables);
  natural next = g.lo;
  double worst_hi = 0, worst_lo = INFINITY;
  for (const natural k : grid_points(g)) {
    while (next <= k) running += big_delta(next++);
    const double ratio = static_cast<double>(running) / (static_cast<double>(k) * lnln(static_cast<double>(k)));
    worst_hi = std::max(worst_hi, ratio);
    worst_lo = std::min(worst_lo, ratio);
    bool ok = true;
    if (th.lower && !(ratio > *th.lower)) ok = false;
    if (th.upper && !(ratio < *th.upper)) ok = false;
    rep.rows.push_back({{"k", k}, {"delta_k_factorial", running}, {"ratio", ratio}, {"holds", ok}});
    if (!ok) fail(rep.verdict, "k=" + std::to_string(k) + " ratio=" + format_double(ratio));
  }
  // The running sum must agree with Legendre at the end of the grid.
  const natural last = grid_points(g).back();
  if (delta_factorial(last, tables) != running) fail(rep.verdict, "incremental Delta(k!) disagrees with Legendre");
  rep.verdict.summary = "ratio range [" + format_double(worst_lo) + ", " + format_double(worst_hi) + "]";
  return rep;
}

// A(mu m) / (m^2 ln ln m) >= lower.
inline LemmaReport lemma3(const LemmaGrid& g, const Thresholds& th, unsigned threads) {
  const auto ms = grid_points(g);
  std::vector<std::pair<natural, natural>> tuples;
  for (const natural mu : g.mu)
    for (const natural m : ms) tuples.emplace_back(mu, m);
  LemmaReport rep;
  rep.rows = ordered_rows(tuples.size(), threads, [&](std::size_t i) {
    const auto [mu, m] = tuples[i];
    const LabParams p(mu, m);
    const natural A = quantity_A_direct(p);
    const double ratio = static_cast<double>(A) / (static_cast<double>(m) * static_cast<double>(m) * p.lnln_m());
    const bool ok = !th.lower || ratio >= *th.lower;
    return Row{{"mu", mu}, {"m", m}, {"k", p.k()}, {"A", A}, {"ratio", ratio}, {"holds", ok}};
  });
  double worst = INFINITY;
  for (const auto& row : rep.rows) {
    worst = std::min(worst, cell_real(row, "ratio"));
    if (!cell_bool(row, "holds"))
      fail(rep.verdict, "mu=" + to_text(row[0].second) + " m=" + to_text(row[1].second));
  }
  rep.verdict.summary = "min ratio " + format_double(worst);
  return rep;
}

// I / (m^2 ln ln m) decreasing from the first to the last m; I / A <= upper.
inline LemmaReport lemma4(const LemmaGrid& g, const Thresholds& th, unsigned threads) {
  const auto ms = grid_points(g);
  struct Tuple {
    natural mu;
    double beta;
    natural m;
  };
  std::vector<Tuple> tuples;
  for (const natural mu : g.mu)
    for (const double beta : g.beta)
      for (const natural m : ms) tuples.push_back({mu, beta, m});
  LemmaReport rep;
  rep.rows = ordered_rows(tuples.size(), threads, [&](std::size_t i) {
    const auto& tp = tuples[i];
    const LabParams p(tp.mu, tp.m, tp.beta);
    const auto dec = quantity_I(p);
    const natural A = dec.I + dec.I_star;
    const double scale = static_cast<double>(tp.m) * static_cast<double>(tp.m) * p.lnln_m();
    const double share = static_cast<double>(dec.I) / static_cast<double>(A);
    const bool ok = !th.upper || share <= *th.upper;
    return Row{{"mu", tp.mu},           {"beta", tp.beta},          {"m", tp.m},
               {"I", dec.I},            {"I_star", dec.I_star},     {"I1", dec.I1},
               {"I2", dec.I2},          {"A", A},                   {"ratio", static_cast<double>(dec.I) / scale},
               {"I_over_A", share},     {"holds", ok}};
  });
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    if (!cell_bool(rep.rows[i], "holds"))
      fail(rep.verdict, "I/A above threshold at m=" + std::to_string(tuples[i].m));
  // Trend: for each (mu, beta) block the last ratio must sit strictly below the first.
  std::string trend;
  for (std::size_t start = 0; start + ms.size() <= rep.rows.size(); start += ms.size()) {
    const double first = cell_real(rep.rows[start], "ratio");
    const double last = cell_real(rep.rows[start + ms.size() - 1], "ratio");
    const auto& tp = tuples[start];
    trend += (trend.empty() ? "" : "; ") + std::string("mu=") + std::to_string(tp.mu) + " beta=" +
             format_double(tp.beta) + ": " + format_double(first) + " -> " + format_double(last);
    if (ms.size() > 1 && !(last < first)) fail(rep.verdict, "no decrease for mu=" + std::to_string(tp.mu));
  }
  rep.verdict.summary = "ratio trend " + trend;
  return rep;
}

// select_s0 admissible with value >= c m ln ln m.
inline LemmaReport lemma5(const LemmaGrid& g, unsigned threads) {
  const auto ms = grid_points(g);
  struct Tuple {
    natural mu;
    double beta;
    natural m;
  };
  std::vector<Tuple> tuples;
  for (const natural mu : g.mu)
    for (const double beta : g.beta)
      for (const natural m : ms) tuples.push_back({mu, beta, m});
  LemmaReport rep;
  rep.rows = ordered_rows(tuples.size(), threads, [&](std::size_t i) {
    const auto& tp = tuples[i];
    const LabParams p(tp.mu, tp.m, tp.beta, g.c);
    const auto sel = select_s0(p);
    const bool admissible = sel.s0 != 0;
    const double bound = g.c * static_cast<double>(tp.m) * p.lnln_m();
    return Row{{"mu", tp.mu},       {"beta", tp.beta}, {"m", tp.m},          {"s0", sel.s0},
               {"value", sel.value}, {"nu2", sel.nu2}, {"bound", bound},      {"holds", admissible && sel.meets_bound}};
  });
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    if (!cell_bool(rep.rows[i], "holds")) fail(rep.verdict, "m=" + std::to_string(tuples[i].m));
  rep.verdict.summary = std::to_string(rep.rows.size()) + " selections checked";
  return rep;
}

// Window max >= window mean, mean / ln N inside [lower, upper].
inline LemmaReport lemma6(const LemmaGrid& g, const Thresholds& th, unsigned threads) {
  const natural lo = std::max<natural>(4, g.lo);
  if (lo > g.hi) throw DomainError("lemma 6: empty N range");
  std::mt19937_64 rng(g.seed);
  std::uniform_int_distribution<natural> pick(lo, g.hi);
  std::vector<natural> ns(g.samples);
  for (auto& n : ns) n = pick(rng);
  std::vector<std::pair<natural, natural>> tuples;
  natural top = 4;
  for (const natural mu : g.mu) {
    if (mu == 0) throw DomainError("lemma 6: mu must be positive");
    for (const natural n : ns) {
      tuples.emplace_back(mu, n);
      top = std::max(top, checked_add(n, integer_kth_root(n, mu)));
    }
  }
  const PrimeTables tables = tables_covering(top);
  LemmaReport rep;
  rep.rows = ordered_rows(tuples.size(), threads, [&](std::size_t i) {
    const auto [mu, n] = tuples[i];
    const auto b = window_average_bound(n, mu, tables);
    bool ok = b.pigeonhole_holds();
    if (th.lower && b.ratio_to_logN < *th.lower) ok = false;
    if (th.upper && b.ratio_to_logN > *th.upper) ok = false;
    return Row{{"N", n},
               {"mu", mu},
               {"w", b.w},
               {"window_sum", b.window_sum},
               {"window_mean", b.window_mean},
               {"window_max", b.window_max},
               {"ratio_to_logN", b.ratio_to_logN},
               {"pigeonhole", b.pigeonhole_holds()},
               {"holds", ok}};
  });
  double lo_r = INFINITY, hi_r = 0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const double r = cell_real(rep.rows[i], "ratio_to_logN");
    lo_r = std::min(lo_r, r);
    hi_r = std::max(hi_r, r);
    if (!cell_bool(rep.rows[i], "holds")) fail(rep.verdict, "N=" + std::to_string(tuples[i].second));
  }
  rep.verdict.summary = "mean/ln N range [" + format_double(lo_r) + ", " + format_double(hi_r) + "]";
  return rep;
}

}  // namespace detail

inline LemmaReport run_lemma_suite(int lemma_id, const LemmaGrid& grid, const Thresholds& thresholds,
                                   unsigned threads = 1) {
  if (grid.step == 0) throw DomainError("grid step must be positive");
  LemmaReport rep;
  switch (lemma_id) {
    case 1: rep = detail::lemma1(grid); break;
    case 2: rep = detail::lemma2(grid, thresholds); break;
    case 3: rep = detail::lemma3(grid, thresholds, threads); break;
    case 4: rep = detail::lemma4(grid, thresholds, threads); break;
    case 5: rep = detail::lemma5(grid, threads); break;
    case 6: rep = detail::lemma6(grid, thresholds, threads); break;
    default: throw DomainError("lemma id must be 1..6");
  }
  rep.lemma_id = lemma_id;
  rep.params = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}};
  if (!grid.mu.empty()) rep.params.emplace_back("mu", detail::join_naturals(grid.mu));
  if (!grid.bases.empty()) rep.params.emplace_back("bases", detail::join_naturals(grid.bases));
  if (!grid.beta.empty()) rep.params.emplace_back("beta", detail::join_reals(grid.beta));
  if (lemma_id == 5) rep.params.emplace_back("c", grid.c);
  if (lemma_id == 6) {
    rep.params.emplace_back("samples", grid.samples);
    rep.params.emplace_back("seed", static_cast<std::uint64_t>(grid.seed));
  }
  if (thresholds.lower) rep.params.emplace_back("lower", *thresholds.lower);
  if (thresholds.upper) rep.params.emplace_back("upper", *thresholds.upper);
  return rep;
}

inline LemmaReport run_lemma_suite(int lemma_id, unsigned threads = 1) {
  return run_lemma_suite(lemma_id, default_grid(lemma_id), default_thresholds(lemma_id), threads);
}

}  // namespace taulab
