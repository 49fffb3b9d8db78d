// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "taulab/arith.hpp"
#include "taulab/lab.hpp"
#include "taulab/lemma_suite.hpp"
#include "taulab/summatory.hpp"
#include "taulab/tn.hpp"

using namespace taulab;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // 0: no stated budget
  std::function<Outcome()> body;
};

Outcome fail_with(std::string why) { return {false, std::move(why)}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// 1. A = B + C, I + I* = A, I = I1 + I2.
Outcome exact_identities() {
  natural cases = 0;
  for (natural mu = 2; mu <= 5; ++mu) {
    const auto tables = build_prime_tables(mu * 300);
    for (natural m = 3; m <= 300; ++m) {
      const LabParams base(mu, m);
      const natural A = quantity_A_direct(base);
      const auto split = quantity_A_via_factorials(base, tables);
      if (split.B + split.C != A)
        return fail_with("A != B + C at mu=" + std::to_string(mu) + " m=" + std::to_string(m));
      if (delta_of_offset_product(base) != A)
        return fail_with("A != Delta(A') at mu=" + std::to_string(mu) + " m=" + std::to_string(m));
      for (const double beta : {1.5, 2.0, 3.0}) {
        const auto d = quantity_I(LabParams(mu, m, beta));
        if (d.I + d.I_star != A || d.I1 + d.I2 != d.I)
          return fail_with("I partition broken at mu=" + std::to_string(mu) + " m=" + std::to_string(m));
        ++cases;
      }
    }
  }
  return {true, std::to_string(cases) + " (mu, m, beta) tuples"};
}

// 2. Hyperbola against the naive sum.
Outcome hyperbola_vs_naive() {
  for (natural N = 0; N <= 100'000; ++N)
    if (divisor_sum_hyperbola(N) != divisor_sum_naive(N)) return fail_with("mismatch at N=" + std::to_string(N));
  auto rng = oracle::rng(2);
  std::uniform_int_distribution<natural> pick(1, 100'000'000);
  for (int i = 0; i < 100; ++i) {
    const natural N = pick(rng);
    if (divisor_sum_hyperbola(N) != divisor_sum_naive(N)) return fail_with("mismatch at N=" + std::to_string(N));
  }
  return {true, "all N <= 1e5 and 100 random N <= 1e8"};
}

// 3. Segmented window tau against per-element factorization.
Outcome window_vs_factorize() {
  auto rng = oracle::rng(3);
  std::uniform_int_distribution<natural> pick_base(0, 10'000'000'000ULL);
  std::uniform_int_distribution<natural> pick_w(1, 10'000);
  const auto tables = tables_covering(10'000'000'000ULL + 10'000);
  const auto& spf = default_spf();
  natural elements = 0;
  for (int i = 0; i < 100; ++i) {
    const natural base = pick_base(rng), w = pick_w(rng);
    const auto s = window_tau(base, w, tables);
    natural sum = 0, best = 0, arg = 0;
    for (natural j = 0; j < w; ++j) {
      const natural t = factorize(base + 1 + j, spf).tau();
      if (s.tau_values[j] != t) return fail_with("tau(" + std::to_string(base + 1 + j) + ") mismatch");
      sum += t;
      if (t > best) {
        best = t;
        arg = j + 1;
      }
    }
    if (s.sum_tau != sum || s.max_tau != best || s.argmax_offset != arg)
      return fail_with("summary mismatch at base=" + std::to_string(base));
    elements += w;
  }
  return {true, std::to_string(elements) + " elements in 100 windows"};
}

// 4. (s+1) tau(p^{k-s}+1) = tau(p^k + p^s).
Outcome prime_power_shift() {
  natural cases = 0;
  for (const natural p : {2, 3, 5, 7})
    for (natural k = 1; k <= 18; ++k) {
      if (!detail::pow_at_most(p, k, kNaturalCap - 1)) break;
      for (natural s = 0; s < k; ++s) {
        if (tau_prime_power_sum(p, k, s) != tau_prime_power_sum_direct(p, k, s))
          return fail_with("p=" + std::to_string(p) + " k=" + std::to_string(k) + " s=" + std::to_string(s));
        ++cases;
      }
    }
  return {true, std::to_string(cases) + " (p, k, s) triples"};
}

Outcome from_suite(int id, const LemmaGrid& g, const Thresholds& th) {
  const auto rep = run_lemma_suite(id, g, th);
  Outcome o{rep.verdict.passed, rep.verdict.summary + ", " + std::to_string(rep.rows.size()) + " rows"};
  if (!rep.verdict.failures.empty()) o.detail += "; first failure: " + rep.verdict.failures.front();
  return o;
}

// 5. tau(m^a+1) >= tau(a) >= Delta(a) and (m^b+1) | (m^a+1).
Outcome lemma1_suite() { return from_suite(1, default_grid(1), default_thresholds(1)); }

// 6. 1 < Delta(k!)/(k lnln k) < 2 on [10, 1e5] and Delta(100!) = 239.
Outcome lemma2_suite() {
  LemmaGrid g = default_grid(2);
  g.lo = 10;
  g.hi = 100'000;
  Thresholds th;
  th.lower = 1.0;
  th.upper = 2.0;
  auto o = from_suite(2, g, th);
  const natural d100 = delta_factorial(100);
  if (d100 != 239) return fail_with("Delta(100!) = " + std::to_string(d100));
  o.detail += ", Delta(100!)=239";
  return o;
}

// 7. A(mu m)/(m^2 lnln m) >= 0.5.
Outcome lemma3_suite() {
  LemmaGrid g = default_grid(3);
  g.mu = {2, 3};
  g.lo = 10;
  g.hi = 2000;
  Thresholds th;
  th.lower = 0.5;
  return from_suite(3, g, th);
}

// 8. I/(m^2 lnln m) falls from m=200 to m=2000; I/A <= 0.5 on [100, 2000].
Outcome lemma4_trend() {
  LemmaGrid g = default_grid(4);
  g.mu = {2};
  g.beta = {2.0};
  g.lo = 100;
  g.hi = 2000;
  Thresholds th;
  th.upper = 0.5;
  auto o = from_suite(4, g, th);
  auto ratio = [](natural m) {
    const LabParams p(2, m, 2.0);
    return static_cast<double>(quantity_I(p).I) / (static_cast<double>(m) * static_cast<double>(m) * p.lnln_m());
  };
  const double r200 = ratio(200), r2000 = ratio(2000);
  o.detail += ", ratio(200)=" + fmt(r200) + " ratio(2000)=" + fmt(r2000);
  if (!(r2000 < r200)) o.ok = false;
  return o;
}

// 9. select_s0 value >= c m lnln m.
Outcome lemma5_suite() {
  LemmaGrid g = default_grid(5);
  g.mu = {2};
  g.beta = {2.0};
  g.c = 0.25;
  g.lo = 100;
  g.hi = 2000;
  return from_suite(5, g, {});
}

// 10. max >= mean exactly and mean/ln N in [0.8, 1.5] for 100 random N <= 1e8.
Outcome lemma6_pigeonhole() {
  LemmaGrid g = default_grid(6);
  g.mu = {2};
  g.lo = 4;
  g.hi = 100'000'000;
  g.samples = 100;
  Thresholds th;
  th.lower = 0.8;
  th.upper = 1.5;
  return from_suite(6, g, th);
}

// 11. T_{2^j}(2) > 2 on [20, 44]; tail minimum beats the head minimum.
Outcome prime_power_divergence() {
  const auto s = prime_power_scan(2, 4, 44, 2);
  if (s.points.size() != 41) return fail_with("scan truncated: " + s.diagnostic);
  const auto head = s.minimum_between(4, 19), tail = s.minimum_between(20, 44);
  for (const auto& pt : s.points)
    if (pt.index >= 20 && !(pt.result.ratio() > TauRatio{2, 1}))
      return fail_with("T at j=" + std::to_string(pt.index) + " is " + fmt(pt.result.value()));
  if (!(*tail > *head)) return fail_with("tail minimum does not exceed head minimum");
  return {true, "min j in [4,19] = " + fmt(head->value()) + ", min j in [20,44] = " + fmt(tail->value())};
}

// 12. Reduction identity on random tuples.
Outcome reduction_identity() {
  auto rng = oracle::rng(12);
  const natural primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  int done = 0;
  while (done < 100) {
    const natural p = primes[rng() % 8];
    const natural mu = 2 + rng() % 5;
    const natural m = 1 + rng() % 30;
    const natural r = 1 + rng() % (mu - 1);
    if (mu * m <= r + 1) continue;
    const natural s = r + 1 + rng() % (mu * m - r - 1);
    if (!detail::pow_at_most(p, mu * m, kNaturalCap / 2)) continue;
    const auto c = verify_reduction_identity(p, mu, m, r, s);
    if (!c.holds())
      return fail_with("p=" + std::to_string(p) + " mu=" + std::to_string(mu) + " m=" + std::to_string(m) +
                       " r=" + std::to_string(r) + " s=" + std::to_string(s));
    ++done;
  }
  return {true, "100 tuples"};
}

// 13. Slope of log |error| against log N.
Outcome error_exponent() {
  const auto fit = fit_error_exponent(1000, 1'000'000'000, 50);
  const bool ok = fit.slope >= 0.2 && fit.slope <= 0.4;
  return {ok, "slope=" + fmt(fit.slope) + ", discarded=" + std::to_string(fit.discarded)};
}

// 14. compute_tn against a brute-force loop.
Outcome tn_brute_force() {
  const auto table = oracle::tau_table(20'001);
  const auto tables = build_prime_tables(200);
  for (natural mu = 1; mu <= 3; ++mu)
    for (natural n = 2; n <= 10'000; ++n) {
      const auto r = compute_tn(n, mu, tables);
      const auto b = oracle::tn(n, mu, table);
      if (r.max_tau != b.max_tau || r.tau_n != b.tau_n || r.argmax_m != b.argmax)
        return fail_with("n=" + std::to_string(n) + " mu=" + std::to_string(mu));
    }
  return {true, "n in [2, 1e4], mu in {1,2,3}"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact identity suite", 60, exact_identities},
      {2, "hyperbola equals naive divisor sum", 120, hyperbola_vs_naive},
      {3, "window tau equals per-element factorization", 60, window_vs_factorize},
      {4, "prime-power shift identity", 0, prime_power_shift},
      {5, "lemma 1 suite", 0, lemma1_suite},
      {6, "lemma 2 suite", 60, lemma2_suite},
      {7, "lemma 3 suite", 0, lemma3_suite},
      {8, "lemma 4 trend", 0, lemma4_trend},
      {9, "lemma 5 suite", 0, lemma5_suite},
      {10, "lemma 6 pigeonhole", 0, lemma6_pigeonhole},
      {11, "prime-power scan T_{2^j}(2)", 600, prime_power_divergence},
      {12, "reduction identity", 0, reduction_identity},
      {13, "error-exponent sanity", 0, error_exponent},
      {14, "T_n brute-force equivalence", 0, tn_brute_force},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = fail_with(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.ok = false;
      o.detail += "; over time budget of " + fmt(c.budget_seconds) + "s";
    }
    if (!o.ok) ++failures;
    std::printf("%s [%2d] %s: %s (%.2fs)\n", o.ok ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
