#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

namespace taulab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  if (s == "table") return Format::Table;
  throw DomainError("unknown output format '" + s + "'");
}

std::string format_name(Format f) {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Table: return "table";
  }
  return "table";
}

natural parse_natural(const std::string& s, const char* what) {
  std::size_t used = 0;
  natural v = 0;
  try {
    if (!s.empty() && s[0] == '-') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::out_of_range&) {
    throw CapacityError(std::string(what) + " does not fit in 64 bits");
  } catch (const std::exception&) {
    throw DomainError(std::string(what) + " is not a natural number: " + s);
  }
  if (used != s.size()) throw DomainError(std::string(what) + " is not a natural number: " + s);
  if (v > kNaturalCap) throw CapacityError(std::string(what) + " exceeds 2^63-1");
  return v;
}

/// Single-row output in the configured format. Table format prints
/// space-separated key=value pairs on one line.
void emit_row(std::ostream& out, Format fmt, const std::string& kind, const Row& row) {
  switch (fmt) {
    case Format::Csv: write_csv(out, row); break;
    case Format::Json: out << row_json(kind, row).dump() << '\n'; break;
    case Format::Table: {
      bool first = true;
      for (const auto& [k, v] : row) {
        out << (first ? "" : " ") << k << '=' << to_text(v);
        first = false;
      }
      out << '\n';
      break;
    }
  }
}

void emit_rows(std::ostream& out, Format fmt, const std::string& kind, const std::vector<Row>& rows) {
  switch (fmt) {
    case Format::Csv: write_csv(out, rows); break;
    case Format::Json: {
      auto j = envelope(kind);
      j["rows"] = nlohmann::json::array();
      for (const auto& r : rows) j["rows"].push_back(to_json(r));
      out << j.dump() << '\n';
      break;
    }
    case Format::Table: write_table(out, rows); break;
  }
}

std::optional<std::string> config_path_from_argv(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  if (const char* env = std::getenv("TAULAB_CONFIG"); env && *env) return std::string(env);
  return std::nullopt;
}

}  // namespace

void Config::validate() const {
  if (sieve_limit < 2 || sieve_limit > kSieveCap) throw DomainError("sieve_limit must lie in [2, 2^31]");
  if (!(beta > 0)) throw DomainError("beta must be positive");
  if (!(c > 0)) throw DomainError("c must be positive");
  if (!(theta > 0 && theta <= 0.5)) throw DomainError("theta must lie in (0, 1/2]");
  if (seed == 0) throw DomainError("seed must be positive");
}

void load_config_file(const std::filesystem::path& path, Config& cfg) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      if (key == "sieve_limit")
        cfg.sieve_limit = parse_natural(value, "sieve_limit");
      else if (key == "beta")
        cfg.beta = std::stod(value);
      else if (key == "c")
        cfg.c = std::stod(value);
      else if (key == "theta")
        cfg.theta = std::stod(value);
      else if (key == "seed")
        cfg.seed = parse_natural(value, "seed");
      else if (key == "format" || key == "output_format")
        cfg.output_format = parse_format(value);
      else if (key == "threads")
        cfg.threads = static_cast<unsigned>(parse_natural(value, "threads"));
      else
        throw DomainError("unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) + ": bad value for " + key);
    }
  }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Divisor-function oscillation toolkit", "taulab"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_help_all_flag("--help-all", "Expand all help");

  try {
    if (const auto path = config_path_from_argv(argc, argv)) load_config_file(*path, cfg);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }

  std::string format = format_name(cfg.output_format);
  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file (flags override it)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json", "table"}));
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  app.add_option("--seed", cfg.seed, "Seed for the factorization splitter");
  app.add_option("--sieve-limit", cfg.sieve_limit, "Smallest-prime-factor table size");
  app.add_option("--beta", cfg.beta, "2-adic cut multiplier beta");
  app.add_option("--c", cfg.c, "Constant c in c m ln ln m");
  app.add_option("--theta", cfg.theta, "Divisor-problem exponent theta");

  std::string number;
  auto* tau_cmd = app.add_subcommand("tau", "Number of divisors of N");
  tau_cmd->add_option("N", number)->required();
  auto* factor_cmd = app.add_subcommand("factor", "Prime factorization of N");
  factor_cmd->add_option("N", number)->required();
  auto* delta_cmd = app.add_subcommand("delta", "Prime factors of N with multiplicity");
  delta_cmd->add_option("N", number)->required();
  auto* wigert_cmd = app.add_subcommand("wigert", "log2(tau(N)) ln ln N / ln N");
  wigert_cmd->add_option("N", number)->required();

  natural n = 0, mu = 0;
  std::string method = "hyperbola";
  auto* summ_cmd = app.add_subcommand("summatory", "D(N) and its error term");
  summ_cmd->add_option("--n", n)->required();
  summ_cmd->add_option("--method", method)->check(CLI::IsMember({"naive", "hyperbola"}));

  natural n_min = 0, n_max = 0, samples = 0;
  auto* fit_cmd = app.add_subcommand("error-exponent", "Power-law fit of |D(N) - main term|");
  fit_cmd->add_option("--min", n_min)->required();
  fit_cmd->add_option("--max", n_max)->required();
  fit_cmd->add_option("--samples", samples)->required();

  auto* window_cmd = app.add_subcommand("window", "tau over (N, N + N^(1/mu)]");
  window_cmd->add_option("--n", n)->required();
  window_cmd->add_option("--mu", mu)->required();

  std::string mu_text;
  auto* tn_cmd = app.add_subcommand("tn", "T_n(mu)");
  tn_cmd->add_option("--n", n)->required();
  tn_cmd->add_option("--mu", mu_text, "positive integer, or real for the reporting mode")->required();

  natural p = 0, j_min = 0, j_max = 0, lo = 0, hi = 0, stride = 1;
  std::string checkpoint;
  auto* spp_cmd = app.add_subcommand("scan-prime-power", "T_{p^j}(mu) for j in [j-min, j-max]");
  spp_cmd->add_option("--p", p)->required();
  spp_cmd->add_option("--j-min", j_min)->required();
  spp_cmd->add_option("--j-max", j_max)->required();
  spp_cmd->add_option("--mu", mu)->required();
  spp_cmd->add_option("--checkpoint", checkpoint, "Resume file for long scans");

  auto* range_cmd = app.add_subcommand("scan-range", "T_n(mu) for n in [lo, hi]");
  range_cmd->add_option("--lo", lo)->required();
  range_cmd->add_option("--hi", hi)->required();
  range_cmd->add_option("--mu", mu)->required();
  range_cmd->add_option("--stride", stride);
  range_cmd->add_option("--checkpoint", checkpoint, "Resume file for long scans");

  natural m = 0;
  auto* quant_cmd = app.add_subcommand("quantities", "A, B, C, X, Y, Z, I, I*, I1, I2 for k = mu m");
  quant_cmd->add_option("--mu", mu)->required();
  quant_cmd->add_option("--m", m)->required();
  quant_cmd->add_option("--beta", cfg.beta);
  quant_cmd->add_option("--c", cfg.c);

  int lemma_id = 0;
  std::string grid;
  std::optional<double> lower, upper;
  auto* lemma_cmd = app.add_subcommand("lemma", "Run a lemma verification grid");
  lemma_cmd->add_option("--id", lemma_id)->required()->check(CLI::Range(1, 6));
  lemma_cmd->add_option("--grid", grid, "e.g. 'mu=2,3;m=10..2000;beta=2'");
  lemma_cmd->add_option("--lower", lower);
  lemma_cmd->add_option("--upper", upper);

  auto* s0_cmd = app.add_subcommand("construct-s0", "Select s0 and build the odd shift s*");
  s0_cmd->add_option("--mu", mu)->required();
  s0_cmd->add_option("--m", m)->required();
  s0_cmd->add_option("--beta", cfg.beta);
  s0_cmd->add_option("--c", cfg.c);

  natural x = 0, a = 0;
  auto* kara_cmd = app.add_subcommand("karatsuba", "S_a(x) = sum tau(n)/tau(n+a)");
  kara_cmd->add_option("--x", x)->required();
  kara_cmd->add_option("--a", a)->required();

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    cfg.output_format = parse_format(format);
    cfg.validate();
    const unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    const Format fmt = cfg.output_format;

    if (tau_cmd->parsed() || factor_cmd->parsed() || delta_cmd->parsed()) {
      const natural value = parse_natural(number, "N");
      if (value == 0) throw DomainError("N must be positive");
      const auto f = value <= cfg.sieve_limit ? factorize(value, build_spf(std::max<natural>(2, value)), cfg.seed)
                                              : factorize(value, default_spf(), cfg.seed);
      if (tau_cmd->parsed()) {
        if (fmt == Format::Table)
          out << f.tau() << '\n';
        else
          emit_row(out, fmt, "tau", {{"n", value}, {"tau", f.tau()}});
      } else if (delta_cmd->parsed()) {
        if (fmt == Format::Table)
          out << f.big_delta() << '\n';
        else
          emit_row(out, fmt, "delta", {{"n", value}, {"delta", f.big_delta()}});
      } else if (fmt == Format::Table) {
        out << format_factorization(f) << '\n';
      } else if (fmt == Format::Json) {
        out << to_json(f).dump() << '\n';
      } else {
        std::vector<Row> rows;
        for (const auto& t : f.factors) rows.push_back({{"prime", t.prime}, {"exponent", t.exponent}});
        emit_rows(out, fmt, "factor", rows);
      }
      return kOk;
    }

    if (wigert_cmd->parsed()) {
      const natural value = parse_natural(number, "N");
      emit_row(out, fmt, "wigert", {{"n", value}, {"tau", tau(value)}, {"index", wigert_index(value)}});
      return kOk;
    }

    if (summ_cmd->parsed()) {
      SummatoryResult r;
      if (method == "naive") {
        if (n == 0) throw DomainError("N must be positive");
        r = error_term_of(n, divisor_sum_naive(n));
      } else {
        r = error_term(n);
      }
      emit_row(out, fmt, "summatory", to_row(r));
      return kOk;
    }

    if (fit_cmd->parsed()) {
      const auto fit = fit_error_exponent(n_min, n_max, samples);
      if (fmt == Format::Json) {
        out << to_json(fit).dump() << '\n';
      } else if (fmt == Format::Csv) {
        std::vector<Row> rows;
        for (const auto& [N, e] : fit.samples) rows.push_back({{"N", N}, {"abs_error", e}});
        write_csv(out, rows);
      } else {
        emit_row(out, fmt, "error-exponent",
                 {{"slope", fit.slope}, {"intercept", fit.intercept}, {"discarded", static_cast<natural>(fit.discarded)}});
      }
      return kOk;
    }

    if (window_cmd->parsed()) {
      if (mu == 0) throw DomainError("mu must be positive");
      const natural end = detail::checked_add(n, integer_kth_root(n, mu));
      emit_row(out, fmt, "window", to_row(window_average_bound(n, mu, tables_covering(end), threads)));
      return kOk;
    }

    if (tn_cmd->parsed()) {
      double mu_real = 0;
      try {
        mu_real = std::stod(mu_text);
      } catch (const std::exception&) {
        throw DomainError("mu is not a number: " + mu_text);
      }
      if (!(mu_real > 0)) throw DomainError("mu must be positive");
      TnResult r;
      if (mu_real == std::floor(mu_real)) {
        r = compute_tn(n, static_cast<natural>(mu_real), threads);
      } else {
        const natural w = real_root_floor(n, mu_real);
        r = compute_tn_real(n, mu_real, tables_covering(detail::checked_add(n, w)), threads);
      }
      emit_row(out, fmt, "tn", to_row(r));
      return kOk;
    }

    if (spp_cmd->parsed() || range_cmd->parsed()) {
      ScanOptions opt;
      opt.threads = threads;
      opt.theta = cfg.theta;
      opt.stride = stride;
      if (!checkpoint.empty()) opt.checkpoint = checkpoint;
      const auto series = spp_cmd->parsed() ? prime_power_scan(p, j_min, j_max, mu, opt)
                                            : conjecture_scan(lo, hi, mu, opt);
      if (fmt == Format::Json) {
        out << to_json(series, cfg.theta).dump() << '\n';
      } else {
        emit_rows(out, fmt, "scan", to_rows(series));
      }
      if (!series.diagnostic.empty()) err << "note: " << series.diagnostic << '\n';
      return kOk;
    }

    if (quant_cmd->parsed()) {
      const LabParams params(mu, m, cfg.beta, cfg.c);
      emit_row(out, fmt, "quantities", to_row(compute_quantities(params), params));
      return kOk;
    }

    if (lemma_cmd->parsed()) {
      const LemmaGrid g = parse_grid(lemma_id, grid);
      Thresholds th = default_thresholds(lemma_id);
      if (lower) th.lower = lower;
      if (upper) th.upper = upper;
      const auto rep = run_lemma_suite(lemma_id, g, th, threads);
      if (fmt == Format::Json) {
        out << to_json(rep).dump() << '\n';
      } else {
        emit_rows(out, fmt, "lemma", rep.rows);
        err << "lemma " << lemma_id << ": " << (rep.verdict.passed ? "PASS" : "FAIL") << " (" << rep.verdict.summary
            << ")\n";
        for (const auto& f : rep.verdict.failures) err << "  " << f << '\n';
      }
      return rep.verdict.passed ? kOk : kVerificationFailed;
    }

    if (s0_cmd->parsed()) {
      const LabParams params(mu, m, cfg.beta, cfg.c);
      const auto sel = construct_odd_shift(params, select_s0(params));
      emit_row(out, fmt, "construct-s0", to_row(sel, params));
      return kOk;
    }

    if (kara_cmd->parsed()) {
      const auto s = karatsuba_sum(x, a, threads);
      emit_row(out, fmt, "karatsuba",
               {{"x", s.x}, {"a", s.a}, {"S", s.value}, {"S_over_x", s.value / static_cast<double>(s.x)}, {"exact", s.exact}});
      return kOk;
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kCapacityError;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << '\n';
    return kCapacityError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  err << app.help();
  return kUsage;
}

}  // namespace taulab::cli
