#pragma once

// CSV / JSON / plain-table rendering of results. CSV: comma separator,
// header row, '.' decimal point, shortest round-trip doubles. JSON: a single
// object carrying schema_version "1".

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "taulab/lab.hpp"
#include "taulab/lemma_suite.hpp"
#include "taulab/sieve.hpp"
#include "taulab/summatory.hpp"
#include "taulab/table.hpp"
#include "taulab/tn.hpp"

namespace taulab {

enum class Format { Csv, Json, Table };

inline constexpr const char* kSchemaVersion = "1";

// ---------------------------------------------------------------------------
// Rows

inline Row to_row(const TnResult& r) {
  return {{"n", r.n},           {"mu", r.mu},         {"w", r.w},          {"tau_n", r.tau_n},
          {"max_tau", r.max_tau}, {"argmax_m", r.argmax_m}, {"value", r.value()}};
}

inline Row to_row(const SummatoryResult& r) {
  return {{"N", r.N}, {"D", r.D}, {"main_term", r.main_term}, {"error", r.error}};
}

inline Row to_row(const WindowBound& b) {
  return {{"N", b.N},      {"mu", b.mu},     {"w", b.w},
          {"sum", b.window_sum}, {"mean", b.window_mean}, {"max", b.window_max},
          {"ratio_to_logN", b.ratio_to_logN}};
}

inline std::vector<Row> to_rows(const ScanSeries& s) {
  std::vector<Row> rows;
  const char* index = s.kind == ScanKind::PrimePower ? "j" : "n";
  for (const auto& pt : s.points) {
    const auto& r = pt.result;
    rows.push_back({{index, pt.index},
                    {"w", r.w},
                    {"tau_n", r.tau_n},
                    {"max_tau", r.max_tau},
                    {"argmax_m", r.argmax_m},
                    {"value", r.value()}});
  }
  return rows;
}

inline Row to_row(const QuantityBundle& q, const LabParams& p) {
  return {{"mu", p.mu()}, {"m", p.m()},   {"k", p.k()},         {"beta", p.beta()}, {"A", q.A},
          {"B", q.B},     {"C", q.C},     {"X", q.X},           {"Y", q.Y},         {"Z", q.Z},
          {"I", q.I},     {"I_star", q.I_star}, {"I1", q.I1},  {"I2", q.I2}};
}

inline Row to_row(const ShiftSelection& s, const LabParams& p) {
  auto opt = [](const std::optional<natural>& v) -> Cell {
    if (v) return *v;
    return std::string();
  };
  return {{"mu", p.mu()},
          {"m", p.m()},
          {"k", p.k()},
          {"beta", p.beta()},
          {"c", p.c()},
          {"s0", s.s0},
          {"value", s.value},
          {"nu2", s.nu2},
          {"t", s.t},
          {"a", s.a},
          {"meets_bound", s.meets_bound},
          {"case", std::string(to_string(s.case_taken))},
          {"q", opt(s.q)},
          {"b", opt(s.b)},
          {"r", opt(s.r)},
          {"s_star", opt(s.s_star)},
          {"star_value", opt(s.star_value)},
          {"below_regime", s.below_regime},
          {"diagnostic", s.diagnostic}};
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

inline void write_csv(std::ostream& os, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  const auto& head = rows.front();
  for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << csv_field(head[i].first);
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != head.size()) throw std::logic_error("csv rows must share one schema");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(to_text(row[i].second));
    os << '\n';
  }
}

inline void write_csv(std::ostream& os, const Row& row) { write_csv(os, std::vector<Row>{row}); }

/// Header plus string records; quotes handled, no type inference.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::out_of_range("no csv column " + name);
  }
};

inline std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) return t;
  t.header = parse_csv_line(line);
  while (std::getline(is, line))
    if (!line.empty()) t.records.push_back(parse_csv_line(line));
  return t;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, c);
}

inline nlohmann::json to_json(const Row& row) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [k, v] : row) obj[k] = to_json(v);
  return obj;
}

inline nlohmann::json envelope(const std::string& kind) {
  return nlohmann::json{{"schema_version", kSchemaVersion}, {"kind", kind}};
}

inline nlohmann::json to_json(const LemmaReport& rep) {
  auto j = envelope("lemma");
  j["lemma_id"] = rep.lemma_id;
  j["params"] = to_json(rep.params);
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rep.rows) j["rows"].push_back(to_json(row));
  j["verdict"] = {{"passed", rep.verdict.passed}, {"failures", rep.verdict.failures}, {"summary", rep.verdict.summary}};
  return j;
}

inline nlohmann::json to_json(const ScanSeries& s, double theta) {
  auto j = envelope(s.kind == ScanKind::PrimePower ? "scan-prime-power" : "scan-range");
  if (s.kind == ScanKind::PrimePower) j["p"] = s.p;
  j["lo"] = s.lo;
  j["hi"] = s.hi;
  j["mu"] = s.mu;
  j["theta"] = theta;
  j["in_guaranteed_regime"] = s.in_guaranteed_regime;
  j["diagnostic"] = s.diagnostic;
  j["points"] = nlohmann::json::array();
  const auto tails = s.tail_minimum();
  const auto rows = to_rows(s);
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    auto row = to_json(rows[i]);
    row["n"] = s.points[i].result.n;
    row["tail_min"] = tails[i].value();
    j["points"].push_back(row);
  }
  if (const auto m = s.minimum()) {
    j["min_value"] = m->result.value();
    j["argmin"] = m->index;
  }
  return j;
}

inline nlohmann::json to_json(const ExponentFit& f) {
  auto j = envelope("error-exponent");
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["discarded"] = f.discarded;
  j["samples"] = nlohmann::json::array();
  for (const auto& [n, e] : f.samples) j["samples"].push_back({{"N", n}, {"abs_error", e}});
  return j;
}

inline nlohmann::json to_json(const Factorization& f) {
  auto j = envelope("factor");
  j["n"] = f.n;
  j["factors"] = nlohmann::json::array();
  for (const auto& t : f.factors) j["factors"].push_back({{"prime", t.prime}, {"exponent", t.exponent}});
  return j;
}

/// A single row as a JSON object with the schema envelope.
inline nlohmann::json row_json(const std::string& kind, const Row& row) {
  auto j = envelope(kind);
  for (const auto& [k, v] : row) j[k] = to_json(v);
  return j;
}

// ---------------------------------------------------------------------------
// Plain table

/// "2^3 · 3^2 · 5"; "1" for the empty product.
inline std::string format_factorization(const Factorization& f) {
  if (f.factors.empty()) return "1";
  std::string s;
  for (const auto& t : f.factors) {
    if (!s.empty()) s += " · ";
    s += std::to_string(t.prime);
    if (t.exponent > 1) s += "^" + std::to_string(t.exponent);
  }
  return s;
}

inline void write_table(std::ostream& os, const Row& row) {
  for (const auto& [k, v] : row) os << k << " = " << to_text(v) << '\n';
}

inline void write_table(std::ostream& os, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  const auto& head = rows.front();
  std::vector<std::size_t> width(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) width[i] = head[i].first.size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], to_text(row[i].second).size());
  auto pad = [&](const std::string& s, std::size_t w) { return std::string(w - std::min(w, s.size()), ' ') + s; };
  for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "  " : "") << pad(head[i].first, width[i]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
      os << (i ? "  " : "") << pad(to_text(row[i].second), width[i]);
    os << '\n';
  }
}

}  // namespace taulab
