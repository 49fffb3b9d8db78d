#include <gtest/gtest.h>

#include <charconv>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "taulab/emit.hpp"

using namespace taulab;

TEST(Csv, TnResultHeader) {
  std::ostringstream os;
  write_csv(os, to_row(compute_tn(16, 2)));
  EXPECT_EQ(os.str(), "n,mu,w,tau_n,max_tau,argmax_m,value\n16,2,4,5,6,2,1.2\n");
}

TEST(Csv, QuotesAwkwardFields) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(parse_csv_line("\"a,b\",\"say \"\"hi\"\"\",3"), (std::vector<std::string>{"a,b", "say \"hi\"", "3"}));
}

TEST(Csv, RoundTripReproducesValues) {
  auto rng = oracle::rng(8);
  std::uniform_real_distribution<double> real(-1e6, 1e6);
  std::vector<Row> rows;
  std::vector<double> reals;
  for (int i = 0; i < 500; ++i) {
    const double v = real(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    reals.push_back(v);
    rows.push_back({{"i", static_cast<natural>(i)}, {"x", v}, {"flag", i % 3 == 0}, {"note", std::string("n,") + std::to_string(i)}});
  }
  std::stringstream ss;
  write_csv(ss, rows);
  const auto table = read_csv(ss);
  ASSERT_EQ(table.header, (std::vector<std::string>{"i", "x", "flag", "note"}));
  ASSERT_EQ(table.records.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& rec = table.records[i];
    EXPECT_EQ(std::stoull(rec[table.column("i")]), i);
    double back = 0;
    const auto& text = rec[table.column("x")];
    std::from_chars(text.data(), text.data() + text.size(), back);
    EXPECT_EQ(back, reals[i]);
    EXPECT_EQ(rec[table.column("flag")], i % 3 == 0 ? "true" : "false");
    EXPECT_EQ(rec[table.column("note")], "n," + std::to_string(i));
  }
}

TEST(Csv, ScanSeriesColumns) {
  std::stringstream ss;
  write_csv(ss, to_rows(prime_power_scan(2, 4, 6, 2)));
  const auto t = read_csv(ss);
  EXPECT_EQ(t.header, (std::vector<std::string>{"j", "w", "tau_n", "max_tau", "argmax_m", "value"}));
  ASSERT_EQ(t.records.size(), 3u);
  EXPECT_EQ(t.records[0], (std::vector<std::string>{"4", "4", "5", "6", "2", "1.2"}));
  EXPECT_EQ(t.records[1], (std::vector<std::string>{"5", "5", "6", "9", "4", "1.5"}));
}

TEST(Json, LemmaReportKeys) {
  LemmaGrid g = default_grid(2);
  g.lo = 10;
  g.hi = 20;
  const auto j = to_json(run_lemma_suite(2, g, default_thresholds(2)));
  EXPECT_EQ(j.at("schema_version"), "1");
  for (const char* key : {"lemma_id", "params", "rows", "verdict"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("lemma_id"), 2);
  EXPECT_EQ(j.at("rows").size(), 11u);
  EXPECT_TRUE(j.at("verdict").at("passed").get<bool>());
  // Reparsing the dump yields the same document.
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
}

TEST(Json, RowEnvelope) {
  const auto j = row_json("summatory", to_row(error_term(100)));
  EXPECT_EQ(j.at("schema_version"), "1");
  EXPECT_EQ(j.at("kind"), "summatory");
  EXPECT_EQ(j.at("D"), 482);
  EXPECT_NEAR(j.at("error").get<double>(), 6.04, 5e-3);
}

TEST(Json, FactorizationAndScan) {
  const auto f = to_json(factorize(360));
  EXPECT_EQ(f.at("factors").size(), 3u);
  EXPECT_EQ(f.at("factors")[0].at("prime"), 2);
  EXPECT_EQ(f.at("factors")[0].at("exponent"), 3);

  const auto s = to_json(prime_power_scan(2, 4, 8, 2), kDefaultTheta);
  EXPECT_EQ(s.at("kind"), "scan-prime-power");
  EXPECT_EQ(s.at("points").size(), 5u);
  EXPECT_EQ(s.at("points")[0].at("n"), 16);
  EXPECT_EQ(s.at("argmin"), 4);
  EXPECT_TRUE(s.at("in_guaranteed_regime").get<bool>());
}

TEST(Table, FactorizationFormat) {
  EXPECT_EQ(format_factorization(factorize(360)), "2^3 · 3^2 · 5");
  EXPECT_EQ(format_factorization(factorize(1)), "1");
  EXPECT_EQ(format_factorization(factorize(524'289)), "3 · 174763");
}

TEST(Table, DoublesAreShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3), "0.3333333333333333");
  EXPECT_EQ(to_text(Cell{true}), "true");
  EXPECT_EQ(to_text(Cell{std::int64_t{-4}}), "-4");
}
