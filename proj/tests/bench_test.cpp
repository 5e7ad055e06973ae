#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "congest/congest.hpp"

namespace congest {
namespace {

TEST(Classify, Thresholds) {
  EXPECT_EQ(classify(-1.0), BandwidthClass::efficient);
  EXPECT_EQ(classify(-0.75), BandwidthClass::efficient);
  EXPECT_EQ(classify(-0.5), BandwidthClass::sensitive);
  EXPECT_EQ(classify(-0.2), BandwidthClass::sensitive);
  EXPECT_EQ(classify(-0.05), BandwidthClass::insensitive);
  EXPECT_EQ(classify(0.3), BandwidthClass::insensitive);
  EXPECT_THROW(classify(std::nan("")), std::invalid_argument);
}

TEST(FitExponent, RecoversPowerLaws) {
  for (double beta : {-1.0, -0.5, 0.0, 0.7}) {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) pts.emplace_back(x, 300 * std::pow(x, beta));
    EXPECT_NEAR(fit_exponent(pts), beta, 1e-9);
  }
  std::vector<std::pair<double, double>> one{{1, 2}};
  EXPECT_THROW(fit_exponent(one), std::invalid_argument);
  std::vector<std::pair<double, double>> same{{2, 2}, {2, 5}};
  EXPECT_THROW(fit_exponent(same), std::invalid_argument);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
}

TEST(MakeConfig, WordOverride) {
  auto g = generate(GraphSpec::path(100), 0);
  EXPECT_EQ(make_config(g, 70, std::nullopt).word_bits, 7u);
  EXPECT_EQ(make_config(g, 70, 10).words_per_round(), 7u);
  EXPECT_THROW(make_config(g, 70, 5), ConfigError);
  EXPECT_THROW(make_config(g, 3, std::nullopt), ConfigError);
}

SweepParams star_apsp() {
  SweepParams p;
  p.problem = Problem::apsp;
  p.kind = GraphKind::star;
  p.n = 128;
  p.capacities = {7, 14, 28, 56, 112};
  return p;
}

TEST(Sweep, ApspStarIsEfficient) {
  auto rep = sweep(star_apsp());
  EXPECT_EQ(rep.word_bits, 7u);
  ASSERT_EQ(rep.points.size(), 5u);
  EXPECT_EQ(rep.points.front().x, 1u);
  EXPECT_EQ(rep.points.front().speedup, 1.0);
  EXPECT_LE(rep.beta, -0.75);
  EXPECT_EQ(rep.label, BandwidthClass::efficient);
  for (const auto& pt : rep.points) {
    const auto predicted = static_cast<double>(predicted_rounds_apsp(rep.n, rep.diameter, pt.x));
    EXPECT_LE(std::abs(pt.rounds - predicted), 0.25 * predicted);
  }
  EXPECT_EQ(rep.csv.header, kApspColumns);
  for (const auto& row : rep.csv.rows) EXPECT_EQ(row.back(), "1");
}

TEST(Sweep, MstOnDenseRandomGraphDecreases) {
  SweepParams p;
  p.problem = Problem::mst;
  p.kind = GraphKind::erdos_renyi;
  p.n = 256;
  p.edge_probability = 0.04;
  p.capacities = {40, 80, 160, 320};
  auto rep = sweep(p);
  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) EXPECT_GT(rep.points[i].rounds, rep.points[i + 1].rounds);
  EXPECT_LT(rep.beta, -0.1);
}

TEST(Sweep, DistkIsFlat) {
  SweepParams p;
  p.problem = Problem::distk;
  p.pointers = 64;
  p.k = 6;
  p.capacities = {8, 16, 32, 64};
  auto rep = sweep(p);
  EXPECT_EQ(rep.beta, 0.0);
  EXPECT_EQ(rep.label, BandwidthClass::insensitive);
  for (const auto& pt : rep.points) EXPECT_EQ(pt.rounds, rep.points.front().rounds);
}

TEST(Sweep, MsspTakesMedianOverSeeds) {
  SweepParams p;
  p.problem = Problem::mssp;
  p.kind = GraphKind::erdos_renyi;
  p.n = 64;
  p.edge_probability = 0.1;
  p.alpha = 8;
  p.hops = 4;
  p.capacities = {24, 48, 96, 192};
  p.seeds = {1, 2, 3};
  auto rep = sweep(p);
  EXPECT_EQ(rep.runs.size(), 12u);
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    std::vector<double> r;
    for (std::size_t s = 0; s < 3; ++s) r.push_back(static_cast<double>(rep.runs[3 * i + s].rounds));
    EXPECT_EQ(rep.points[i].rounds, median(r));
  }
  p.seeds = {1, 2};
  EXPECT_THROW(sweep(p), std::invalid_argument);
}

TEST(Sweep, Preconditions) {
  auto p = star_apsp();
  p.capacities = {7, 14, 28};
  EXPECT_THROW(sweep(p), std::invalid_argument);
  p.capacities = {14, 7, 28, 56};
  EXPECT_THROW(sweep(p), std::invalid_argument);
}

TEST(Sweep, OutputsAreReproducible) {
  const auto dir = std::filesystem::temp_directory_path() / "congest_bench_test";
  auto read = [](const std::filesystem::path& f) {
    std::ifstream is(f);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  write_sweep(sweep(star_apsp()), dir / "a");
  write_sweep(sweep(star_apsp()), dir / "b");
  for (const char* f : {"rows.csv", "summary.json", "figure.dat"}) EXPECT_EQ(read(dir / "a" / f), read(dir / "b" / f));
  const auto csv = read(dir / "a" / "rows.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,D,B,X,rounds_used,correct");
  auto j = nlohmann::json::parse(read(dir / "a" / "summary.json"));
  EXPECT_EQ(j["class"], "efficient");
  EXPECT_EQ(j["points"].size(), 5u);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace congest
