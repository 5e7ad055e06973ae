#pragma once

// Bandwidth sweeps: run one algorithm over several capacities, check every
// run against its oracle, fit log T against log X and label the curve.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "congest/apsp.hpp"
#include "congest/core/generators.hpp"
#include "congest/core/oracles.hpp"
#include "congest/distk.hpp"
#include "congest/mst.hpp"
#include "congest/sssp.hpp"

namespace congest {

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Problem { apsp, mst, mssp, distk };

inline std::string to_string(Problem p) {
  switch (p) {
    case Problem::apsp: return "apsp";
    case Problem::mst: return "mst";
    case Problem::mssp: return "mssp";
    case Problem::distk: return "distk";
  }
  return "unknown";
}

inline Problem parse_problem(const std::string& s) {
  for (auto p : {Problem::apsp, Problem::mst, Problem::mssp, Problem::distk})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

enum class BandwidthClass { efficient, sensitive, insensitive };

inline constexpr double kEfficientMax = -0.75;
inline constexpr double kSensitiveMax = -0.2;

inline std::string to_string(BandwidthClass c) {
  switch (c) {
    case BandwidthClass::efficient: return "efficient";
    case BandwidthClass::sensitive: return "sensitive";
    case BandwidthClass::insensitive: return "insensitive";
  }
  return "unknown";
}

inline BandwidthClass classify(double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("exponent must be finite");
  if (beta <= kEfficientMax) return BandwidthClass::efficient;
  if (beta <= kSensitiveMax) return BandwidthClass::sensitive;
  return BandwidthClass::insensitive;
}

// Least-squares slope of ln(rounds) on ln(X).
inline double fit_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("a fit needs at least two points");
  double sx = 0, sy = 0;
  for (const auto& [x, t] : points) {
    if (x <= 0 || t <= 0) throw std::invalid_argument("fit points must be positive");
    sx += std::log(x);
    sy += std::log(t);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double num = 0, den = 0;
  for (const auto& [x, t] : points) {
    num += (std::log(x) - mx) * (std::log(t) - my);
    den += (std::log(x) - mx) * (std::log(x) - mx);
  }
  if (den == 0) throw std::invalid_argument("a fit needs two distinct X values");
  return num / den;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of nothing");
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

// Capacity B with an optional word-size override; w may only grow.
inline BandwidthConfig make_config(const Graph& g, std::uint64_t capacity_bits, std::optional<std::uint32_t> word_bits,
                                   CongestionMode mode = CongestionMode::strict) {
  const std::uint32_t minimum = bits_for(g.max_id().value);
  const std::uint32_t w = word_bits.value_or(minimum);
  if (w < minimum)
    throw ConfigError("word size " + std::to_string(w) + " cannot hold IDs up to " + std::to_string(g.max_id().value));
  BandwidthConfig cfg{w, capacity_bits, mode};
  cfg.validate();
  return cfg;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }
};

// One run: the CSV cells in the module's schema plus what the sweep needs.
struct Measurement {
  std::uint64_t x = 0;
  std::uint64_t capacity_bits = 0;
  std::uint64_t seed = 0;
  std::uint64_t rounds = 0;
  bool correct = false;
  std::uint64_t max_link_bits = 0;  // largest per-round delivery on one link direction
  std::vector<std::string> cells;
};

namespace detail {
template <class... T>
std::vector<std::string> cells(const T&... v) {
  std::vector<std::string> out;
  auto one = [&](const auto& x) {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, bool>)
      out.push_back(x ? "1" : "0");
    else if constexpr (std::is_convertible_v<decltype(x), std::string>)
      out.push_back(x);
    else
      out.push_back(std::to_string(x));
  };
  (one(v), ...);
  return out;
}
}  // namespace detail

inline const std::vector<std::string> kApspColumns{"n", "D", "B", "X", "rounds_used", "correct"};
inline const std::vector<std::string> kMstColumns{"n",        "D",          "B",           "X",          "k",
                                                  "fragments", "rounds_fragment", "rounds_pipeline", "rounds_total",
                                                  "correct"};
inline const std::vector<std::string> kMsspColumns{"n",     "alpha",       "h",           "B",
                                                   "X",     "delta",       "rounds_used", "max_edge_words",
                                                   "overflow_words", "correct"};
inline const std::vector<std::string> kDistkColumns{"p", "n", "k", "B", "X", "rounds_used", "bridge_bits", "correct"};

inline const std::vector<std::string>& columns_for(Problem p) {
  switch (p) {
    case Problem::apsp: return kApspColumns;
    case Problem::mst: return kMstColumns;
    case Problem::mssp: return kMsspColumns;
    case Problem::distk: return kDistkColumns;
  }
  return kApspColumns;
}

inline Measurement measure_apsp(const Graph& g, const BandwidthConfig& cfg, std::uint64_t seed, std::uint64_t d,
                                const DistanceTable& oracle) {
  auto res = run_apsp(g, cfg, seed);
  Measurement m{cfg.words_per_round(), cfg.capacity_bits, seed, res.trace.rounds_used, res.table == oracle, res.trace.max_edge_bits(), {}};
  m.cells = detail::cells(g.size(), d, cfg.capacity_bits, m.x, m.rounds, m.correct);
  return m;
}

inline Measurement measure_mst(const Graph& g, const BandwidthConfig& cfg, std::uint64_t seed, std::uint64_t d,
                               std::span<const IdEdge> oracle) {
  auto res = run_mst(g, cfg, seed);
  const bool ok = std::equal(res.edges.begin(), res.edges.end(), oracle.begin(), oracle.end());
  Measurement m{cfg.words_per_round(), cfg.capacity_bits, seed, res.rounds_total, ok, res.trace.max_edge_bits(), {}};
  m.cells = detail::cells(g.size(), d, cfg.capacity_bits, m.x, res.k, res.fragments, res.rounds_fragment,
                          res.rounds_pipeline, res.rounds_total, ok);
  return m;
}

// Skeleton of `alpha` nodes around the smallest ID, resampled per seed.
inline Measurement measure_mssp(const Graph& g, const BandwidthConfig& cfg, std::uint64_t alpha, std::uint64_t hops,
                                std::uint64_t seed) {
  auto sources = sample_skeleton(g, g.ids().front(), alpha, seed);
  auto res = bounded_hop_mssp(g, sources, hops, cfg, seed);
  const bool ok = res.dist == hop_limited_distances(g, sources, hops);
  Measurement m{cfg.words_per_round(), cfg.capacity_bits, seed, res.trace.rounds_used, ok, res.trace.max_edge_bits(), {}};
  m.cells = detail::cells(g.size(), alpha, hops, cfg.capacity_bits, m.x, res.delta, m.rounds, res.max_edge_words,
                          res.overflow_words, ok);
  return m;
}

inline Measurement measure_distk(const ReductionInstance& inst, std::uint64_t k, const BandwidthConfig& cfg,
                                 std::uint64_t seed) {
  auto res = run_distance_k(inst.graph, inst.overlay, inst.start(), k, cfg, 3, seed);
  const bool ok = res.answer == pointer_follow(inst.pointers, k);
  Measurement m{cfg.words_per_round(), cfg.capacity_bits, seed, res.trace.rounds_used, ok, res.trace.max_edge_bits(), {}};
  m.cells = detail::cells(inst.pointers.p, inst.graph.size(), k, cfg.capacity_bits, m.x, m.rounds,
                          bridge_bits(inst, res.trace), ok);
  return m;
}

struct SweepParams {
  Problem problem = Problem::apsp;
  GraphKind kind = GraphKind::star;
  std::size_t n = 64;
  double edge_probability = 0.1;  // erdos-renyi only
  std::vector<std::uint64_t> capacities;  // B values, ascending
  std::optional<std::uint32_t> word_bits;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::uint64_t alpha = 16;  // mssp
  std::uint64_t hops = 12;   // mssp
  std::uint64_t pointers = 256;  // distk
  std::uint64_t k = 8;           // distk
};

struct SweepPoint {
  std::uint64_t x = 0;
  std::uint64_t capacity_bits = 0;
  double rounds = 0;  // median over seeds when randomized
  double speedup = 1;
  bool used_in_fit = false;
};

struct SweepReport {
  Problem problem = Problem::apsp;
  std::string graph;
  std::size_t n = 0;
  std::uint64_t diameter = 0;
  std::uint32_t word_bits = 0;
  std::uint64_t fit_min_rounds = 0;  // rows below 4*D are left out of the fit
  bool fit_fallback = false;         // too few rows cleared the cut; all rows were fitted
  CsvTable csv;
  std::vector<Measurement> runs;
  std::vector<SweepPoint> points;
  double beta = 0;
  BandwidthClass label = BandwidthClass::insensitive;
};

inline GraphSpec sweep_graph_spec(const SweepParams& p) {
  switch (p.kind) {
    case GraphKind::erdos_renyi: return GraphSpec::erdos_renyi(p.n, p.edge_probability);
    case GraphKind::path: return GraphSpec::path(p.n);
    case GraphKind::star: return GraphSpec::star(p.n);
    case GraphKind::grid: {
      const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(p.n))));
      if (side * side != p.n) throw std::invalid_argument("grid sweeps need a square n");
      return GraphSpec::grid(side, side);
    }
    case GraphKind::tree_plus_chords: return GraphSpec::tree_plus_chords(p.n, p.n / 4);
  }
  throw std::invalid_argument("unknown graph kind");
}

// Deterministic problems run once per capacity on the graph drawn from the
// first seed; mssp runs every seed on that graph and reports the median.
inline SweepReport sweep(const SweepParams& params) {
  if (params.capacities.size() < 4) throw std::invalid_argument("a sweep needs at least four capacities");
  if (!std::is_sorted(params.capacities.begin(), params.capacities.end()) ||
      std::adjacent_find(params.capacities.begin(), params.capacities.end()) != params.capacities.end())
    throw std::invalid_argument("capacities must be strictly ascending");
  if (params.seeds.empty()) throw std::invalid_argument("at least one seed is required");
  const bool randomized = params.problem == Problem::mssp;
  if (randomized && params.seeds.size() < 3) throw std::invalid_argument("randomized sweeps need at least three seeds");
  const std::uint64_t base_seed = params.seeds.front();

  SweepReport rep;
  rep.problem = params.problem;
  rep.csv.header = columns_for(params.problem);

  Graph g;
  std::optional<ReductionInstance> reduction;
  if (params.problem == Problem::distk) {
    reduction = build_reduction(PointerInstance::random(params.pointers, base_seed));
    g = reduction->graph;
    rep.graph = "reduction(p=" + std::to_string(params.pointers) + ",k=" + std::to_string(params.k) + ")";
    rep.diameter = 3;
  } else {
    g = generate(sweep_graph_spec(params), base_seed, params.problem == Problem::mst);
    rep.graph = to_string(params.kind) + "(n=" + std::to_string(g.size()) + ")";
    rep.diameter = diameter(g);
  }
  rep.n = g.size();

  std::optional<DistanceTable> apsp_truth;
  std::vector<IdEdge> mst_truth;
  if (params.problem == Problem::apsp) apsp_truth = apsp_oracle(g);
  if (params.problem == Problem::mst) {
    mst_truth = mst_oracle(g);
    std::sort(mst_truth.begin(), mst_truth.end());
  }

  const auto run_seeds = randomized ? std::span<const std::uint64_t>(params.seeds)
                                    : std::span<const std::uint64_t>(params.seeds.data(), 1);
  for (auto b : params.capacities) {
    const auto mode = randomized ? CongestionMode::queue : CongestionMode::strict;
    const auto cfg = make_config(g, b, params.word_bits, mode);
    rep.word_bits = cfg.word_bits;
    std::vector<double> rounds;
    for (auto seed : run_seeds) {
      Measurement m;
      switch (params.problem) {
        case Problem::apsp: m = measure_apsp(g, cfg, seed, rep.diameter, *apsp_truth); break;
        case Problem::mst: m = measure_mst(g, cfg, seed, rep.diameter, mst_truth); break;
        case Problem::mssp: m = measure_mssp(g, cfg, params.alpha, params.hops, seed); break;
        case Problem::distk: m = measure_distk(*reduction, params.k, cfg, seed); break;
      }
      if (!m.correct)
        throw SweepError(to_string(params.problem) + " disagrees with its oracle at B=" + std::to_string(b) +
                         " seed=" + std::to_string(seed));
      rounds.push_back(static_cast<double>(m.rounds));
      rep.csv.rows.push_back(m.cells);
      rep.runs.push_back(std::move(m));
    }
    rep.points.push_back({cfg.words_per_round(), b, median(rounds), 1, false});
  }

  for (auto& pt : rep.points) pt.speedup = rep.points.front().rounds / pt.rounds;

  rep.fit_min_rounds = 4 * rep.diameter;
  std::vector<std::pair<double, double>> fit;
  for (auto& pt : rep.points) {
    pt.used_in_fit = pt.rounds >= static_cast<double>(rep.fit_min_rounds);
    if (pt.used_in_fit) fit.emplace_back(static_cast<double>(pt.x), pt.rounds);
  }
  if (fit.size() < 2) {
    rep.fit_fallback = true;
    fit.clear();
    for (auto& pt : rep.points) {
      pt.used_in_fit = true;
      fit.emplace_back(static_cast<double>(pt.x), pt.rounds);
    }
  }
  rep.beta = fit_exponent(fit);
  rep.label = classify(rep.beta);
  return rep;
}

inline nlohmann::ordered_json summary_json(const SweepReport& rep) {
  nlohmann::ordered_json j;
  j["problem"] = to_string(rep.problem);
  j["graph"] = rep.graph;
  j["n"] = rep.n;
  j["D"] = rep.diameter;
  j["word_bits"] = rep.word_bits;
  j["beta"] = rep.beta;
  j["class"] = to_string(rep.label);
  j["thresholds"] = {{"efficient_max_beta", kEfficientMax}, {"sensitive_max_beta", kSensitiveMax}};
  j["fit_min_rounds"] = rep.fit_min_rounds;
  j["fit_fallback"] = rep.fit_fallback;
  auto points = nlohmann::ordered_json::array();
  auto excluded = nlohmann::ordered_json::array();
  for (const auto& pt : rep.points) {
    points.push_back({{"X", pt.x}, {"B", pt.capacity_bits}, {"rounds", pt.rounds}, {"speedup", pt.speedup},
                      {"used_in_fit", pt.used_in_fit}});
    if (!pt.used_in_fit) excluded.push_back(pt.x);
  }
  j["points"] = points;
  j["excluded_X"] = excluded;
  return j;
}

inline void write_figure_data(std::ostream& os, const SweepReport& rep) {
  os << "# X rounds\n";
  for (const auto& pt : rep.points) os << pt.x << ' ' << pt.rounds << '\n';
}

inline void write_sweep(const SweepReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "rows.csv");
    rep.csv.write(os);
  }
  {
    std::ofstream os(dir / "summary.json");
    os << summary_json(rep).dump(2) << '\n';
  }
  std::ofstream os(dir / "figure.dat");
  write_figure_data(os, rep);
  if (!os) throw std::runtime_error("could not write sweep output to " + dir.string());
}

}  // namespace congest
