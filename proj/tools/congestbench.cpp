#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "congest/congest.hpp"

using namespace congest;

namespace {

struct TraceOut {
  std::string csv;
  std::string json;

  void add(CLI::App* cmd) {
    cmd->add_option("--trace-csv", csv, "write per-link trace records here");
    cmd->add_option("--trace-json", json, "write the trace summary here");
  }

  void write(const RunTrace& trace) const {
    if (!csv.empty()) {
      std::ofstream os(csv);
      write_trace_csv(os, trace);
    }
    if (!json.empty()) {
      std::ofstream os(json);
      os << trace_summary(trace).dump(2) << '\n';
    }
  }
};

void write_table(const std::string& path, const std::vector<std::string>& header, const std::vector<std::string>& row) {
  CsvTable t{header, {row}};
  if (path.empty() || path == "-") {
    t.write(std::cout);
    return;
  }
  std::ofstream os(path);
  t.write(os);
  if (!os) throw std::runtime_error("could not write " + path);
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandwidth experiments for round-based message-passing algorithms"};
  app.require_subcommand(1);

  // generate
  std::string gen_kind = "erdos-renyi", gen_out;
  std::size_t gen_n = 64, gen_rows = 0, gen_cols = 0, gen_chords = 0;
  double gen_p = 0.1;
  std::uint64_t gen_seed = 1;
  bool gen_weighted = false;
  auto* gen = app.add_subcommand("generate", "write a generated graph file");
  gen->add_option("--kind", gen_kind, "erdos-renyi, path, star, grid, tree-plus-chords");
  gen->add_option("--n", gen_n, "node count");
  gen->add_option("--p", gen_p, "edge probability (erdos-renyi)");
  gen->add_option("--rows", gen_rows, "grid rows");
  gen->add_option("--cols", gen_cols, "grid columns");
  gen->add_option("--chords", gen_chords, "extra edges (tree-plus-chords)");
  gen->add_option("--seed", gen_seed);
  gen->add_flag("--weighted", gen_weighted, "distinct random weights");
  gen->add_option("--out", gen_out, "output file")->required();

  // shared per-run options
  std::string graph_path, csv_out;
  std::uint64_t capacity = 0, seed = 1;
  std::optional<std::uint32_t> word_bits;
  TraceOut trace_out;
  auto common = [&](CLI::App* cmd, bool needs_graph) {
    if (needs_graph) cmd->add_option("--graph", graph_path, "graph file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--bandwidth-bits", capacity, "B, bits per edge per direction per round")->required();
    cmd->add_option("--word-bits", word_bits, "word size w (at least enough for the largest ID)");
    cmd->add_option("--seed", seed);
    cmd->add_option("--csv", csv_out, "CSV output, '-' for stdout");
    trace_out.add(cmd);
  };

  auto* apsp = app.add_subcommand("apsp", "all-pairs hop distances");
  common(apsp, true);

  auto* mst = app.add_subcommand("mst", "minimum spanning tree");
  common(mst, true);

  std::uint64_t alpha = 16, hops = 12;
  auto* mssp = app.add_subcommand("mssp", "bounded-hop multi-source distances");
  common(mssp, true);
  mssp->add_option("--sources", alpha, "skeleton size alpha");
  mssp->add_option("--hops", hops, "hop budget h");

  std::uint64_t pointers = 256, k = 8;
  auto* distk = app.add_subcommand("distk", "distance-k on a pointer-chasing reduction");
  common(distk, false);
  distk->add_option("--pointers", pointers, "pointers per side p");
  distk->add_option("--k", k, "chain length");

  SweepParams sp;
  std::string sw_problem = "apsp", sw_kind = "star", sw_caps, sw_seeds = "1,2,3", sw_out;
  auto* sw = app.add_subcommand("sweep", "bandwidth sweep with exponent fit and class label");
  sw->add_option("--problem", sw_problem, "apsp, mst, mssp, distk")->required();
  sw->add_option("--graph-kind", sw_kind);
  sw->add_option("--n", sp.n);
  sw->add_option("--p", sp.edge_probability, "edge probability (erdos-renyi)");
  sw->add_option("--bandwidth-bits", sw_caps, "comma-separated B values")->required();
  sw->add_option("--word-bits", sp.word_bits);
  sw->add_option("--seeds", sw_seeds, "comma-separated seeds");
  sw->add_option("--sources", sp.alpha, "mssp skeleton size");
  sw->add_option("--hops", sp.hops, "mssp hop budget");
  sw->add_option("--pointers", sp.pointers, "distk pointers per side");
  sw->add_option("--k", sp.k, "distk chain length");
  sw->add_option("--out", sw_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      GraphSpec spec;
      switch (parse_graph_kind(gen_kind)) {
        case GraphKind::erdos_renyi: spec = GraphSpec::erdos_renyi(gen_n, gen_p); break;
        case GraphKind::path: spec = GraphSpec::path(gen_n); break;
        case GraphKind::star: spec = GraphSpec::star(gen_n); break;
        case GraphKind::grid: spec = GraphSpec::grid(gen_rows, gen_cols); break;
        case GraphKind::tree_plus_chords: spec = GraphSpec::tree_plus_chords(gen_n, gen_chords); break;
      }
      save_graph(gen_out, generate(spec, gen_seed, gen_weighted));
      return 0;
    }

    if (apsp->parsed() || mst->parsed() || mssp->parsed()) {
      const Graph g = load_graph(graph_path);
      const auto d = diameter(g);
      if (apsp->parsed()) {
        const auto cfg = make_config(g, capacity, word_bits);
        auto res = run_apsp(g, cfg, seed);
        const bool ok = res.table == apsp_oracle(g);
        write_table(csv_out, kApspColumns,
                    detail::cells(g.size(), d, capacity, cfg.words_per_round(), res.trace.rounds_used, ok));
        trace_out.write(res.trace);
        return ok ? 0 : 2;
      }
      if (mst->parsed()) {
        const auto cfg = make_config(g, capacity, word_bits);
        auto res = run_mst(g, cfg, seed);
        auto truth = mst_oracle(g);
        std::sort(truth.begin(), truth.end());
        const bool ok = res.edges == truth;
        write_table(csv_out, kMstColumns,
                    detail::cells(g.size(), d, capacity, cfg.words_per_round(), res.k, res.fragments,
                                  res.rounds_fragment, res.rounds_pipeline, res.rounds_total, ok));
        trace_out.write(res.trace);
        return ok ? 0 : 2;
      }
      const auto cfg = make_config(g, capacity, word_bits, CongestionMode::queue);
      auto sources = sample_skeleton(g, g.ids().front(), alpha, seed);
      auto res = bounded_hop_mssp(g, sources, hops, cfg, seed);
      const bool ok = res.dist == hop_limited_distances(g, sources, hops);
      write_table(csv_out, kMsspColumns,
                  detail::cells(g.size(), alpha, hops, capacity, cfg.words_per_round(), res.delta,
                                res.trace.rounds_used, res.max_edge_words, res.overflow_words, ok));
      trace_out.write(res.trace);
      return ok ? 0 : 2;
    }

    if (distk->parsed()) {
      auto inst = build_reduction(PointerInstance::random(pointers, seed));
      const auto cfg = make_config(inst.graph, capacity, word_bits);
      auto res = run_distance_k(inst.graph, inst.overlay, inst.start(), k, cfg, 3, seed);
      const bool ok = res.answer == pointer_follow(inst.pointers, k);
      write_table(csv_out, kDistkColumns,
                  detail::cells(pointers, inst.graph.size(), k, capacity, cfg.words_per_round(),
                                res.trace.rounds_used, bridge_bits(inst, res.trace), ok));
      trace_out.write(res.trace);
      return ok ? 0 : 2;
    }

    sp.problem = parse_problem(sw_problem);
    sp.kind = parse_graph_kind(sw_kind);
    sp.capacities = parse_list(sw_caps);
    sp.seeds = parse_list(sw_seeds);
    auto rep = sweep(sp);
    write_sweep(rep, sw_out);
    std::cout << to_string(rep.problem) << " on " << rep.graph << ": beta=" << rep.beta << " class=" << to_string(rep.label)
              << '\n';
    return 0;
  } catch (const SweepError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
