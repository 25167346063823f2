// lebound: bound sweeps, critical-noise tables and self-checks for noisy
// graph states.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lebound/lebound.hpp"

using namespace lebound;

namespace {

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream& stream() { return file ? *file : std::cout; }
};

Output open_output(const std::string& path) {
  Output o;
  if (!path.empty() && path != "-") {
    o.file = std::make_unique<std::ofstream>(path);
    if (!*o.file) throw FormatError("cannot write '" + path + "'");
  }
  return o;
}

std::vector<int> parse_labels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw FormatError("'" + tok + "' is not a qubit label");
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

Preset preset_or_throw(const std::string& name, const std::string& want) {
  Preset p = make_preset(name);
  if (p.command != want) throw std::invalid_argument("preset '" + name + "' belongs to the '" + p.command + "' command");
  return p;
}

struct BoundsArgs {
  std::string preset, config, graph, noise, region, q_grid, lc, part_a, out;
  bool full_le = false, json_out = false, negativity = false;
  std::optional<unsigned long long> seed;
  std::optional<int> restarts;
};

int run_bounds_cmd(const BoundsArgs& a) {
  BoundsConfig cfg;
  bool have_graph = false, have_region = false;
  if (!a.preset.empty()) {
    cfg = preset_or_throw(a.preset, "bounds").bounds;
    have_graph = have_region = true;
  }
  if (!a.config.empty()) {
    const json j = read_json_file(a.config);
    apply_bounds_config(j, cfg);
    have_graph |= j.contains("graph");
    have_region |= j.contains("region");
  }
  if (!a.graph.empty()) {
    cfg.graph = graph_from_json(read_json_file(a.graph));
    have_graph = true;
  }
  if (!have_graph) throw std::invalid_argument("no graph given (use --graph, --config or --preset)");
  if (!a.noise.empty()) cfg.noise = noise_from_json(read_json_file(a.noise), cfg.graph.size());
  if (!a.region.empty()) {
    cfg.region = parse_region(a.region, cfg.graph.size()).members();
    have_region = true;
  }
  if (!have_region) throw std::invalid_argument("no region given (use --region, --config or --preset)");
  if (!a.q_grid.empty()) cfg.grid = parse_q_grid(a.q_grid);
  if (!a.lc.empty()) {
    LcSequence seq;
    for (int v : parse_labels(a.lc)) seq.nodes.push_back(v - 1);
    cfg.lc = seq;
  }
  if (!a.part_a.empty()) cfg.part_a = part_a_positions(cfg.region, parse_labels(a.part_a));
  cfg.full_le |= a.full_le;
  cfg.json_output |= a.json_out;
  if (a.negativity) cfg.measure = MeasureKind::Negativity;
  if (a.seed) cfg.optimizer.seed = *a.seed;
  if (a.restarts) cfg.optimizer.restarts = *a.restarts;

  const auto rows = run_bounds(cfg);
  auto out = open_output(a.out);
  write_bounds(cfg, rows, out.stream());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Localizable entanglement and its lower bounds for noisy graph states"};
  app.require_subcommand(1);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Hierarchy of bounds over a noise sweep");
  bounds->add_option("--preset", ba.preset, "Named configuration")->check(CLI::IsMember(preset_names()));
  bounds->add_option("--config", ba.config, "JSON run configuration");
  bounds->add_option("--graph", ba.graph, "Graph file (JSON)");
  bounds->add_option("--noise", ba.noise, "Noise file (JSON)");
  bounds->add_option("--region", ba.region, "Region labels, e.g. 1,3");
  bounds->add_option("--q-grid", ba.q_grid, "start:stop:steps or a single q");
  bounds->add_option("--lc", ba.lc, "Explicit local-complementation sequence, e.g. 2,3");
  bounds->add_option("--part-a", ba.part_a, "Region labels on one side of the bipartition");
  bounds->add_option("--out", ba.out, "Output file (default stdout)");
  bounds->add_flag("--full-le", ba.full_le, "Also optimize over all local bases (slow)");
  bounds->add_flag("--negativity", ba.negativity, "Use negativity instead of log-negativity");
  bounds->add_flag("--json", ba.json_out, "Emit JSON reports instead of CSV");
  bounds->add_option("--seed", ba.seed, "Optimizer seed");
  bounds->add_option("--restarts", ba.restarts, "Optimizer random restarts");

  std::string qc_preset, n_range = "1:20", pairs = "00", ratios, qc_out;
  auto* qc = app.add_subcommand("qc", "Critical noise strength against neighbourhood size");
  qc->add_option("--preset", qc_preset, "Named configuration")->check(CLI::IsMember(preset_names()));
  qc->add_option("--n-range", n_range, "lo:hi");
  qc->add_option("--pairs", pairs, "Channel pair labels, e.g. 00,01,11");
  qc->add_option("--ratios", ratios, "Class size ratios a,ab,b (default 1,1,1)");
  qc->add_option("--out", qc_out, "Output file (default stdout)");

  std::string curve_counts = "1,1,1", curve_pairs = "00", curve_grid = "0:1:11", curve_out;
  auto* curve = app.add_subcommand("curve", "Closed-form all-Z bound against q for given class sizes");
  curve->add_option("--counts", curve_counts, "n_a,n_ab,n_b");
  curve->add_option("--pairs", curve_pairs, "Channel pair labels");
  curve->add_option("--q-grid", curve_grid, "start:stop:steps");
  curve->add_option("--out", curve_out, "Output file (default stdout)");

  std::string lin_preset, nl_range = "1:8", lin_kind = "BF", lin_grid = "0:1:11", lin_out;
  bool boundary = false, endpoint_noise = false;
  auto* linear = app.add_subcommand("linear", "Ends of a linear chain after connecting it by local complementation");
  linear->add_option("--preset", lin_preset, "Named configuration")->check(CLI::IsMember(preset_names()));
  linear->add_option("--nl-range", nl_range, "Path length range lo:hi");
  linear->add_option("--kind", lin_kind, "Channel kind (BF, BPF, PF, DP)");
  linear->add_option("--q-grid", lin_grid, "start:stop:steps");
  linear->add_flag("--boundary", boundary, "Chain ends are the ends of the graph (no outer neighbours)");
  linear->add_flag("--endpoint-noise", endpoint_noise, "Include the noise on the chain ends");
  linear->add_option("--out", lin_out, "Output file (default stdout)");

  unsigned long long seed = 1;
  int trials = 20;
  auto* verify = app.add_subcommand("verify", "Randomized self-checks");
  verify->add_option("--seed", seed, "Base seed");
  verify->add_option("--trials", trials, "Trials per randomized suite")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bounds) return run_bounds_cmd(ba);

    if (*qc) {
      QcConfig cfg;
      if (!qc_preset.empty()) cfg = preset_or_throw(qc_preset, "qc").qc;
      if (qc->count("--n-range")) std::tie(cfg.n_lo, cfg.n_hi) = parse_int_range(n_range);
      if (qc->count("--pairs")) cfg.pairs = split(pairs);
      if (!ratios.empty()) {
        const auto r = parse_labels(ratios);
        if (r.size() != 3) throw std::invalid_argument("--ratios needs three integers");
        cfg.ratio_a = r[0], cfg.ratio_ab = r[1], cfg.ratio_b = r[2];
      }
      auto out = open_output(qc_out);
      write_qc(run_qc(cfg), out.stream());
      return 0;
    }

    if (*curve) {
      const auto c = parse_labels(curve_counts);
      if (c.size() != 3) throw std::invalid_argument("--counts needs n_a,n_ab,n_b");
      CurveConfig cfg{NeighborhoodCounts{c[0], c[2], c[1]}, split(curve_pairs), parse_q_grid(curve_grid)};
      auto out = open_output(curve_out);
      write_curve(cfg, out.stream());
      return 0;
    }

    if (*linear) {
      LinearConfig cfg;
      if (!lin_preset.empty()) cfg = preset_or_throw(lin_preset, "linear").linear;
      if (linear->count("--nl-range")) std::tie(cfg.nl_lo, cfg.nl_hi) = parse_int_range(nl_range);
      if (linear->count("--kind") || lin_preset.empty()) cfg.kind = parse_kind(lin_kind);
      if (linear->count("--q-grid") || lin_preset.empty()) cfg.grid = parse_q_grid(lin_grid);
      if (boundary) cfg.bulk = false;
      if (endpoint_noise) cfg.endpoint_noise = true;
      auto out = open_output(lin_out);
      write_linear(run_linear(cfg), out.stream());
      return 0;
    }

    if (*verify) {
      if (trials == 0) std::cerr << "warning: --trials 0 runs no randomized cases\n";
      bool ok = true;
      for (const auto& r : run_verify(seed, trials)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases)";
        if (!r.passed) std::cout << ": " << r.failure;
        std::cout << '\n';
        ok &= r.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
