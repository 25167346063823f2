#pragma once

// Sweep drivers behind the command-line front end, and the named presets.

#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "dense.hpp"
#include "gd.hpp"
#include "io.hpp"
#include "localizable.hpp"
#include "noise.hpp"

namespace lebound {

struct BoundsConfig {
  Graph graph{4};
  NoiseSpec noise;
  std::vector<int> region;        // 0-based members
  QGrid grid;
  std::optional<LcSequence> lc;   // explicit connecting sequence (0-based nodes)
  std::vector<int> part_a{0};     // positions inside the region
  bool full_le = false;
  MeasureKind measure = MeasureKind::LogNegativity;
  OptimizerConfig optimizer;
  bool json_output = false;
};

struct BoundsRow {
  double q = 0.0;
  std::optional<double> e_full, e_pauli, e_zero, e_reduced, e_wlb, omega;
  std::optional<long long> l;
  BoundsReport::Flags flags;
  std::optional<BoundsReport> report;
};

namespace detail {

inline std::optional<LcFrame> choose_frame(const BoundsConfig& cfg, const Region& omega) {
  if (cfg.lc) return lc_sequence_frame(cfg.graph, *cfg.lc);
  if (cfg.graph.induces_connected(omega.mask())) return std::nullopt;
  if (omega.size() != 2)
    throw std::invalid_argument("region of size " + std::to_string(omega.size()) +
                                " is not connected; supply an explicit local-complementation sequence");
  auto [g2, seq] = connect_region(cfg.graph, omega);
  return lc_sequence_frame(cfg.graph, seq);
}

}  // namespace detail

/// One hierarchy evaluation per grid point. Dense quantities need the state
/// to fit the density-matrix cap; for larger graphs under Pauli noise the
/// graph-diagonal path still yields the all-Z bound, the reduced-state value
/// and the witness columns.
inline std::vector<BoundsRow> run_bounds(const BoundsConfig& cfg, std::ostream& warn = std::cerr) {
  const Region omega(cfg.region, cfg.graph.size());
  const EntanglementMeasure measure{cfg.measure, cfg.part_a};
  measure.validate(omega.size());
  const auto frame = detail::choose_frame(cfg, omega);
  const Graph& work = frame ? frame->graph : cfg.graph;
  const int n = cfg.graph.size();
  const int m = n - static_cast<int>(omega.size());
  const bool dense_ok = n <= std::min(dense_limits().density_qubits, kHardMaxDensityQubits);

  std::vector<BoundsRow> rows;
  bool warned = false;
  auto warn_once = [&](const std::string& msg) {
    if (!warned) warn << "warning: " << msg << '\n';
    warned = true;
  };
  for (double q : cfg.grid.values()) {
    const NoiseLayer layer = cfg.noise.resolve(n, q);
    BoundsRow row;
    row.q = q;
    if (dense_ok) {
      const DensityMatrix rho = apply_noise(DensityMatrix::from_pure(graph_state(cfg.graph)), layer);
      HierarchyOptions opt;
      opt.full_le = cfg.full_le && m <= kMaxOptimizedQubits;
      opt.optimizer = cfg.optimizer;
      if (cfg.full_le && !opt.full_le)
        warn_once("e_full skipped: " + std::to_string(m) + " measured qubits exceed the optimizer cap");
      BoundsReport rep = hierarchy_report(rho, cfg.graph, omega, frame, measure, opt);
      row.e_full = rep.e_full;
      row.e_pauli = rep.e_pauli;
      row.e_zero = rep.e_zero;
      row.e_reduced = rep.e_reduced;
      row.e_wlb = rep.e_wlb;
      row.omega = rep.omega;
      row.l = rep.l;
      row.flags = rep.flags;
      row.report = std::move(rep);
    } else if (is_pauli_layer(layer) && n <= kMaxGdQubits) {
      warn_once("graph exceeds the density-matrix cap; e_full and e_pauli left empty");
      const NoiseLayer moved = frame ? conjugate_layer(layer, frame->layer) : layer;
      const GDState s = gd_from_pauli_noise(work, moved);
      row.e_zero = mlb_zbasis(s, omega, measure);
      row.e_reduced = row.e_zero;
      row.omega = witness_expectation(s, omega);
      if (omega.size() == 2 || omega.size() == 3)
        row.e_wlb = measure.from_negativity(wlb_certificate(*row.omega, static_cast<int>(omega.size())).bound);
      row.flags.reduced_ge_wlb = !row.e_wlb || *row.e_reduced >= *row.e_wlb - 1e-9;
    } else {
      warn_once("graph exceeds every engine cap for this noise; row left empty");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_bounds(const BoundsConfig& cfg, const std::vector<BoundsRow>& rows, std::ostream& out) {
  if (cfg.json_output) {
    json arr = json::array();
    for (const auto& r : rows) {
      json j = r.report ? report_to_json(*r.report, cfg.region.size()) : json::object();
      j["q"] = r.q;
      if (!r.report) {
        j["e_zero"] = r.e_zero ? json(*r.e_zero) : json(nullptr);
        j["e_reduced"] = r.e_reduced ? json(*r.e_reduced) : json(nullptr);
        j["e_wlb"] = r.e_wlb ? json(*r.e_wlb) : json(nullptr);
        j["omega"] = r.omega ? json(*r.omega) : json(nullptr);
      }
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
    return;
  }
  CsvWriter csv(out);
  csv.row({"q", "e_full", "e_pauli", "e0", "e_reduced", "e_wlb", "omega", "l", "full_ge_pauli", "pauli_ge_zero",
           "zero_ge_reduced", "reduced_ge_wlb"});
  auto flag = [](bool b) { return std::string(b ? "1" : "0"); };
  for (const auto& r : rows)
    csv.row({fmt_num(r.q), fmt_opt(r.e_full), fmt_opt(r.e_pauli), fmt_opt(r.e_zero), fmt_opt(r.e_reduced),
             fmt_opt(r.e_wlb), fmt_opt(r.omega), r.l ? std::to_string(*r.l) : "", flag(r.flags.full_ge_pauli),
             flag(r.flags.pauli_ge_zero), flag(r.flags.zero_ge_reduced), flag(r.flags.reduced_ge_wlb)});
}

struct QcConfig {
  int n_lo = 1;
  int n_hi = 20;
  std::vector<std::string> pairs{"00"};
  int ratio_a = 1, ratio_ab = 1, ratio_b = 1;  // counts are (ratio_a n, ratio_ab n, ratio_b n)
};

struct QcRow {
  int n = 0;
  std::string pair;
  double q_c = 0.0;
  bool closed_form = false;
};

inline NeighborhoodCounts scaled_counts(const QcConfig& cfg, int n) {
  return {cfg.ratio_a * n, cfg.ratio_b * n, cfg.ratio_ab * n};
}

inline std::vector<QcRow> run_qc(const QcConfig& cfg) {
  if (cfg.n_lo < 1) throw std::invalid_argument("neighbourhood size must be at least 1");
  std::vector<QcRow> rows;
  for (int n = cfg.n_lo; n <= cfg.n_hi; ++n)
    for (const auto& pair : cfg.pairs) {
      const auto counts = scaled_counts(cfg, n);
      const bool symmetric = cfg.ratio_a == 1 && cfg.ratio_ab == 1 && cfg.ratio_b == 1;
      if (pair == "00" && symmetric) {
        rows.push_back({n, pair, critical_noise(n), true});
      } else {
        pair_curve(pair, counts, 0.0);  // validates the label
        rows.push_back({n, pair, critical_noise_numeric([&](double q) { return pair_curve(pair, counts, q); }), false});
      }
    }
  return rows;
}

inline void write_qc(const std::vector<QcRow>& rows, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"n", "channel_pair", "q_c", "method"});
  for (const auto& r : rows) csv.row({std::to_string(r.n), r.pair, fmt_num(r.q_c), r.closed_form ? "closed" : "numeric"});
}

struct CurveConfig {
  NeighborhoodCounts counts = NeighborhoodCounts::symmetric(1);
  std::vector<std::string> pairs{"00"};
  QGrid grid;
};

inline void write_curve(const CurveConfig& cfg, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"channel_pair", "n_a", "n_ab", "n_b", "q", "e0"});
  for (const auto& pair : cfg.pairs)
    for (double q : cfg.grid.values())
      csv.row({pair, std::to_string(cfg.counts.n_a), std::to_string(cfg.counts.n_ab), std::to_string(cfg.counts.n_b),
               fmt_num(q), fmt_num(pair_curve(pair, cfg.counts, q))});
}

struct LinearConfig {
  int nl_lo = 1;
  int nl_hi = 8;
  ChannelKind kind = ChannelKind::BF;
  QGrid grid;
  bool bulk = true;
  bool endpoint_noise = false;  // include the transformed channels on a and b
};

struct LinearRow {
  int n_l = 0;
  NeighborhoodCounts counts;
  double q = 0.0;
  double e0 = 0.0;
};

/// All-Z bound of the chain ends after the connecting LC sequence. By default
/// only the neighbourhood noise enters; `endpoint_noise` adds the channels on
/// the ends themselves.
inline double linear_e0(const LinearParams& p, bool endpoint_noise) {
  double s = 0.0;
  for_each_bit(p.classes.all() & p.classes.type1, [&](int v) { s = std::max(s, p.channels[v].flip_probability()); });
  const PauliProbs clean{1, 0, 0, 0};
  const auto& pa = endpoint_noise ? *p.channels[p.chain.a].probs : clean;
  const auto& pb = endpoint_noise ? *p.channels[p.chain.b].probs : clean;
  return analytic_e0_pair(p.counts, s, pa, pb);
}

inline std::vector<LinearRow> run_linear(const LinearConfig& cfg) {
  if (cfg.nl_lo < 1) throw std::invalid_argument("chain needs at least one path qubit");
  std::vector<LinearRow> rows;
  for (int nl = cfg.nl_lo; nl <= cfg.nl_hi; ++nl)
    for (double q : cfg.grid.values()) {
      const auto p = linear_graph_params(nl, make_channel(cfg.kind, q), cfg.bulk);
      rows.push_back({nl, p.counts, q, linear_e0(p, cfg.endpoint_noise)});
    }
  return rows;
}

inline void write_linear(const std::vector<LinearRow>& rows, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"n_L", "n_a", "n_ab", "n_b", "q", "e0"});
  for (const auto& r : rows)
    csv.row({std::to_string(r.n_l), std::to_string(r.counts.n_a), std::to_string(r.counts.n_ab),
             std::to_string(r.counts.n_b), fmt_num(r.q), fmt_num(r.e0)});
}

// ---------------------------------------------------------------------------
// Presets

struct Preset {
  std::string name;
  std::string command;  // bounds | qc | linear
  BoundsConfig bounds;
  QcConfig qc;
  LinearConfig linear;
};

inline BoundsConfig chain4_bounds(ChannelKind kind, std::vector<int> region) {
  BoundsConfig c;
  c.graph = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  c.noise.base = ChannelSpec{kind, std::nullopt, std::nullopt};
  c.region = std::move(region);
  c.grid = QGrid{0.0, 1.0, 21};
  return c;
}

inline std::vector<std::string> preset_names() { return {"fig3a", "fig3b", "fig3c", "fig4c", "fig6"}; }

inline Preset make_preset(const std::string& name) {
  Preset p{name, "bounds", {}, {}, {}};
  if (name == "fig3a") {
    p.bounds = chain4_bounds(ChannelKind::BF, {0, 2});
  } else if (name == "fig3b") {
    p.bounds = chain4_bounds(ChannelKind::BF, {0, 1, 2});
  } else if (name == "fig3c") {
    p.bounds = chain4_bounds(ChannelKind::AD, {0, 2});
  } else if (name == "fig4c") {
    p.command = "qc";
    p.qc = QcConfig{1, 20, {"00", "01", "11", "13"}};
  } else if (name == "fig6") {
    p.command = "linear";
    p.linear = LinearConfig{5, 6, ChannelKind::PF, QGrid{0.0, 1.0, 11}, true, false};
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return p;
}

/// Positions inside the region of the given 1-based qubit labels.
inline std::vector<int> part_a_positions(const std::vector<int>& region, const std::vector<int>& labels) {
  std::vector<int> out;
  for (int label : labels) {
    auto it = std::find(region.begin(), region.end(), label - 1);
    if (it == region.end()) throw FormatError("bipartition qubit " + std::to_string(label) + " is not in the region");
    out.push_back(static_cast<int>(it - region.begin()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Applies keys of a JSON run configuration onto a bounds config.
inline void apply_bounds_config(const json& j, BoundsConfig& c) {
  if (j.contains("graph")) {
    const auto& g = j.at("graph");
    c.graph = graph_from_json(g.is_string() ? read_json_file(g.get<std::string>()) : g);
  }
  if (j.contains("noise")) {
    const auto& nz = j.at("noise");
    c.noise = noise_from_json(nz.is_string() ? read_json_file(nz.get<std::string>()) : nz, c.graph.size());
  }
  if (j.contains("region")) {
    const auto& r = j.at("region");
    c.region = parse_region(r.is_string() ? r.get<std::string>() : [&] {
      std::string s;
      for (const auto& v : r) s += (s.empty() ? "" : ",") + std::to_string(v.get<int>());
      return s;
    }(), c.graph.size()).members();
  }
  if (j.contains("q_grid")) c.grid = parse_q_grid(j.at("q_grid").get<std::string>());
  if (j.contains("lc")) {
    LcSequence seq;
    for (const auto& v : j.at("lc")) seq.nodes.push_back(v.get<int>() - 1);
    c.lc = seq;
  }
  if (j.contains("part_a")) c.part_a = part_a_positions(c.region, j.at("part_a").get<std::vector<int>>());
  if (j.contains("full_le")) c.full_le = j.at("full_le").get<bool>();
  if (j.contains("measure")) {
    const auto m = j.at("measure").get<std::string>();
    if (m != "log_negativity" && m != "negativity") throw FormatError("measure must be 'log_negativity' or 'negativity'");
    c.measure = m == "negativity" ? MeasureKind::Negativity : MeasureKind::LogNegativity;
  }
  if (j.contains("seed")) c.optimizer.seed = j.at("seed").get<unsigned long long>();
  if (j.contains("restarts")) c.optimizer.restarts = j.at("restarts").get<int>();
  if (j.contains("tolerance")) c.optimizer.tolerance = j.at("tolerance").get<double>();
  if (j.contains("max_iterations")) c.optimizer.max_iterations = j.at("max_iterations").get<int>();
}

}  // namespace lebound
