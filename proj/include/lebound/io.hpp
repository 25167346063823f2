#pragma once

// File formats: graph and noise specifications (JSON, 1-based labels),
// bound reports (JSON) and CSV rows.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "entanglement.hpp"
#include "graph.hpp"
#include "localizable.hpp"
#include "noise.hpp"

namespace lebound {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

/// {"n": 4, "edges": [[1, 2], [2, 3]]}
inline Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) throw FormatError("graph needs 'n' and 'edges'");
  const int n = j.at("n").get<int>();
  if (n < 1 || n > kMaxGraphNodes) throw FormatError("graph size out of range: " + std::to_string(n));
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw FormatError("edge must be a pair of node labels");
    edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
  }
  try {
    return Graph::from_edges(n, edges);
  } catch (const std::exception& ex) {
    throw FormatError(std::string("invalid graph: ") + ex.what());
  }
}

inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (auto [i, j] : g.edges()) edges.push_back({i + 1, j + 1});
  return {{"n", g.size()}, {"edges", edges}};
}

/// One channel entry. `q` may be left out, in which case the sweep value is used.
struct ChannelSpec {
  ChannelKind kind = ChannelKind::PF;
  std::optional<double> q;
  std::optional<PauliProbs> probs;  // CustomPauli

  Channel resolve(double sweep_q) const {
    if (kind == ChannelKind::CustomPauli) {
      if (!probs) throw FormatError("CustomPauli channel needs 'probs'");
      return pauli_channel(*probs);
    }
    if (kind == ChannelKind::CustomKraus) throw FormatError("CustomKraus channels cannot be read from a noise file");
    return make_channel(kind, q.value_or(sweep_q));
  }
};

struct NoiseSpec {
  ChannelSpec base;
  std::map<int, ChannelSpec> overrides;  // 0-based qubit

  NoiseLayer resolve(int n, double sweep_q) const {
    NoiseLayer layer;
    for (int i = 0; i < n; ++i) {
      auto it = overrides.find(i);
      layer.push_back((it != overrides.end() ? it->second : base).resolve(sweep_q));
    }
    return layer;
  }

  /// True when some channel takes its strength from the sweep value.
  bool uses_sweep() const {
    auto sweeps = [](const ChannelSpec& c) { return c.kind != ChannelKind::CustomPauli && !c.q; };
    if (sweeps(base)) return true;
    for (const auto& [_, c] : overrides)
      if (sweeps(c)) return true;
    return false;
  }
};

inline ChannelSpec channel_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw FormatError("channel entry needs 'kind'");
  ChannelSpec c;
  try {
    c.kind = parse_kind(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  if (j.contains("q")) {
    const double q = j.at("q").get<double>();
    if (!(q >= 0.0 && q <= 1.0)) throw FormatError("channel strength q must lie in [0,1]");
    c.q = q;
  }
  if (j.contains("probs")) {
    const auto v = j.at("probs").get<std::vector<double>>();
    if (v.size() != 4) throw FormatError("'probs' needs four entries over (I, X, Y, Z)");
    c.probs = PauliProbs{v[0], v[1], v[2], v[3]};
  }
  if (c.kind == ChannelKind::CustomPauli && !c.probs) throw FormatError("CustomPauli channel needs 'probs'");
  return c;
}

inline json channel_spec_to_json(const ChannelSpec& c) {
  json j{{"kind", kind_name(c.kind)}};
  if (c.q) j["q"] = *c.q;
  if (c.probs) j["probs"] = *c.probs;
  return j;
}

/// {"default": {"kind": "BF"}, "overrides": {"3": {"kind": "PF", "q": 0.1}}}
inline NoiseSpec noise_from_json(const json& j, int n) {
  if (!j.is_object() || !j.contains("default")) throw FormatError("noise specification needs 'default'");
  NoiseSpec s{channel_spec_from_json(j.at("default")), {}};
  if (j.contains("overrides")) {
    for (const auto& [key, val] : j.at("overrides").items()) {
      int label = 0;
      try {
        std::size_t used = 0;
        label = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw FormatError("override key '" + key + "' is not a qubit label");
      }
      if (label < 1 || label > n) throw FormatError("override qubit " + key + " outside 1.." + std::to_string(n));
      s.overrides[label - 1] = channel_spec_from_json(val);
    }
  }
  return s;
}

inline json noise_to_json(const NoiseSpec& s) {
  json j{{"default", channel_spec_to_json(s.base)}};
  if (!s.overrides.empty()) {
    json o = json::object();
    for (const auto& [q, c] : s.overrides) o[std::to_string(q + 1)] = channel_spec_to_json(c);
    j["overrides"] = o;
  }
  return j;
}

/// Region from 1-based labels such as "1,3".
inline Region parse_region(const std::string& text, int n) {
  std::vector<int> members;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      members.push_back(v - 1);
    } catch (const std::exception&) {
      throw FormatError("region entry '" + tok + "' is not a qubit label");
    }
  }
  std::sort(members.begin(), members.end());
  try {
    return Region(members, n);
  } catch (const std::exception& e) {
    throw FormatError(std::string("invalid region: ") + e.what());
  }
}

inline std::string format_region(const Region& r) {
  std::string out;
  for (std::size_t t = 0; t < r.size(); ++t) out += (t ? "," : "") + std::to_string(r[t] + 1);
  return out;
}

struct QGrid {
  double start = 0.0;
  double stop = 1.0;
  int steps = 11;

  std::vector<double> values() const {
    if (steps == 1) return {start};
    std::vector<double> out;
    for (int i = 0; i < steps; ++i) out.push_back(start + (stop - start) * i / (steps - 1));
    return out;
  }
};

/// "start:stop:steps" or a single value.
inline QGrid parse_q_grid(const std::string& text) {
  QGrid g;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  try {
    if (parts.size() == 1) {
      g.start = g.stop = std::stod(parts[0]);
      g.steps = 1;
    } else if (parts.size() == 3) {
      g.start = std::stod(parts[0]);
      g.stop = std::stod(parts[1]);
      g.steps = std::stoi(parts[2]);
    } else {
      throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw FormatError("q grid must be 'start:stop:steps' or a single value, got '" + text + "'");
  }
  if (g.steps < 1) throw FormatError("q grid needs at least one step");
  if (!(g.start >= 0.0 && g.start <= 1.0 && g.stop >= 0.0 && g.stop <= 1.0)) throw FormatError("q grid must lie in [0,1]");
  return g;
}

/// "lo:hi" integer range, or a single value.
inline std::pair<int, int> parse_int_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    const int lo = std::stoi(text.substr(0, colon)), hi = std::stoi(text.substr(colon + 1));
    if (lo > hi) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw FormatError("range must be 'lo:hi' with lo <= hi, got '" + text + "'");
  }
}

/// 12 significant digits.
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_num(*v) : std::string{}; }

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

inline json witness_report_json(double omega, const WlbCertificate& cert) {
  return {{"omega", omega}, {"wlb", wlb(omega)}, {"certificate", {{"f", cert.f}, {"h", cert.h}}}};
}

inline json report_to_json(const BoundsReport& r, std::size_t region_size) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j{{"e_full", opt(r.e_full)},
         {"e_pauli", r.e_pauli},
         {"pauli_setting", {{"l", r.pauli_l}, {"axes", r.pauli_setting}}},
         {"e_l", r.e_l},
         {"l_setting", {{"l", r.l}, {"axes", r.l_setting}}},
         {"e_zero", r.e_zero},
         {"e_reduced", r.e_reduced},
         {"e_wlb", opt(r.e_wlb)},
         {"omega", r.omega},
         {"flags",
          {{"full_ge_pauli", r.flags.full_ge_pauli},
           {"pauli_ge_l", r.flags.pauli_ge_l},
           {"pauli_ge_zero", r.flags.pauli_ge_zero},
           {"zero_ge_reduced", r.flags.zero_ge_reduced},
           {"reduced_ge_wlb", r.flags.reduced_ge_wlb}}}};
  if (r.e_full) j["full_angles"] = r.full_angles;
  if (region_size == 2 || region_size == 3)
    j["witness"] = witness_report_json(r.omega, wlb_certificate(r.omega, static_cast<int>(region_size)));
  return j;
}

}  // namespace lebound
