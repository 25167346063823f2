#pragma once

// Closed-form all-Z bound for a connected pair (a, b) whose neighbourhood
// carries Pauli noise.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dense.hpp"
#include "entanglement.hpp"
#include "gd.hpp"
#include "graph.hpp"
#include "noise.hpp"
#include "pauli.hpp"

namespace lebound {

/// Sizes of the flip-prone (type-1) neighbour classes, with the number of
/// outcome-1 results in each class mod 2.
struct NeighborhoodCounts {
  int n_a = 0;
  int n_b = 0;
  int n_ab = 0;
  int par_a = 0;
  int par_b = 0;
  int par_ab = 0;

  static NeighborhoodCounts symmetric(int n) { return {n, n, n}; }
  friend bool operator==(const NeighborhoodCounts&, const NeighborhoodCounts&) = default;
};

/// Correction probabilities over (I, Z_b, Z_a, Z_a Z_b).
using MixingProbabilities = std::array<double, 4>;

/// Probability that a class of n flip-prone qubits ends with odd (-) or even
/// (+) outcome parity.
inline double class_parity_probability(int n, int parity, double s, int sign) {
  const double t = std::pow(1.0 - 2.0 * s, n) * (parity % 2 ? -1.0 : 1.0);
  return 0.5 * (1.0 + sign * t);
}

inline MixingProbabilities mixing_probabilities(const NeighborhoodCounts& c, double s) {
  if (!(s >= 0.0 && s <= 0.5)) throw std::invalid_argument("flip probability must lie in [0, 1/2]");
  if (c.n_a < 0 || c.n_b < 0 || c.n_ab < 0) throw std::invalid_argument("class sizes must be nonnegative");
  const double am = class_parity_probability(c.n_a, c.par_a, s, -1), ap = class_parity_probability(c.n_a, c.par_a, s, 1);
  const double bm = class_parity_probability(c.n_b, c.par_b, s, -1), bp = class_parity_probability(c.n_b, c.par_b, s, 1);
  const double cm = class_parity_probability(c.n_ab, c.par_ab, s, -1),
               cp = class_parity_probability(c.n_ab, c.par_ab, s, 1);
  return {am * cm * bm + ap * cp * bp, am * cm * bp + ap * cp * bm, ap * cm * bm + am * cp * bp,
          am * cp * bm + ap * cm * bp};
}

/// Pattern index (Z_b = 1, Z_a = 2) that Pauli p on a (on_a) or b becomes on
/// the two-qubit graph state of the edge (a, b).
inline int pair_pattern(Pauli1 p, bool on_a) {
  switch (p) {
    case Pauli1::I: return 0;
    case Pauli1::X: return on_a ? 1 : 2;
    case Pauli1::Y: return 3;
    default: return on_a ? 2 : 1;
  }
}

/// Pattern weights of the pair after Pauli channels on a and b.
inline std::array<double, 4> pair_pattern_weights(const MixingProbabilities& qbar, const PauliProbs& on_a,
                                                  const PauliProbs& on_b) {
  std::array<double, 4> out{};
  for (int beta = 0; beta < 4; ++beta)
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        const int idx = beta ^ pair_pattern(static_cast<Pauli1>(x), true) ^ pair_pattern(static_cast<Pauli1>(y), false);
        out[idx] += qbar[beta] * on_a[x] * on_b[y];
      }
  return out;
}

/// Two-qubit post-measurement state: the edge graph state mixed over Z
/// corrections with weights qbar, followed by the channels on a and b.
inline DensityMatrix assemble_post_state(const MixingProbabilities& qbar, const Channel& ch_a, const Channel& ch_b) {
  if (!ch_a.is_pauli() || !ch_b.is_pauli()) throw std::invalid_argument("pair channels must be Pauli channels");
  const Graph edge = Graph::from_edges(2, {{0, 1}});
  const DensityMatrix tilde = gd_region_state(edge, Region({0, 1}, 2), {qbar.begin(), qbar.end()});
  return apply_noise(tilde, {ch_a, ch_b});
}

inline double pauli_flip_probability(const PauliProbs& p) { return p[1] + p[2]; }

/// Log-negativity of the pair for flip probability s in the neighbourhood and
/// Pauli channels on a and b, via pattern weights.
inline double analytic_e0_pair(const NeighborhoodCounts& c, double s, const PauliProbs& on_a, const PauliProbs& on_b) {
  const auto w = pair_pattern_weights(mixing_probabilities(c, s), on_a, on_b);
  return gd_pair_log_negativity({w.begin(), w.end()});
}

/// Eigenvalues of the partial transpose for noiseless a, b and flip-prone
/// neighbours with survival factor qt = 1 - 2s.
inline std::array<double, 4> analytic_eigenvalues(const NeighborhoodCounts& c, double qt) {
  const double x = std::pow(qt, c.n_a + c.n_ab), y = std::pow(qt, c.n_a + c.n_b), z = std::pow(qt, c.n_ab + c.n_b);
  return {0.25 * (1 + x - y + z), 0.25 * (1 + x + y - z), 0.25 * (1 - x + y + z), 0.25 * (1 - x - y - z)};
}

/// General counts, noiseless a and b, neighbourhood channel of strength q
/// with flip probability q/2.
inline double analytic_e0_general(const NeighborhoodCounts& c, double q) {
  return std::log2(negativity_from_eigenvalues(analytic_eigenvalues(c, 1.0 - q)) + 1.0);
}

inline double critical_noise(int n) {
  if (n < 1) throw std::invalid_argument("neighbourhood size must be at least 1");
  return 1.0 - std::pow(3.0, -1.0 / (2.0 * n));
}

/// Symmetric counts (n, n, n), noiseless a and b.
inline double analytic_e0(int n, double q) {
  if (n < 1) throw std::invalid_argument("neighbourhood size must be at least 1");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("noise strength q must lie in [0,1]");
  if (q >= critical_noise(n)) return 0.0;
  return std::max(0.0, std::log2(3.0 * std::pow(1.0 - q, 2 * n) + 1.0) - 1.0);
}

inline constexpr double kZeroCutoff = 1e-6;

/// Smallest q at which the curve drops below the cutoff, by bisection to 1e-8.
/// Returns 1 when the curve stays above the cutoff.
inline double critical_noise_numeric(const std::function<double(double)>& e0, double cutoff = kZeroCutoff,
                                     double resolution = 1e-8) {
  if (e0(0.0) < cutoff) return 0.0;
  if (e0(1.0) >= cutoff) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (e0(mid) < cutoff ? hi : lo) = mid;
  }
  return hi;
}

struct SmallQTerms {
  double o0 = 1.0;
  double o1 = 0.0;
  double o2 = 0.0;
  double sum() const { return o0 + o1 + o2; }
};

inline SmallQTerms small_q_expansion(int n, double q) {
  const double ln2 = std::numbers::ln2;
  return {1.0, -3.0 * n * q / (2.0 * ln2), 3.0 * n * (n - 2.0) * q * q / (8.0 * ln2)};
}

/// Channel on qubit a or b for a two-digit pair label: digit d is the Pauli
/// sigma_d applied with probability q/2 (0 = noiseless).
inline PauliProbs pair_label_channel(int digit, double q) {
  if (digit < 0 || digit > 3) throw std::invalid_argument("pair label digits must be 0..3");
  PauliProbs p{1.0, 0, 0, 0};
  if (digit > 0) {
    p[0] = 1 - q / 2;
    p[digit] = q / 2;
  }
  return p;
}

/// E0 for a channel pair label "ab" at symmetric neighbourhood size n, the
/// neighbourhood carrying a flip probability of q/2.
inline double pair_curve(const std::string& label, const NeighborhoodCounts& c, double q) {
  if (label.size() != 2 || label[0] < '0' || label[0] > '3' || label[1] < '0' || label[1] > '3')
    throw std::invalid_argument("channel pair label must be two digits in 0..3, got '" + label + "'");
  return analytic_e0_pair(c, q / 2, pair_label_channel(label[0] - '0', q), pair_label_channel(label[1] - '0', q));
}

/// Minimal graph realizing the counts: edge (a, b) = (0, 1), then n_a pendants
/// on a, n_b pendants on b and n_ab common neighbours.
inline Graph realizing_graph(const NeighborhoodCounts& c) {
  Graph g(2 + c.n_a + c.n_b + c.n_ab);
  g.add_edge(0, 1);
  int v = 2;
  for (int i = 0; i < c.n_a; ++i) g.add_edge(0, v++);
  for (int i = 0; i < c.n_b; ++i) g.add_edge(1, v++);
  for (int i = 0; i < c.n_ab; ++i) {
    g.add_edge(0, v);
    g.add_edge(1, v++);
  }
  return g;
}

struct LinearParams {
  LinearChain chain;
  Graph graph;           // after the LC sequence along the path
  NoiseLayer channels;   // noise expressed in the new frame
  NeighborhoodClasses classes;
  NeighborhoodCounts counts;
};

/// Connects the ends of a chain by local complementation along the path and
/// classifies their neighbourhood by the frame-transformed noise.
inline LinearParams linear_graph_params(int n_l, const Channel& noise, bool bulk = true) {
  if (!noise.is_pauli()) throw std::invalid_argument("linear chain rules need a Pauli channel");
  LinearParams p{linear_chain(n_l, bulk), {}, {}, {}, {}};
  p.graph = apply_lc_sequence(p.chain.graph, LcSequence{p.chain.interior});
  p.channels = conjugate_layer(uniform_noise(p.chain.graph.size(), noise), chain_frame_layer(p.chain));
  // classify by the channel family so that q = 0 keeps the same split
  const bool named = noise.kind != ChannelKind::CustomPauli;
  const auto probe = conjugate_layer(uniform_noise(p.chain.graph.size(), named ? make_channel(noise.kind, 1.0) : noise),
                                     chain_frame_layer(p.chain));
  Mask type1 = 0;
  for (int v = 0; v < p.graph.size(); ++v)
    if (probe[v].flip_probability() > 0.0) type1 |= bit(v);
  p.classes = neighborhood_partition(p.graph, p.chain.a, p.chain.b, type1);
  p.counts = {p.classes.n_a(), p.classes.n_b(), p.classes.n_ab()};
  return p;
}

}  // namespace lebound
