#pragma once

// Graph-diagonal states: mixtures of Z-patterns applied to a graph state.
// Pattern masks use bit q for qubit q.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dense.hpp"
#include "graph.hpp"
#include "noise.hpp"

namespace lebound {

inline constexpr int kMaxGdQubits = 26;

struct GDState {
  Graph graph;
  std::vector<double> p;  // p[nu] for Z-pattern nu

  static GDState pure(const Graph& g) {
    if (g.size() > kMaxGdQubits)
      throw std::length_error("graph-diagonal state on " + std::to_string(g.size()) + " qubits exceeds cap of " +
                              std::to_string(kMaxGdQubits));
    GDState s{g, std::vector<double>(dim_of(g.size()), 0.0)};
    s.p[0] = 1.0;
    return s;
  }

  int size() const { return graph.size(); }
};

namespace detail {

inline void convolve_branch(std::vector<double>& p, const PauliProbs& q, Mask nx, Mask ny, Mask nz) {
  if (q[0] >= 1.0) return;
  std::vector<double> out(p.size());
  for (std::size_t v = 0; v < p.size(); ++v)
    out[v] = q[0] * p[v] + q[1] * p[v ^ nx] + q[2] * p[v ^ ny] + q[3] * p[v ^ nz];
  p.swap(out);
}

}  // namespace detail

/// Pauli noise on a graph state. X_i acts as Z on the neighbours of i, Y_i as
/// Z on i and its neighbours, Z_i as itself.
inline GDState gd_from_pauli_noise(const Graph& g, const NoiseLayer& layer) {
  if (static_cast<int>(layer.size()) != g.size()) throw std::invalid_argument("noise layer does not match graph size");
  GDState s = GDState::pure(g);
  for (int i = 0; i < g.size(); ++i) {
    if (!layer[i].is_pauli())
      throw std::invalid_argument("qubit " + std::to_string(i) + " carries non-Pauli noise (" + layer[i].describe() +
                                  "); the state is not graph-diagonal");
    const Mask ni = g.neighbors(i);
    detail::convolve_branch(s.p, *layer[i].probs, ni, ni | bit(i), bit(i));
  }
  return s;
}

/// sum_nu p_nu |G^nu><G^nu|
inline DensityMatrix gd_density(const GDState& s) {
  check_density_size(s.size());
  const int n = s.size();
  const PureState g0 = graph_state(s.graph);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  DensityMatrix r{n, CMat::Zero(d, d)};
  for (std::size_t nu = 0; nu < s.p.size(); ++nu) {
    if (s.p[nu] == 0.0) continue;
    const CVec v = apply_pauli(g0, z_pattern(n, nu)).amp;
    r.m += s.p[nu] * (v * v.adjoint());
  }
  return r;
}

/// Marginal over the region's pattern bits; index bit order follows the
/// region's members with the first member as most significant bit.
inline std::vector<double> gd_marginal(const GDState& s, const Region& omega) {
  if (omega.graph_size() != s.size()) throw std::invalid_argument("region does not match graph size");
  const std::size_t k = omega.size();
  std::vector<double> out(std::size_t{1} << k, 0.0);
  for (std::size_t nu = 0; nu < s.p.size(); ++nu) {
    if (s.p[nu] == 0.0) continue;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < k; ++t) idx = (idx << 1) | ((nu >> omega[t]) & 1u);
    out[idx] += s.p[nu];
  }
  return out;
}

/// Marginal of a marginal; `sub` lists positions inside the parent region.
inline std::vector<double> marginalize(const std::vector<double>& p, int k, const std::vector<int>& sub) {
  std::vector<double> out(std::size_t{1} << sub.size(), 0.0);
  for (std::size_t v = 0; v < p.size(); ++v) {
    std::size_t idx = 0;
    for (int t : sub) idx = (idx << 1) | ((v >> (k - 1 - t)) & 1u);
    out[idx] += p[v];
  }
  return out;
}

/// Region state sum p~ Z rho0 Z with rho0 the graph state of the induced subgraph.
inline DensityMatrix gd_region_state(const Graph& g, const Region& omega, const std::vector<double>& marginal) {
  const int k = static_cast<int>(omega.size());
  if (marginal.size() != dim_of(k)) throw std::invalid_argument("marginal size does not match region");
  GDState local{g.induced(omega.members()), std::vector<double>(marginal.size(), 0.0)};
  // marginal index has the first member high; GDState masks use bit t for member t
  for (std::size_t v = 0; v < marginal.size(); ++v) {
    Mask m = 0;
    for (int t = 0; t < k; ++t)
      if ((v >> (k - 1 - t)) & 1u) m |= bit(t);
    local.p[m] = marginal[v];
  }
  return gd_density(local);
}

/// Eigenvalues 1/2 - p~_{3-i} of the partial transpose of a two-qubit
/// graph-diagonal state on a connected pair.
inline std::array<double, 4> gd_pair_ptranspose_eigenvalues(const std::vector<double>& m) {
  if (m.size() != 4) throw std::invalid_argument("closed-form eigenvalues need a two-qubit marginal");
  return {0.5 - m[3], 0.5 - m[2], 0.5 - m[1], 0.5 - m[0]};
}

inline double negativity_from_eigenvalues(const auto& ev) {
  double s = 0.0;
  for (double l : ev)
    if (l < 0) s -= l;
  return 2.0 * s;
}

inline double gd_pair_log_negativity(const std::vector<double>& m) {
  return std::log2(negativity_from_eigenvalues(gd_pair_ptranspose_eigenvalues(m)) + 1.0);
}

}  // namespace lebound
