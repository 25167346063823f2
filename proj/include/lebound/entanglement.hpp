#pragma once

// Negativity, local stabilizer witnesses and the witness-based bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dense.hpp"
#include "gd.hpp"
#include "graph.hpp"
#include "pauli.hpp"

namespace lebound {

/// 2 * sum of |negative eigenvalues| of the partial transpose on part_a.
inline double negativity(const DensityMatrix& r, const Region& part_a) {
  if (part_a.size() == 0 || static_cast<int>(part_a.size()) >= r.n)
    throw std::invalid_argument("bipartition needs a nonempty proper subset");
  return negativity_from_eigenvalues(hermitian_eigenvalues(partial_transpose(r, part_a)));
}

inline double log_negativity(const DensityMatrix& r, const Region& part_a) {
  return std::log2(negativity(r, part_a) + 1.0);
}

/// First qubit against the rest.
inline Region default_bipartition(int n) { return Region({0}, n); }

inline double log_negativity(const DensityMatrix& r) { return log_negativity(r, default_bipartition(r.n)); }

struct WitnessTerm {
  double coeff = 0.0;
  PauliString op;
};

struct WitnessObservable {
  Region region;
  std::vector<WitnessTerm> terms;  // identity term first
};

/// W = I/2 - prod_{i in omega} (I + g_i)/2, expanded into stabilizer products.
inline WitnessObservable local_witness(const Graph& g, const Region& omega) {
  require_region_in(g, omega);
  if (!g.induces_connected(omega.mask()))
    throw std::invalid_argument("witness region must induce a connected subgraph; connect it with local complementations first");
  const std::size_t k = omega.size();
  const double w = std::ldexp(1.0, -static_cast<int>(k));
  WitnessObservable out{omega, {{0.5 - w, PauliString::identity(g.size())}}};
  for (std::size_t s = 1; s < (std::size_t{1} << k); ++s) {
    PauliString prod = PauliString::identity(g.size());
    for (std::size_t t = 0; t < k; ++t)
      if ((s >> t) & 1u) prod = prod * generator(g, omega[t]);
    // products of commuting stabilizers are Hermitian; fold the sign into the coefficient
    const double sign = prod.phase() == 2 ? -1.0 : 1.0;
    out.terms.push_back({-w * sign, PauliString(prod.size(), prod.xmask(), prod.zmask(), 0)});
  }
  return out;
}

/// The witness of the region graph itself, acting on the region's qubits.
inline WitnessObservable region_witness(const Graph& g, const Region& omega) {
  const Graph sub = g.induced(omega.members());
  std::vector<int> all(omega.size());
  for (std::size_t t = 0; t < all.size(); ++t) all[t] = static_cast<int>(t);
  return local_witness(sub, Region(all, sub.size()));
}

inline CMat witness_matrix(const WitnessObservable& w) {
  const int n = w.region.graph_size();
  check_density_size(n);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  CMat m = CMat::Zero(d, d);
  for (const auto& t : w.terms) {
    const Mask dx = to_index_mask(t.op.xmask(), n), dz = to_index_mask(t.op.zmask(), n);
    const cplx c = t.coeff * i_pow(t.op.phase() + popcount(t.op.xmask() & t.op.zmask()));
    for (Eigen::Index b = 0; b < d; ++b) {
      const double sg = popcount(dz & static_cast<Mask>(b)) % 2 ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(static_cast<Mask>(b) ^ dx), b) += c * sg;
    }
  }
  return m;
}

/// Tr(rho W) by summing Pauli expectations.
inline double witness_expectation(const DensityMatrix& r, const WitnessObservable& w) {
  if (w.region.graph_size() != r.n) throw std::invalid_argument("witness does not match state size");
  double acc = 0.0;
  for (const auto& t : w.terms) acc += t.coeff * expectation(r, t.op).real();
  return acc;
}

/// Tr(rho W) on a graph-diagonal state: 1/2 - p~_0.
inline double witness_expectation(const GDState& s, const Region& omega) {
  return 0.5 - gd_marginal(s, omega)[0];
}

/// Negativity lower bound implied by a witness value.
inline double wlb(double omega) { return std::max(-2.0 * omega, 0.0); }

inline double wlb_log(double omega) { return std::log2(wlb(omega) + 1.0); }

struct WlbCertificate {
  double f = 0.0;
  double h = 1.0;
  int family = 1;  // 1..4
  std::vector<double> singular_values;
  double bound = 0.0;
};

/// Singular values of D = -f W^{T_A} + h I for a connected region of size 2 or 3.
inline std::vector<double> certificate_singular_values(double f, double h, int region_size) {
  if (region_size == 2) return {std::abs(h), std::abs(h - f)};
  if (region_size == 3) return {std::abs(h), std::abs(h - f), std::abs(h - f / 2)};
  throw std::invalid_argument("witness certificate is defined for regions of size 2 or 3");
}

/// Maximizes -f*omega + h - 1 over the four (f, h) families that saturate
/// ||D||_inf = 1. The objective is linear in f, so each family is checked at
/// its endpoints; candidates that break the norm constraint are dropped.
inline WlbCertificate wlb_certificate(double omega, int region_size) {
  if (omega < -0.5 - 1e-12 || omega > 0.5 + 1e-12) throw std::invalid_argument("witness value outside [-1/2, 1/2]");
  struct Family {
    int id;
    double f_lo, f_hi;
    double (*h)(double);
  };
  static constexpr Family families[] = {
      {1, 0.0, 2.0, [](double) { return 1.0; }},
      {2, -2.0, 0.0, [](double) { return -1.0; }},
      {3, -2.0, 0.0, [](double f) { return 1.0 + f; }},
      {4, 0.0, 2.0, [](double f) { return -1.0 - f; }},
  };
  WlbCertificate best;
  best.singular_values = certificate_singular_values(0.0, 1.0, region_size);
  best.bound = 0.0;
  for (const auto& fam : families)
    for (double f : {fam.f_lo, fam.f_hi}) {
      const double h = fam.h(f);
      auto sv = certificate_singular_values(f, h, region_size);
      if (std::abs(*std::max_element(sv.begin(), sv.end()) - 1.0) > 1e-9) continue;
      const double val = -f * omega + h - 1.0;
      if (val > best.bound + 1e-15) best = {f, h, fam.id, std::move(sv), val};
    }
  return best;
}

}  // namespace lebound
