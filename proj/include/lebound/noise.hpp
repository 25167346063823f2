#pragma once

// Single-qubit noise channels and their Clifford frame changes.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dense.hpp"
#include "graph.hpp"
#include "pauli.hpp"

namespace lebound {

enum class ChannelKind { BF, BPF, PF, DP, AD, CustomPauli, CustomKraus };

inline std::string kind_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::BF: return "BF";
    case ChannelKind::BPF: return "BPF";
    case ChannelKind::PF: return "PF";
    case ChannelKind::DP: return "DP";
    case ChannelKind::AD: return "AD";
    case ChannelKind::CustomPauli: return "CustomPauli";
    default: return "CustomKraus";
  }
}

inline ChannelKind parse_kind(const std::string& s) {
  for (auto k : {ChannelKind::BF, ChannelKind::BPF, ChannelKind::PF, ChannelKind::DP, ChannelKind::AD,
                 ChannelKind::CustomPauli, ChannelKind::CustomKraus})
    if (kind_name(k) == s) return k;
  throw std::invalid_argument("unknown channel kind '" + s + "'");
}

/// Probabilities over (I, X, Y, Z).
using PauliProbs = std::array<double, 4>;

struct Channel {
  ChannelKind kind = ChannelKind::CustomPauli;
  double q = 0.0;
  std::vector<Eigen::Matrix2cd> kraus;
  std::optional<PauliProbs> probs;  // set for Pauli channels only

  bool is_pauli() const { return probs.has_value(); }

  /// Probability that the channel flips a Z-basis outcome.
  double flip_probability() const {
    if (!probs) throw std::logic_error(kind_name(kind) + " channel has no flip probability");
    return (*probs)[1] + (*probs)[2];
  }

  bool is_identity(double tol = 0.0) const {
    if (probs) return (*probs)[0] >= 1.0 - tol;
    return kraus.size() == 1 && (kraus[0] - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol;
  }

  /// max |sum K^dag K - I|
  double completeness_error() const {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    for (const auto& k : kraus) s += k.adjoint() * k;
    return (s - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  }

  std::string describe() const {
    if (kind == ChannelKind::CustomPauli && probs) {
      const auto& p = *probs;
      return "Pauli(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + "," +
             std::to_string(p[3]) + ")";
    }
    if (kind == ChannelKind::CustomKraus) return "CustomKraus";
    return kind_name(kind) + "(" + std::to_string(q) + ")";
  }
};

inline Channel pauli_channel(const PauliProbs& p, ChannelKind kind = ChannelKind::CustomPauli, double q = 0.0) {
  double sum = 0.0;
  for (double v : p) {
    if (v < -1e-15 || v > 1.0 + 1e-15) throw std::invalid_argument("pauli probability out of [0,1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("pauli probabilities do not sum to 1");
  Channel ch{kind, q, {}, p};
  for (int a = 0; a < 4; ++a)
    if (p[a] > 0.0) ch.kraus.push_back(std::sqrt(p[a]) * pauli_matrix(static_cast<Pauli1>(a)));
  if (ch.kraus.empty()) ch.kraus.push_back(Eigen::Matrix2cd::Identity());
  return ch;
}

inline Channel kraus_channel(std::vector<Eigen::Matrix2cd> ks) {
  Channel ch{ChannelKind::CustomKraus, 0.0, std::move(ks), std::nullopt};
  if (ch.kraus.empty() || ch.completeness_error() > 1e-10)
    throw std::invalid_argument("kraus operators are not complete");
  return ch;
}

inline Channel identity_channel() { return pauli_channel({1.0, 0.0, 0.0, 0.0}); }

inline Channel make_channel(ChannelKind kind, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("noise strength q must lie in [0,1]");
  switch (kind) {
    case ChannelKind::BF: return pauli_channel({1 - q / 2, q / 2, 0, 0}, kind, q);
    case ChannelKind::BPF: return pauli_channel({1 - q / 2, 0, q / 2, 0}, kind, q);
    case ChannelKind::PF: return pauli_channel({1 - q / 2, 0, 0, q / 2}, kind, q);
    case ChannelKind::DP: return pauli_channel({1 - 3 * q / 4, q / 4, q / 4, q / 4}, kind, q);
    case ChannelKind::AD: {
      Eigen::Matrix2cd k0, k1;
      k0 << 1, 0, 0, std::sqrt(1 - q);
      k1 << 0, std::sqrt(q), 0, 0;
      return Channel{kind, q, {k0, k1}, std::nullopt};
    }
    default: throw std::invalid_argument(kind_name(kind) + " cannot be built from a single strength");
  }
}

/// Channel whose Kraus operators are C K C^dag. Pauli channels stay Pauli
/// channels with permuted probabilities; named kinds keep their name when the
/// permuted vector is again of that family.
inline Channel conjugate_channel(const Channel& ch, const SingleQubitClifford& c) {
  if (c.is_identity()) return ch;
  if (ch.probs) {
    PauliProbs out{(*ch.probs)[0], 0, 0, 0};
    for (Pauli1 p : {Pauli1::X, Pauli1::Y, Pauli1::Z})
      out[static_cast<int>(c.image(p).pauli)] += (*ch.probs)[static_cast<int>(p)];
    if (ch.kind == ChannelKind::DP) return pauli_channel(out, ChannelKind::DP, ch.q);
    for (auto [k, idx] : {std::pair{ChannelKind::BF, 1}, {ChannelKind::BPF, 2}, {ChannelKind::PF, 3}}) {
      if (ch.kind != ChannelKind::BF && ch.kind != ChannelKind::BPF && ch.kind != ChannelKind::PF) break;
      if (out[idx] == ch.q / 2 && out[0] == 1 - ch.q / 2) return pauli_channel(out, k, ch.q);
    }
    return pauli_channel(out, ChannelKind::CustomPauli, 0.0);
  }
  const Eigen::Matrix2cd u = c.unitary();
  std::vector<Eigen::Matrix2cd> ks;
  for (const auto& k : ch.kraus) ks.push_back(u * k * u.adjoint());
  return kraus_channel(std::move(ks));
}

/// One channel per qubit.
using NoiseLayer = std::vector<Channel>;

inline NoiseLayer uniform_noise(int n, const Channel& ch) { return NoiseLayer(static_cast<std::size_t>(n), ch); }

inline bool is_pauli_layer(const NoiseLayer& layer) {
  for (const auto& c : layer)
    if (!c.is_pauli()) return false;
  return true;
}

inline NoiseLayer conjugate_layer(const NoiseLayer& noise, const CliffordLayer& frame) {
  if (noise.size() != frame.size()) throw std::invalid_argument("noise layer and clifford layer differ in size");
  NoiseLayer out;
  out.reserve(noise.size());
  for (std::size_t q = 0; q < noise.size(); ++q) out.push_back(conjugate_channel(noise[q], frame[q]));
  return out;
}

inline DensityMatrix apply_channel(const DensityMatrix& r, int q, const Channel& ch) {
  if (q < 0 || q >= r.n) throw std::out_of_range("qubit index out of range");
  if (ch.is_identity()) return r;
  DensityMatrix out{r.n, CMat::Zero(r.m.rows(), r.m.cols())};
  for (const auto& k : ch.kraus) {
    CMat t = r.m;
    detail::apply_1q_rows(t, r.n, q, k);
    detail::apply_1q_cols_adj(t, r.n, q, k);
    out.m += t;
  }
  return out;
}

inline DensityMatrix apply_noise(DensityMatrix r, const NoiseLayer& layer) {
  if (static_cast<int>(layer.size()) != r.n) throw std::invalid_argument("noise layer does not match state size");
  for (int q = 0; q < r.n; ++q) r = apply_channel(r, q, layer[q]);
  return r;
}

/// Clifford layer of the linear-chain LC sequence, applied to the endpoints a,
/// b and the n_L path qubits in between. Operator products read right to left.
struct ChainFrame {
  SingleQubitClifford u_a;
  SingleQubitClifford u_b;
  std::vector<SingleQubitClifford> v;  // v[j-1] acts on the j-th path qubit from a
};

inline ChainFrame linear_chain_frame(int n_l) {
  if (n_l < 1) throw std::invalid_argument("chain needs at least one path qubit");
  const auto ux = SingleQubitClifford::ux(), uz = SingleQubitClifford::uz();
  ChainFrame f{uz.pow(n_l), uz, {}};
  for (int j = 1; j <= n_l; ++j) {
    if (j == 1) f.v.push_back(uz.pow(n_l - 1).after(ux));
    else f.v.push_back(uz.pow(n_l - j).after(ux).after(uz));
  }
  return f;
}

/// The chain frame spread over a full graph; qubits off the path get identity.
inline CliffordLayer chain_frame_layer(const LinearChain& chain) {
  const ChainFrame f = linear_chain_frame(chain.n_l);
  CliffordLayer layer(static_cast<std::size_t>(chain.graph.size()));
  layer[chain.a] = f.u_a;
  layer[chain.b] = f.u_b;
  for (int j = 0; j < chain.n_l; ++j) layer[chain.interior[j]] = f.v[j];
  return layer;
}

}  // namespace lebound
