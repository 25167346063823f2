#pragma once

// Exact state-vector and density-matrix engine.
//
// Index convention: qubit 0 is the most significant bit of a computational
// basis index, so for n qubits qubit q lives at bit (n - 1 - q).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "pauli.hpp"

namespace lebound {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr int kHardMaxDensityQubits = 13;
inline constexpr int kHardMaxPureQubits = 24;

/// Size caps for the dense engine. Adjustable up to the hard limits above.
struct DenseLimits {
  int density_qubits = 12;
  int pure_qubits = 20;
};

inline DenseLimits& dense_limits() {
  static DenseLimits limits;
  return limits;
}

inline void check_density_size(int n) {
  const int cap = std::min(dense_limits().density_qubits, kHardMaxDensityQubits);
  if (n < 1 || n > cap)
    throw std::length_error("density matrix on " + std::to_string(n) + " qubits exceeds cap of " +
                            std::to_string(cap));
}

inline void check_pure_size(int n) {
  const int cap = std::min(dense_limits().pure_qubits, kHardMaxPureQubits);
  if (n < 1 || n > cap)
    throw std::length_error("state vector on " + std::to_string(n) + " qubits exceeds cap of " +
                            std::to_string(cap));
}

inline std::size_t dim_of(int n) { return std::size_t{1} << n; }

/// Map a qubit-indexed mask (bit q = qubit q) to a basis-index mask.
inline Mask to_index_mask(Mask qubits, int n) {
  Mask out = 0;
  for_each_bit(qubits, [&](int q) { out |= bit(n - 1 - q); });
  return out;
}

struct PureState {
  int n = 0;
  CVec amp;

  double norm() const { return amp.norm(); }
};

struct DensityMatrix {
  int n = 0;
  CMat m;

  static DensityMatrix from_pure(const PureState& s) {
    check_density_size(s.n);
    return {s.n, s.amp * s.amp.adjoint()};
  }

  static DensityMatrix maximally_mixed(int n) {
    check_density_size(n);
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    return {n, CMat::Identity(d, d) / static_cast<double>(d)};
  }

  cplx trace() const { return m.trace(); }
};

/// Eigenvalues of (M + M^dag)/2 in ascending order; |lambda| < 1e-12 is
/// reported as exactly zero.
inline Eigen::VectorXd hermitian_eigenvalues(const CMat& m) {
  CMat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (auto& v : ev)
    if (std::abs(v) < 1e-12) v = 0.0;
  return ev;
}

inline bool is_valid_density(const DensityMatrix& r, double tol = 1e-10) {
  if ((r.m - r.m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(r.m.trace() - cplx(1.0)) > tol) return false;
  return hermitian_eigenvalues(r.m).minCoeff() >= -tol;
}

inline double fidelity(const PureState& a, const PureState& b) {
  if (a.n != b.n) throw std::invalid_argument("state size mismatch");
  return std::norm(a.amp.dot(b.amp));
}

/// Sum over basis indices of the number of graph edges inside the index.
inline PureState graph_state(const Graph& g) {
  const int n = g.size();
  check_pure_size(n);
  const std::size_t d = dim_of(n);
  PureState s{n, CVec(static_cast<Eigen::Index>(d))};
  std::vector<Mask> adj_idx(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) adj_idx[q] = to_index_mask(g.neighbors(q), n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t b = 0; b < d; ++b) {
    int twice_edges = 0;
    for (int q = 0; q < n; ++q)
      if ((b >> (n - 1 - q)) & 1u) twice_edges += popcount(adj_idx[q] & b);
    s.amp[static_cast<Eigen::Index>(b)] = ((twice_edges / 2) % 2) ? -amp : amp;
  }
  return s;
}

inline PureState apply_pauli(const PureState& s, const PauliString& p) {
  if (p.size() != s.n) throw std::invalid_argument("pauli size does not match state");
  const Mask dx = to_index_mask(p.xmask(), s.n), dz = to_index_mask(p.zmask(), s.n);
  const cplx c = i_pow(p.phase() + popcount(p.xmask() & p.zmask()));
  PureState out{s.n, CVec(s.amp.size())};
  for (Eigen::Index b = 0; b < s.amp.size(); ++b) {
    const double sg = popcount(dz & static_cast<Mask>(b)) % 2 ? -1.0 : 1.0;
    out.amp[static_cast<Eigen::Index>(static_cast<Mask>(b) ^ dx)] = c * sg * s.amp[b];
  }
  return out;
}

/// |G^nu> = Z_nu |G>.
inline PureState graph_basis_state(const Graph& g, Mask nu) {
  return apply_pauli(graph_state(g), z_pattern(g.size(), nu));
}

/// Tr(rho P).
inline cplx expectation(const DensityMatrix& r, const PauliString& p) {
  if (p.size() != r.n) throw std::invalid_argument("pauli size does not match state");
  const Mask dx = to_index_mask(p.xmask(), r.n), dz = to_index_mask(p.zmask(), r.n);
  const cplx c = i_pow(p.phase() + popcount(p.xmask() & p.zmask()));
  cplx acc = 0;
  for (Eigen::Index b = 0; b < r.m.rows(); ++b) {
    const double sg = popcount(dz & static_cast<Mask>(b)) % 2 ? -1.0 : 1.0;
    acc += sg * r.m(b, static_cast<Eigen::Index>(static_cast<Mask>(b) ^ dx));
  }
  return c * acc;
}

inline cplx expectation(const PureState& s, const PauliString& p) { return s.amp.dot(apply_pauli(s, p).amp); }

inline DensityMatrix apply_pauli(const DensityMatrix& r, const PauliString& p) {
  if (p.size() != r.n) throw std::invalid_argument("pauli size does not match state");
  const Mask dx = to_index_mask(p.xmask(), r.n), dz = to_index_mask(p.zmask(), r.n);
  const auto d = r.m.rows();
  DensityMatrix out{r.n, CMat(d, d)};
  // phases of P and P^dag cancel up to the Z signs on either side
  for (Eigen::Index i = 0; i < d; ++i) {
    const double si = popcount(dz & static_cast<Mask>(i)) % 2 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double sj = popcount(dz & static_cast<Mask>(j)) % 2 ? -1.0 : 1.0;
      out.m(static_cast<Eigen::Index>(static_cast<Mask>(i) ^ dx), static_cast<Eigen::Index>(static_cast<Mask>(j) ^ dx)) =
          si * sj * r.m(i, j);
    }
  }
  return out;
}

namespace detail {

/// rows <- U acting on qubit q
inline void apply_1q_rows(CMat& m, int n, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
  const Eigen::Index d = m.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i & stride) continue;
    const Eigen::Index j = i | stride;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const cplx a = m(i, c), b = m(j, c);
      m(i, c) = u(0, 0) * a + u(0, 1) * b;
      m(j, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

/// columns <- columns * U^dag on qubit q
inline void apply_1q_cols_adj(CMat& m, int n, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
  const Eigen::Index d = m.cols();
  const Eigen::Matrix2cd ud = u.adjoint();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i & stride) continue;
    const Eigen::Index j = i | stride;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const cplx a = m(r, i), b = m(r, j);
      m(r, i) = a * ud(0, 0) + b * ud(1, 0);
      m(r, j) = a * ud(0, 1) + b * ud(1, 1);
    }
  }
}

inline void apply_1q_vec(CVec& v, int n, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i & stride) continue;
    const Eigen::Index j = i | stride;
    const cplx a = v[i], b = v[j];
    v[i] = u(0, 0) * a + u(0, 1) * b;
    v[j] = u(1, 0) * a + u(1, 1) * b;
  }
}

}  // namespace detail

inline PureState apply_single_qubit(PureState s, int q, const Eigen::Matrix2cd& u) {
  if (q < 0 || q >= s.n) throw std::out_of_range("qubit index out of range");
  detail::apply_1q_vec(s.amp, s.n, q, u);
  return s;
}

/// U rho U^dag with U acting on qubit q.
inline DensityMatrix apply_single_qubit(DensityMatrix r, int q, const Eigen::Matrix2cd& u) {
  if (q < 0 || q >= r.n) throw std::out_of_range("qubit index out of range");
  detail::apply_1q_rows(r.m, r.n, q, u);
  detail::apply_1q_cols_adj(r.m, r.n, q, u);
  return r;
}

inline PureState apply_clifford_layer(PureState s, const CliffordLayer& layer) {
  if (static_cast<int>(layer.size()) != s.n) throw std::invalid_argument("clifford layer size mismatch");
  for (int q = 0; q < s.n; ++q)
    if (!layer[q].is_identity()) detail::apply_1q_vec(s.amp, s.n, q, layer[q].unitary());
  return s;
}

inline DensityMatrix apply_clifford_layer(DensityMatrix r, const CliffordLayer& layer) {
  if (static_cast<int>(layer.size()) != r.n) throw std::invalid_argument("clifford layer size mismatch");
  for (int q = 0; q < r.n; ++q)
    if (!layer[q].is_identity()) r = apply_single_qubit(std::move(r), q, layer[q].unitary());
  return r;
}

/// Product of controlled-phase gates on the links between a region and its
/// complement. Diagonal and self-inverse.
class Disentangler {
 public:
  Disentangler(const Graph& g, const Region& omega) : n_(g.size()) {
    require_region_in(g, omega);
    edges_ = adjacency_blocks(g, omega).boundary_edges;
  }

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool is_identity() const { return edges_.empty(); }

  /// Diagonal sign of basis index b.
  double sign(Mask b) const {
    int c = 0;
    for (auto [i, j] : edges_) c += ((b >> (n_ - 1 - i)) & (b >> (n_ - 1 - j)) & 1u);
    return c % 2 ? -1.0 : 1.0;
  }

  PureState apply(PureState s) const {
    if (s.n != n_) throw std::invalid_argument("disentangler size mismatch");
    for (Eigen::Index b = 0; b < s.amp.size(); ++b) s.amp[b] *= sign(static_cast<Mask>(b));
    return s;
  }

  DensityMatrix apply(DensityMatrix r) const {
    if (r.n != n_) throw std::invalid_argument("disentangler size mismatch");
    std::vector<double> sg(static_cast<std::size_t>(r.m.rows()));
    for (std::size_t b = 0; b < sg.size(); ++b) sg[b] = sign(b);
    for (Eigen::Index i = 0; i < r.m.rows(); ++i)
      for (Eigen::Index j = 0; j < r.m.cols(); ++j) r.m(i, j) *= sg[i] * sg[j];
    return r;
  }

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
};

namespace detail {

/// Basis-index offsets of every assignment to `qubits`, first qubit as the
/// most significant bit of the assignment counter.
inline std::vector<Mask> scatter_table(const std::vector<int>& qubits, int n) {
  const std::size_t k = qubits.size();
  std::vector<Mask> table(std::size_t{1} << k, 0);
  for (std::size_t v = 0; v < table.size(); ++v)
    for (std::size_t t = 0; t < k; ++t)
      if ((v >> (k - 1 - t)) & 1u) table[v] |= bit(n - 1 - qubits[t]);
  return table;
}

}  // namespace detail

/// Reduced state on `keep`, qubits ordered as the region's sorted members.
inline DensityMatrix partial_trace(const DensityMatrix& r, const Region& keep) {
  if (keep.graph_size() != r.n) throw std::invalid_argument("region does not match state size");
  const auto kt = detail::scatter_table(keep.members(), r.n);
  const auto tt = detail::scatter_table(keep.complement(), r.n);
  const auto dk = static_cast<Eigen::Index>(kt.size());
  DensityMatrix out{static_cast<int>(keep.size()), CMat::Zero(dk, dk)};
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx acc = 0;
      for (Mask t : tt) acc += r.m(static_cast<Eigen::Index>(kt[i] | t), static_cast<Eigen::Index>(kt[j] | t));
      out.m(i, j) = acc;
    }
  return out;
}

/// rho_Omega = Tr_{complement}(U_gamma rho U_gamma).
inline DensityMatrix reduced_region_state(const DensityMatrix& r, const Graph& g, const Region& omega) {
  if (g.size() != r.n) throw std::invalid_argument("graph does not match state size");
  return partial_trace(Disentangler(g, omega).apply(r), omega);
}

/// Partial transpose on the qubits of `part_a`, in the computational basis.
inline CMat partial_transpose(const CMat& m, int n, Mask part_a) {
  const Mask a = to_index_mask(part_a, n);
  const auto d = m.rows();
  CMat out(d, m.cols());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const Mask ui = static_cast<Mask>(i), uj = static_cast<Mask>(j);
      out(static_cast<Eigen::Index>((ui & ~a) | (uj & a)), static_cast<Eigen::Index>((uj & ~a) | (ui & a))) = m(i, j);
    }
  return out;
}

inline CMat partial_transpose(const DensityMatrix& r, const Region& part_a) {
  if (part_a.graph_size() != r.n) throw std::invalid_argument("bipartition does not match state size");
  return partial_transpose(r.m, r.n, part_a.mask());
}

// ---------------------------------------------------------------------------
// Projective measurements

/// Pauli measurement axis in the measurement convention: 0=Z, 1=X, 2=Y.
enum class MeasureAxis : std::uint8_t { Z = 0, X = 1, Y = 2 };

inline Pauli1 to_pauli(MeasureAxis a) {
  switch (a) {
    case MeasureAxis::Z: return Pauli1::Z;
    case MeasureAxis::X: return Pauli1::X;
    default: return Pauli1::Y;
  }
}

inline MeasureAxis to_axis(Pauli1 p) {
  switch (p) {
    case Pauli1::X: return MeasureAxis::X;
    case Pauli1::Y: return MeasureAxis::Y;
    case Pauli1::Z: return MeasureAxis::Z;
    default: throw std::invalid_argument("identity is not a measurement axis");
  }
}

/// Rank-1 basis of one measured qubit:
///   |0> = cos(t/2)|0> + e^{i p} sin(t/2)|1>,  |1> = sin(t/2)|0> - e^{i p} cos(t/2)|1>.
struct QubitBasis {
  double theta = 0.0;
  double phi = 0.0;
  int axis = -1;  // MeasureAxis value when this is a Pauli basis

  static QubitBasis pauli(MeasureAxis a) {
    switch (a) {
      case MeasureAxis::Z: return {0.0, 0.0, 0};
      case MeasureAxis::X: return {std::numbers::pi / 2, 0.0, 1};
      default: return {std::numbers::pi / 2, std::numbers::pi / 2, 2};
    }
  }

  static QubitBasis angles(double theta, double phi) { return {theta, phi, -1}; }

  /// Columns are the two basis vectors.
  Eigen::Matrix2cd vectors() const {
    Eigen::Matrix2cd v;
    const double r = std::sqrt(0.5);
    switch (axis) {
      case 0: v << 1, 0, 0, -1; return v;
      case 1: v << r, r, r, -r; return v;
      case 2: v << r, r, cplx(0, r), cplx(0, -r); return v;
      default: break;
    }
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const cplx e = std::polar(1.0, phi);
    v << c, s, e * s, -e * c;
    return v;
  }
};

/// One basis per measured qubit, listed in increasing qubit order r_1 < r_2 < ...
struct MeasurementSetting {
  std::vector<QubitBasis> bases;

  std::size_t size() const { return bases.size(); }

  /// Pauli setting from the base-3 multi-index l with r_1 the most significant digit.
  static MeasurementSetting pauli(int m, long long l) {
    MeasurementSetting s;
    s.bases.resize(static_cast<std::size_t>(m));
    for (int t = m - 1; t >= 0; --t) {
      s.bases[t] = QubitBasis::pauli(static_cast<MeasureAxis>(l % 3));
      l /= 3;
    }
    if (l != 0) throw std::out_of_range("pauli setting index too large");
    return s;
  }

  static MeasurementSetting all_z(int m) { return pauli(m, 0); }

  static MeasurementSetting from_axes(const std::vector<MeasureAxis>& axes) {
    MeasurementSetting s;
    for (auto a : axes) s.bases.push_back(QubitBasis::pauli(a));
    return s;
  }

  bool is_pauli() const {
    for (const auto& b : bases)
      if (b.axis < 0) return false;
    return true;
  }

  long long pauli_index() const {
    long long l = 0;
    for (const auto& b : bases) {
      if (b.axis < 0) throw std::logic_error("setting is not a pauli setting");
      l = 3 * l + b.axis;
    }
    return l;
  }

  std::string pauli_label() const {
    std::string out;
    for (const auto& b : bases) out += b.axis < 0 ? '?' : "ZXY"[b.axis];
    return out;
  }
};

struct MeasurementOutcome {
  double probability = 0.0;
  DensityMatrix state;  // normalized, on the kept region; empty when !valid
  bool valid = false;   // false for probability <= 1e-12
};

inline constexpr double kZeroProbability = 1e-12;

/// Rotates each measured qubit so that outcome k_r becomes the computational
/// bit, then reads every outcome block off the rotated matrix. The result is
/// indexed by k with k_{r_1} the most significant bit.
inline std::vector<MeasurementOutcome> measure_all_outcomes(const DensityMatrix& r, const Region& keep,
                                                            const MeasurementSetting& setting) {
  if (keep.graph_size() != r.n) throw std::invalid_argument("region does not match state size");
  const std::vector<int> measured = keep.complement();
  if (setting.size() != measured.size())
    throw std::invalid_argument("setting covers " + std::to_string(setting.size()) + " qubits, " +
                                std::to_string(measured.size()) + " are measured");
  CMat rot = r.m;
  for (std::size_t t = 0; t < measured.size(); ++t) {
    const Eigen::Matrix2cd w = setting.bases[t].vectors().adjoint();
    detail::apply_1q_rows(rot, r.n, measured[t], w);
    detail::apply_1q_cols_adj(rot, r.n, measured[t], w);
  }
  const auto kt = detail::scatter_table(keep.members(), r.n);
  const auto mt = detail::scatter_table(measured, r.n);
  const auto dk = static_cast<Eigen::Index>(kt.size());
  std::vector<MeasurementOutcome> out(mt.size());
  for (std::size_t k = 0; k < mt.size(); ++k) {
    CMat block(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i)
      for (Eigen::Index j = 0; j < dk; ++j)
        block(i, j) = rot(static_cast<Eigen::Index>(kt[i] | mt[k]), static_cast<Eigen::Index>(kt[j] | mt[k]));
    const double p = block.trace().real();
    out[k].probability = p;
    if (p > kZeroProbability) {
      out[k].state = DensityMatrix{static_cast<int>(keep.size()), block / p};
      out[k].valid = true;
    }
  }
  return out;
}

/// Probability and normalized post-measurement state on `keep` for outcome k.
inline MeasurementOutcome project_measure(const DensityMatrix& r, const Region& keep, const MeasurementSetting& setting,
                                          Mask outcome) {
  const std::size_t m = keep.complement().size();
  if (m < 64 && outcome >= (Mask{1} << m)) throw std::out_of_range("outcome index out of range");
  return measure_all_outcomes(r, keep, setting)[outcome];
}

}  // namespace lebound
