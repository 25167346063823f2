#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace lebound {

using cplx = std::complex<double>;

/// Single-qubit Pauli labels in the noise convention: 0=I, 1=X, 2=Y, 3=Z.
enum class Pauli1 : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli1 p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli1 pauli_from_bits(bool x, bool z) {
  if (x && z) return Pauli1::Y;
  if (x) return Pauli1::X;
  if (z) return Pauli1::Z;
  return Pauli1::I;
}

inline bool x_bit(Pauli1 p) { return p == Pauli1::X || p == Pauli1::Y; }
inline bool z_bit(Pauli1 p) { return p == Pauli1::Z || p == Pauli1::Y; }

inline cplx i_pow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline Eigen::Matrix2cd pauli_matrix(Pauli1 p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli1::I: m << 1, 0, 0, 1; break;
    case Pauli1::X: m << 0, 1, 1, 0; break;
    case Pauli1::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case Pauli1::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// n-qubit Pauli operator i^phase * (sigma_0 x sigma_1 x ... ), with qubit q
/// carried by bit q of the X and Z masks and Y = (x=1, z=1).
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n, Mask x = 0, Mask z = 0, int phase = 0) : n_(n), x_(x), z_(z), phase_(phase & 3) {
    if (n < 1 || n > kMaxGraphNodes) throw std::invalid_argument("pauli string size must be in 1..64");
    const Mask all = n == 64 ? ~Mask{0} : bit(n) - 1;
    if ((x | z) & ~all) throw std::out_of_range("pauli mask exceeds qubit count");
  }

  static PauliString identity(int n) { return PauliString(n); }

  static PauliString single(int n, int q, Pauli1 p) {
    if (q < 0 || q >= n) throw std::out_of_range("qubit index out of range");
    return PauliString(n, x_bit(p) ? bit(q) : 0, z_bit(p) ? bit(q) : 0);
  }

  /// Parses labels such as "XZI", "-YZ", "+iXX"; character k is qubit k.
  static PauliString from_label(const std::string& label) {
    std::size_t pos = 0;
    int phase = 0;
    if (pos < label.size() && (label[pos] == '+' || label[pos] == '-')) {
      if (label[pos] == '-') phase = 2;
      ++pos;
    }
    if (pos < label.size() && label[pos] == 'i') {
      phase += 1;
      ++pos;
    }
    const int n = static_cast<int>(label.size() - pos);
    Mask x = 0, z = 0;
    for (int q = 0; q < n; ++q) {
      switch (label[pos + q]) {
        case 'I': case '_': break;
        case 'X': x |= bit(q); break;
        case 'Y': x |= bit(q); z |= bit(q); break;
        case 'Z': z |= bit(q); break;
        default: throw std::invalid_argument("bad pauli label: " + label);
      }
    }
    return PauliString(n, x, z, phase);
  }

  int size() const { return n_; }
  Mask xmask() const { return x_; }
  Mask zmask() const { return z_; }
  int phase() const { return phase_; }
  cplx coefficient() const { return i_pow(phase_); }
  Pauli1 at(int q) const { return pauli_from_bits((x_ >> q) & 1u, (z_ >> q) & 1u); }
  Mask support() const { return x_ | z_; }
  bool is_identity() const { return support() == 0; }
  bool is_hermitian() const { return phase_ % 2 == 0; }

  bool commutes_with(const PauliString& o) const {
    return (popcount(x_ & o.z_) + popcount(z_ & o.x_)) % 2 == 0;
  }

  PauliString operator*(const PauliString& o) const {
    if (n_ != o.n_) throw std::invalid_argument("pauli size mismatch");
    const Mask x3 = x_ ^ o.x_, z3 = z_ ^ o.z_;
    // sigma(x,z) = i^{xz} X^x Z^z, and Z^z1 X^x2 = (-1)^{z1.x2} X^x2 Z^z1.
    int e = phase_ + o.phase_ + popcount(x_ & z_) + popcount(o.x_ & o.z_) + 2 * popcount(z_ & o.x_) -
            popcount(x3 & z3);
    return PauliString(n_, x3, z3, ((e % 4) + 4) % 4);
  }

  PauliString operator-() const { return PauliString(n_, x_, z_, phase_ + 2); }

  std::string label() const {
    static const char* prefix[] = {"+", "+i", "-", "-i"};
    std::string s = prefix[phase_];
    for (int q = 0; q < n_; ++q) s += pauli_char(at(q));
    return s;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_ = 0;
  Mask x_ = 0;
  Mask z_ = 0;
  int phase_ = 0;
};

/// Stabilizer generator g_i = X_i prod_{j in N_i} Z_j.
inline PauliString generator(const Graph& g, int i) {
  return PauliString(g.size(), bit(i), g.neighbors(i));
}

/// Z_nu = prod_{j in nu} Z_j.
inline PauliString z_pattern(int n, Mask nu) { return PauliString(n, 0, nu); }

struct SignedPauli {
  Pauli1 pauli = Pauli1::I;
  int sign = 1;
  friend bool operator==(const SignedPauli&, const SignedPauli&) = default;
};

/// Single-qubit Clifford C, stored by its action P -> C P C^dagger on X and Z.
class SingleQubitClifford {
 public:
  SingleQubitClifford() = default;
  SingleQubitClifford(SignedPauli x_image, SignedPauli z_image) : x_(x_image), z_(z_image) {
    if (x_.pauli == Pauli1::I || z_.pauli == Pauli1::I || x_.pauli == z_.pauli)
      throw std::invalid_argument("clifford images of X and Z must be anticommuting Paulis");
  }

  static SingleQubitClifford identity() { return {}; }
  /// u^x = exp(-i pi/4 X)
  static SingleQubitClifford ux() { return {{Pauli1::X, 1}, {Pauli1::Y, -1}}; }
  /// u^z = exp(+i pi/4 Z)
  static SingleQubitClifford uz() { return {{Pauli1::Y, -1}, {Pauli1::Z, 1}}; }
  static SingleQubitClifford hadamard() { return {{Pauli1::Z, 1}, {Pauli1::X, 1}}; }

  SignedPauli x_image() const { return x_; }
  SignedPauli z_image() const { return z_; }

  SignedPauli image(Pauli1 p) const {
    switch (p) {
      case Pauli1::I: return {Pauli1::I, 1};
      case Pauli1::X: return x_;
      case Pauli1::Z: return z_;
      case Pauli1::Y: {
        // Y = i X Z, so C Y C^dag = i (sx Px)(sz Pz).
        PauliString px = PauliString::single(1, 0, x_.pauli), pz = PauliString::single(1, 0, z_.pauli);
        PauliString prod = px * pz;
        int e = 1 + prod.phase() + (x_.sign * z_.sign < 0 ? 2 : 0);
        return {prod.at(0), (e % 4) == 0 ? 1 : -1};
      }
    }
    return {};
  }

  /// Pauli sigma with C sigma C^dag = +-target.
  SignedPauli preimage(Pauli1 target) const {
    for (Pauli1 p : {Pauli1::X, Pauli1::Y, Pauli1::Z}) {
      SignedPauli im = image(p);
      if (im.pauli == target) return {p, im.sign};
    }
    return {Pauli1::I, 1};
  }

  /// (*this) after `inner`: P -> C (inner P inner^dag) C^dag.
  SingleQubitClifford after(const SingleQubitClifford& inner) const {
    auto apply = [&](SignedPauli sp) {
      SignedPauli im = image(sp.pauli);
      return SignedPauli{im.pauli, im.sign * sp.sign};
    };
    return {apply(inner.x_), apply(inner.z_)};
  }

  SingleQubitClifford pow(int k) const {
    SingleQubitClifford out;
    for (int i = 0; i < k; ++i) out = after(out);
    return out;
  }

  SingleQubitClifford inverse() const {
    SignedPauli xp = preimage(Pauli1::X), zp = preimage(Pauli1::Z);
    // C^-1 X C = sigma_x' with C sigma C^dag = s X  =>  C^-1 X C = s sigma.
    return {xp, zp};
  }

  bool is_identity() const { return *this == SingleQubitClifford{}; }

  /// A unitary implementing this Clifford (fixed up to global phase).
  Eigen::Matrix2cd unitary() const;

  static SingleQubitClifford from_unitary(const Eigen::Matrix2cd& u, double tol = 1e-9) {
    auto classify = [&](Pauli1 p) {
      Eigen::Matrix2cd m = u * pauli_matrix(p) * u.adjoint();
      for (Pauli1 c : {Pauli1::X, Pauli1::Y, Pauli1::Z})
        for (int s : {1, -1})
          if ((m - double(s) * pauli_matrix(c)).norm() < tol) return SignedPauli{c, s};
      throw std::invalid_argument("matrix is not a single-qubit Clifford");
    };
    return {classify(Pauli1::X), classify(Pauli1::Z)};
  }

  std::string describe() const {
    auto s = [](SignedPauli p) { return std::string(p.sign < 0 ? "-" : "+") + pauli_char(p.pauli); };
    return "X->" + s(x_) + ",Z->" + s(z_);
  }

  friend bool operator==(const SingleQubitClifford&, const SingleQubitClifford&) = default;

 private:
  SignedPauli x_{Pauli1::X, 1};
  SignedPauli z_{Pauli1::Z, 1};
};

inline Eigen::Matrix2cd ux_matrix() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << r, cplx(0, -r), cplx(0, -r), r;
  return m;
}

inline Eigen::Matrix2cd uz_matrix() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << cplx(r, r), 0, 0, cplx(r, -r);
  return m;
}

struct CliffordElement {
  SingleQubitClifford clifford;
  Eigen::Matrix2cd matrix;
};

/// The 24 single-qubit Cliffords (mod phase), generated from u^x and u^z.
inline const std::vector<CliffordElement>& single_qubit_clifford_group() {
  static const std::vector<CliffordElement> group = [] {
    std::vector<CliffordElement> out{{SingleQubitClifford{}, Eigen::Matrix2cd::Identity()}};
    const std::array<Eigen::Matrix2cd, 2> gens{ux_matrix(), uz_matrix()};
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (const auto& gm : gens) {
        Eigen::Matrix2cd m = gm * out[k].matrix;
        SingleQubitClifford c = SingleQubitClifford::from_unitary(m);
        bool known = false;
        for (const auto& e : out) known = known || e.clifford == c;
        if (!known) out.push_back({c, m});
      }
    }
    return out;
  }();
  return group;
}

inline Eigen::Matrix2cd SingleQubitClifford::unitary() const {
  for (const auto& e : single_qubit_clifford_group())
    if (e.clifford == *this) return e.matrix;
  throw std::logic_error("clifford not found in group table");
}

using CliffordLayer = std::vector<SingleQubitClifford>;

/// U P U^dag for a product Clifford layer U (one entry per qubit).
inline PauliString conjugate(const PauliString& p, const CliffordLayer& layer) {
  if (static_cast<int>(layer.size()) != p.size()) throw std::invalid_argument("clifford layer size mismatch");
  Mask x = 0, z = 0;
  int phase = p.phase();
  for (int q = 0; q < p.size(); ++q) {
    SignedPauli im = layer[q].image(p.at(q));
    if (im.sign < 0) phase += 2;
    if (x_bit(im.pauli)) x |= bit(q);
    if (z_bit(im.pauli)) z |= bit(q);
  }
  return PauliString(p.size(), x, z, phase);
}

inline CliffordLayer inverse(const CliffordLayer& layer) {
  CliffordLayer out;
  out.reserve(layer.size());
  for (const auto& c : layer) out.push_back(c.inverse());
  return out;
}

/// Product layer of the local Cliffords realising a sequence of local
/// complementations: tau_v acts as u^x on v and u^z on each current neighbour.
struct LcFrame {
  Graph graph;  // graph after the sequence
  CliffordLayer layer;
};

inline LcFrame lc_sequence_frame(const Graph& g, const LcSequence& seq) {
  LcFrame f{g, CliffordLayer(static_cast<std::size_t>(g.size()))};
  for (int v : seq.nodes) {
    f.layer[v] = SingleQubitClifford::ux().after(f.layer[v]);
    for_each_bit(f.graph.neighbors(v), [&](int w) { f.layer[w] = SingleQubitClifford::uz().after(f.layer[w]); });
    f.graph = local_complement(f.graph, v);
  }
  return f;
}

}  // namespace lebound
