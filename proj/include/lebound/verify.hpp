#pragma once

// Randomized self-checks run by `lebound verify`.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "dense.hpp"
#include "entanglement.hpp"
#include "gd.hpp"
#include "localizable.hpp"
#include "noise.hpp"

namespace lebound {

struct SuiteResult {
  std::string name;
  bool passed = true;
  int cases = 0;
  std::string failure;  // first failing case
};

inline Graph random_connected_graph(int n, double p_edge, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p_edge);
  for (;;) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng)) g.add_edge(i, j);
    if (g.is_connected()) return g;
  }
}

/// Size-2 regions may be disconnected; larger ones are drawn connected.
inline Region random_region(const Graph& g, int size, std::mt19937_64& rng) {
  std::vector<int> nodes(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) nodes[i] = i;
  for (;;) {
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<int> pick(nodes.begin(), nodes.begin() + size);
    std::sort(pick.begin(), pick.end());
    Region r(pick, g.size());
    if (size == 2 || g.induces_connected(r.mask())) return r;
  }
}

inline double trace_distance(const CMat& a, const CMat& b) {
  return 0.5 * hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

inline std::optional<LcFrame> connecting_frame(const Graph& g, const Region& omega) {
  if (g.induces_connected(omega.mask())) return std::nullopt;
  auto [g2, seq] = connect_region(g, omega);
  return lc_sequence_frame(g, seq);
}

inline const std::array<ChannelKind, 5>& all_channel_kinds() {
  static const std::array<ChannelKind, 5> k{ChannelKind::BF, ChannelKind::BPF, ChannelKind::PF, ChannelKind::DP,
                                            ChannelKind::AD};
  return k;
}

namespace detail {

class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }

  void check(bool ok, const std::function<std::string()>& what) {
    ++r_.cases;
    if (!ok && r_.passed) {
      r_.passed = false;
      r_.failure = what();
    }
  }

  SuiteResult result() const { return r_; }

 private:
  SuiteResult r_;
};

}  // namespace detail

inline SuiteResult verify_hierarchy(unsigned long long seed, int trials, bool full_le = false, int restarts = 1) {
  detail::Suite s("hierarchy");
  const double qs[] = {0.0, 0.2, 0.5, 0.8};
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + static_cast<unsigned long long>(t));
    const int n = std::uniform_int_distribution<int>(3, 6)(rng);
    const Graph g = random_connected_graph(n, 0.5, rng);
    const int size = std::uniform_int_distribution<int>(2, 3)(rng);
    const Region omega = random_region(g, size, rng);
    const auto kind = all_channel_kinds()[std::uniform_int_distribution<int>(0, 4)(rng)];
    const double q = qs[std::uniform_int_distribution<int>(0, 3)(rng)];
    const auto rho = apply_noise(DensityMatrix::from_pure(graph_state(g)), uniform_noise(n, make_channel(kind, q)));
    HierarchyOptions opt;
    opt.full_le = full_le;
    opt.optimizer.restarts = restarts;
    opt.optimizer.seed = seed + t;
    // negativity: the reduced-state step rests on convexity, which log-negativity lacks
    const EntanglementMeasure measure{MeasureKind::Negativity, {0}};
    const auto rep = hierarchy_report(rho, g, omega, connecting_frame(g, omega), measure, opt);
    s.check(rep.flags.all(), [&] {
      std::ostringstream os;
      os << "seed=" << seed << " trial=" << t << " kind=" << kind_name(kind) << " q=" << q << " pauli=" << rep.e_pauli
         << " zero=" << rep.e_zero << " reduced=" << rep.e_reduced << " wlb=" << rep.e_wlb.value_or(0.0);
      return os.str();
    });
  }
  return s.result();
}

inline SuiteResult verify_gd_equalities(unsigned long long seed, int trials) {
  detail::Suite s("gd-equalities");
  const ChannelKind kinds[] = {ChannelKind::BF, ChannelKind::BPF, ChannelKind::PF, ChannelKind::DP};
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + static_cast<unsigned long long>(t));
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const Graph g = random_connected_graph(n, 0.5, rng);
    const auto edges = g.edges();
    const auto [a, b] = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
    const Region omega({a, b}, n);
    NoiseLayer layer;
    for (int i = 0; i < n; ++i)
      layer.push_back(make_channel(kinds[std::uniform_int_distribution<int>(0, 3)(rng)],
                                   std::uniform_real_distribution<double>(0.0, 1.0)(rng)));
    const GDState gd = gd_from_pauli_noise(g, layer);
    const auto rho = apply_noise(DensityMatrix::from_pure(graph_state(g)), layer);
    const EntanglementMeasure measure{MeasureKind::Negativity, {0}};
    const double dense_e0 = mlb_zbasis(rho, omega, measure);
    const double gd_e0 = mlb_zbasis(gd, omega, measure);
    const double reduced = measure(reduced_region_state(rho, g, omega));
    const auto marg = gd_marginal(gd, omega);
    const bool first_max = marg[0] >= *std::max_element(marg.begin(), marg.end());
    const double w = wlb(witness_expectation(gd, omega));
    s.check(std::abs(dense_e0 - gd_e0) < 1e-9 && std::abs(dense_e0 - reduced) < 1e-9 &&
                (!first_max || std::abs(dense_e0 - w) < 1e-9),
            [&] {
              std::ostringstream os;
              os << "seed=" << seed << " trial=" << t << " dense=" << dense_e0 << " gd=" << gd_e0
                 << " reduced=" << reduced << " wlb=" << w;
              return os.str();
            });
  }
  return s.result();
}

inline SuiteResult verify_gd_dense(unsigned long long seed, int trials) {
  detail::Suite s("gd-dense");
  const ChannelKind kinds[] = {ChannelKind::BF, ChannelKind::BPF, ChannelKind::PF, ChannelKind::DP};
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + static_cast<unsigned long long>(t));
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    Graph g(n);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng)) g.add_edge(i, j);
    NoiseLayer layer;
    for (int i = 0; i < n; ++i)
      layer.push_back(make_channel(kinds[std::uniform_int_distribution<int>(0, 3)(rng)],
                                   std::uniform_real_distribution<double>(0.0, 1.0)(rng)));
    const double d = trace_distance(gd_density(gd_from_pauli_noise(g, layer)).m,
                                    apply_noise(DensityMatrix::from_pure(graph_state(g)), layer).m);
    s.check(d < 1e-10, [&] { return "seed=" + std::to_string(seed) + " trial=" + std::to_string(t) + " distance=" + std::to_string(d); });
  }
  return s.result();
}

/// Correction probabilities by enumerating every flip pattern of the
/// neighbourhood classes.
inline MixingProbabilities mixing_by_enumeration(const NeighborhoodCounts& c, double s) {
  const int total = c.n_a + c.n_ab + c.n_b;
  MixingProbabilities out{};
  for (Mask flips = 0; flips < (Mask{1} << total); ++flips) {
    double p = 1.0;
    for (int i = 0; i < total; ++i) p *= ((flips >> i) & 1u) ? s : 1.0 - s;
    const int fa = popcount(flips & (bit(c.n_a) - 1));
    const int fab = popcount((flips >> c.n_a) & (bit(c.n_ab) - 1));
    const int fb = popcount((flips >> (c.n_a + c.n_ab)) & (bit(c.n_b) - 1));
    const int ones_a = c.par_a + fa, ones_ab = c.par_ab + fab, ones_b = c.par_b + fb;
    const int za = (ones_a + ones_ab) % 2, zb = (ones_b + ones_ab) % 2;
    out[2 * za + zb] += p;
  }
  return out;
}

inline SuiteResult verify_mixing(unsigned long long seed, int trials) {
  detail::Suite s("mixing");
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::uniform_int_distribution<int> cnt(0, 6), par(0, 1);
    const NeighborhoodCounts c{cnt(rng), cnt(rng), cnt(rng), par(rng), par(rng), par(rng)};
    const double sv = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const auto a = mixing_probabilities(c, sv), b = mixing_by_enumeration(c, sv);
    double err = 0;
    for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(a[i] - b[i]));
    s.check(err < 1e-12, [&] { return "seed=" + std::to_string(seed) + " trial=" + std::to_string(t) + " error=" + std::to_string(err); });
  }
  return s.result();
}

/// Conjugation images of X, Y, Z for one element of the chain frame.
struct FrameImages {
  std::string role;  // "a", "b", "v1", "vj", "vn"
  int j = 0;         // path position for v roles
  std::array<SignedPauli, 3> images;
};

/// Tabulated images for a chain with n_l path qubits, written out case by
/// case from the parity rules.
inline std::vector<FrameImages> chain_frame_table(int n_l) {
  using P = Pauli1;
  auto sgn = [](int e) { return (e % 2 == 0) ? 1 : -1; };
  std::vector<FrameImages> out;
  {
    const int m = n_l / 2;
    FrameImages a{"a", 0, {}};
    if (n_l % 2 == 0) a.images = {SignedPauli{P::X, sgn(m)}, SignedPauli{P::Y, sgn(m)}, SignedPauli{P::Z, 1}};
    else a.images = {SignedPauli{P::Y, sgn(m + 1)}, SignedPauli{P::X, sgn(m)}, SignedPauli{P::Z, 1}};
    out.push_back(a);
  }
  out.push_back({"b", 0, {SignedPauli{P::Y, -1}, SignedPauli{P::X, 1}, SignedPauli{P::Z, 1}}});
  {
    const int m = n_l / 2;
    FrameImages v{"v1", 1, {}};
    if (n_l % 2 == 0) v.images = {SignedPauli{P::Y, sgn(m)}, SignedPauli{P::Z, 1}, SignedPauli{P::X, sgn(m)}};
    else v.images = {SignedPauli{P::X, sgn(m)}, SignedPauli{P::Z, 1}, SignedPauli{P::Y, sgn(m + 1)}};
    out.push_back(v);
  }
  for (int j = 2; j < n_l; ++j) {
    const int k = n_l - j, m = k / 2;
    FrameImages v{"vj", j, {}};
    if (k % 2 == 0) v.images = {SignedPauli{P::Z, -1}, SignedPauli{P::X, sgn(m)}, SignedPauli{P::Y, sgn(m + 1)}};
    else v.images = {SignedPauli{P::Z, -1}, SignedPauli{P::Y, sgn(m + 1)}, SignedPauli{P::X, sgn(m + 1)}};
    out.push_back(v);
  }
  if (n_l >= 2) out.push_back({"vn", n_l, {SignedPauli{P::Z, -1}, SignedPauli{P::X, 1}, SignedPauli{P::Y, -1}}});
  return out;
}

/// The frame unitary of one table row, multiplied out from the elementary
/// pi/4 rotations.
inline Eigen::Matrix2cd chain_frame_unitary(const FrameImages& row, int n_l) {
  const Eigen::Matrix2cd ux = ux_matrix(), uz = uz_matrix();
  auto uzp = [&](int k) {
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Identity();
    for (int i = 0; i < k; ++i) r = uz * r;
    return r;
  };
  if (row.role == "a") return uzp(n_l);
  if (row.role == "b") return uz;
  if (row.role == "v1") return uzp(n_l - 1) * ux;
  if (row.role == "vn") return ux * uz;
  return uzp(n_l - row.j) * ux * uz;
}

/// Compares every tabulated image with dense 2x2 conjugation.
inline SuiteResult verify_chain_frame_table(int n_lo, int n_hi,
                                            const std::function<std::vector<FrameImages>(int)>& table = chain_frame_table) {
  detail::Suite s("frame-table");
  for (int n_l = n_lo; n_l <= n_hi; ++n_l)
    for (const auto& row : table(n_l)) {
      const Eigen::Matrix2cd u = chain_frame_unitary(row, n_l);
      for (int p = 0; p < 3; ++p) {
        const Eigen::Matrix2cd got = u * pauli_matrix(static_cast<Pauli1>(p + 1)) * u.adjoint();
        const Eigen::Matrix2cd want = static_cast<double>(row.images[p].sign) * pauli_matrix(row.images[p].pauli);
        s.check((got - want).cwiseAbs().maxCoeff() < 1e-12, [&] {
          return "n_L=" + std::to_string(n_l) + " role=" + row.role + (row.role == "vj" ? std::to_string(row.j) : "") +
                 " image of " + std::string(1, "XYZ"[p]) + " differs";
        });
      }
    }
  return s.result();
}

inline SuiteResult verify_wlb_certificate(double step = 1e-3) {
  detail::Suite s("wlb-certificate");
  const int steps = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= steps; ++i) {
    const double w = -0.5 + i * step;
    for (int size : {2, 3}) {
      const auto c = wlb_certificate(w, size);
      s.check(std::abs(c.bound - wlb(w)) < 1e-9, [&] { return "omega=" + std::to_string(w) + " size=" + std::to_string(size); });
    }
  }
  return s.result();
}

inline std::vector<SuiteResult> run_verify(unsigned long long seed, int trials) {
  return {verify_hierarchy(seed, trials),  verify_gd_equalities(seed, trials), verify_gd_dense(seed, trials),
          verify_mixing(seed, trials),     verify_chain_frame_table(1, 8),       verify_wlb_certificate()};
}

}  // namespace lebound
