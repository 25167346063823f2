#include "catch_amalgamated.hpp"

#include <numbers>
#include <random>

#include "lebound/analytic.hpp"
#include "lebound/localizable.hpp"
#include "lebound/verify.hpp"

using namespace lebound;
using Catch::Matchers::WithinAbs;

namespace {

// Dense all-Z bound of the pair (0, 1) of the realizing graph, with `on_ab`
// deciding whether a and b carry the channel too.
double dense_pair_e0(const NeighborhoodCounts& c, const Channel& ch, bool on_ab) {
  const Graph g = realizing_graph(c);
  NoiseLayer layer = uniform_noise(g.size(), ch);
  if (!on_ab) layer[0] = layer[1] = identity_channel();
  const auto rho = apply_noise(DensityMatrix::from_pure(graph_state(g)), layer);
  return mlb_zbasis(rho, Region({0, 1}, g.size()), EntanglementMeasure{});
}

}  // namespace

TEST_CASE("critical noise closed form") {
  CHECK_THAT(critical_noise(1), WithinAbs(0.422650, 1e-6));
  CHECK_THAT(critical_noise(1), WithinAbs(1.0 - 1.0 / std::sqrt(3.0), 1e-15));
  for (int n = 1; n <= 20; ++n) {
    CHECK(critical_noise(n + 1) < critical_noise(n));
    CHECK_THAT(critical_noise_numeric([n](double q) { return analytic_e0(n, q); }), WithinAbs(critical_noise(n), 1e-6));
  }
  CHECK_THROWS(critical_noise(0));
}

TEST_CASE("symmetric curve values") {
  CHECK_THAT(analytic_e0(1, 0.2), WithinAbs(std::log2(2.92) - 1.0, 1e-14));
  CHECK_THAT(analytic_e0(1, 0.2), WithinAbs(0.545968, 1e-6));
  CHECK_THAT(analytic_e0(3, 0.0), WithinAbs(1.0, 1e-15));
  CHECK(analytic_e0(2, critical_noise(2) + 1e-9) == 0.0);
  CHECK_THROWS(analytic_e0(1, 1.5));
}

TEST_CASE("the symmetric closed form agrees with the general eigenvalues") {
  for (int n = 1; n <= 6; ++n)
    for (double q = 0.0; q <= 1.0; q += 0.05)
      CHECK_THAT(analytic_e0_general(NeighborhoodCounts::symmetric(n), q), WithinAbs(analytic_e0(n, q), 1e-12));
}

TEST_CASE("eigenvalue and pattern-weight routes agree") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> cnt(0, 5);
  const PauliProbs clean{1, 0, 0, 0};
  for (int t = 0; t < 40; ++t) {
    const NeighborhoodCounts c{cnt(rng), cnt(rng), cnt(rng)};
    const double q = 0.025 * t;
    CHECK_THAT(analytic_e0_general(c, q), WithinAbs(analytic_e0_pair(c, q / 2, clean, clean), 1e-12));
  }
}

TEST_CASE("mixing probabilities") {
  const auto m = mixing_probabilities(NeighborhoodCounts::symmetric(1), 0.25);
  CHECK_THAT(m[0], WithinAbs(0.4375, 1e-15));
  CHECK_THAT(m[1], WithinAbs(0.1875, 1e-15));
  CHECK_THAT(m[2], WithinAbs(0.1875, 1e-15));
  CHECK_THAT(m[3], WithinAbs(0.1875, 1e-15));
  const auto none = mixing_probabilities(NeighborhoodCounts{}, 0.3);
  CHECK(none[0] == 1.0);
  const auto half = mixing_probabilities(NeighborhoodCounts{2, 1, 0}, 0.5);
  for (double p : half) CHECK_THAT(p, WithinAbs(0.25, 1e-15));
  CHECK_THROWS(mixing_probabilities(NeighborhoodCounts{}, 0.6));
}

TEST_CASE("mixing probabilities match flip-pattern enumeration") {
  for (int na = 0; na <= 4; ++na)
    for (int nb = 0; nb <= 4; ++nb)
      for (int nab = 0; nab <= 4; ++nab)
        for (int par = 0; par < 8; ++par)
          for (double s : {0.0, 0.1, 0.25, 0.5}) {
            const NeighborhoodCounts c{na, nb, nab, par & 1, (par >> 1) & 1, (par >> 2) & 1};
            const auto a = mixing_probabilities(c, s), b = mixing_by_enumeration(c, s);
            for (int i = 0; i < 4; ++i) CHECK_THAT(a[i], WithinAbs(b[i], 1e-12));
          }
}

TEST_CASE("outcome parities relabel the corrections") {
  // flipping the parity of the a class swaps patterns that differ in Z_a
  const NeighborhoodCounts even{2, 1, 1}, odd{2, 1, 1, 1, 0, 0};
  const auto e = mixing_probabilities(even, 0.2), o = mixing_probabilities(odd, 0.2);
  CHECK_THAT(o[0], WithinAbs(e[2], 1e-15));
  CHECK_THAT(o[1], WithinAbs(e[3], 1e-15));
}

TEST_CASE("small-q expansion") {
  const double ln2 = std::numbers::ln2;
  const auto t = small_q_expansion(4, 0.01);
  CHECK(t.o0 == 1.0);
  CHECK_THAT(t.o1, WithinAbs(-3.0 * 4 * 0.01 / (2 * ln2), 1e-15));
  CHECK_THAT(t.o2, WithinAbs(3.0 * 4 * 2 * 1e-4 / (8 * ln2), 1e-15));
  CHECK(small_q_expansion(2, 0.3).o2 == 0.0);
  // third-order coefficient n(n-1)(n+4)/(8 ln 2), which is 315/(2 ln 2) at n = 10
  for (double q : {1e-3, 2e-3, 4e-3}) {
    const double rest = analytic_e0(10, q) - small_q_expansion(10, q).sum();
    CHECK_THAT(rest, WithinAbs(315.0 / (2 * ln2) * q * q * q, 20.0 * 3000.0 * q * q * q * q));
  }
}

TEST_CASE("pair pattern weights reproduce the assembled state") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    MixingProbabilities qbar{u(rng), u(rng), u(rng), u(rng)};
    const double s = qbar[0] + qbar[1] + qbar[2] + qbar[3];
    for (double& x : qbar) x /= s;
    const auto ca = make_channel(t % 2 ? ChannelKind::DP : ChannelKind::BPF, u(rng));
    const auto cb = make_channel(t % 3 ? ChannelKind::BF : ChannelKind::PF, u(rng));
    const auto w = pair_pattern_weights(qbar, *ca.probs, *cb.probs);
    const auto rho = assemble_post_state(qbar, ca, cb);
    CHECK_THAT(log_negativity(rho), WithinAbs(gd_pair_log_negativity({w.begin(), w.end()}), 1e-12));
  }
}

TEST_CASE("realizing graph layout") {
  const Graph g = realizing_graph(NeighborhoodCounts{1, 2, 3});
  CHECK(g.size() == 8);
  const auto c = neighborhood_partition(g, 0, 1);
  CHECK(c.n_a() == 1);
  CHECK(c.n_b() == 2);
  CHECK(c.n_ab() == 3);
}

TEST_CASE("closed form matches the dense pipeline on realizing graphs") {
  for (int n : {1, 2})
    for (auto kind : {ChannelKind::BF, ChannelKind::BPF, ChannelKind::PF, ChannelKind::DP})
      for (double q : {0.0, 0.15, 0.4, 0.7}) {
        const auto c = NeighborhoodCounts::symmetric(n);
        const auto ch = make_channel(kind, q);
        const double s = ch.flip_probability();
        const PauliProbs clean{1, 0, 0, 0};
        CHECK_THAT(analytic_e0_pair(c, s, clean, clean), WithinAbs(dense_pair_e0(c, ch, false), 1e-10));
        CHECK_THAT(analytic_e0_pair(c, s, *ch.probs, *ch.probs), WithinAbs(dense_pair_e0(c, ch, true), 1e-10));
      }
}

TEST_CASE("channel pair curves") {
  const auto c = NeighborhoodCounts::symmetric(1);
  CHECK_THAT(pair_curve("00", c, 0.3), WithinAbs(analytic_e0(1, 0.3), 1e-12));
  // pairs in one group coincide
  for (double q = 0.0; q <= 1.0; q += 0.1) {
    CHECK_THAT(pair_curve("01", c, q), WithinAbs(pair_curve("30", c, q), 1e-12));
    CHECK_THAT(pair_curve("12", c, q), WithinAbs(pair_curve("33", c, q), 1e-12));
    CHECK_THAT(pair_curve("13", c, q), WithinAbs(pair_curve("22", c, q), 1e-12));
  }
  CHECK(pair_curve("01", c, 0.3) < pair_curve("00", c, 0.3));
  CHECK_THROWS(pair_curve("04", c, 0.3));
  CHECK_THROWS(pair_curve("0", c, 0.3));
}

TEST_CASE("phase flips on a linear chain follow the parity rules") {
  const auto five = linear_graph_params(5, make_channel(ChannelKind::PF, 0.2));
  CHECK(five.counts == NeighborhoodCounts{0, 2, 3});
  const auto six = linear_graph_params(6, make_channel(ChannelKind::PF, 0.2));
  CHECK(six.counts == NeighborhoodCounts{0, 3, 3});
  // transformed channels along the path alternate between the two flip kinds
  const ChannelKind want[] = {ChannelKind::BPF, ChannelKind::BF, ChannelKind::BPF, ChannelKind::BF, ChannelKind::BPF};
  for (int j = 0; j < 5; ++j) CHECK(five.channels[five.chain.interior[j]].kind == want[j]);
  // at q = 0 the classes are unchanged
  CHECK(linear_graph_params(5, make_channel(ChannelKind::PF, 0.0)).counts == five.counts);
}

TEST_CASE("bit flips on a bulk chain alternate with the parity of the path") {
  for (int n_l = 3; n_l <= 10; ++n_l) {
    const auto p = linear_graph_params(n_l, make_channel(ChannelKind::BF, 0.3));
    if (n_l % 2) CHECK(p.counts == NeighborhoodCounts{1, 1, 1});
    else CHECK(p.counts == NeighborhoodCounts{1, 2, 0});
  }
}

TEST_CASE("linear-chain bound matches the dense chain") {
  for (int n_l = 1; n_l <= 4; ++n_l)
    for (auto kind : {ChannelKind::BF, ChannelKind::PF, ChannelKind::DP})
      for (double q : {0.0, 0.3}) {
        const auto ch = make_channel(kind, q);
        const auto p = linear_graph_params(n_l, ch);
        NoiseLayer layer = uniform_noise(p.chain.graph.size(), ch);
        layer[p.chain.a] = layer[p.chain.b] = identity_channel();
        const auto rho = apply_clifford_layer(apply_noise(DensityMatrix::from_pure(graph_state(p.chain.graph)), layer),
                                              chain_frame_layer(p.chain));
        const double dense = mlb_zbasis(rho, Region({p.chain.a, p.chain.b}, p.chain.graph.size()), EntanglementMeasure{});
        double s = 0.0;
        for_each_bit(p.classes.all() & p.classes.type1, [&](int v) { s = std::max(s, p.channels[v].flip_probability()); });
        CHECK_THAT(analytic_e0_pair(p.counts, s, {1, 0, 0, 0}, {1, 0, 0, 0}), WithinAbs(dense, 1e-10));
      }
}

TEST_CASE("linear chain without noise") {
  for (int n_l = 1; n_l <= 8; ++n_l) {
    const auto p = linear_graph_params(n_l, make_channel(ChannelKind::BF, 0.0));
    CHECK_THAT(analytic_e0_pair(p.counts, 0.0, {1, 0, 0, 0}, {1, 0, 0, 0}), WithinAbs(1.0, 1e-15));
  }
  CHECK_THROWS(linear_graph_params(3, make_channel(ChannelKind::AD, 0.1)));
}
