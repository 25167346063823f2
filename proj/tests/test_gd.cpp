#include "catch_amalgamated.hpp"

#include <numeric>
#include <random>

#include "lebound/entanglement.hpp"
#include "lebound/gd.hpp"
#include "lebound/noise.hpp"

using namespace lebound;
using Catch::Matchers::WithinAbs;

namespace {

NoiseLayer random_pauli_layer(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NoiseLayer layer;
  for (int i = 0; i < n; ++i) {
    PauliProbs p{u(rng), u(rng), u(rng), u(rng)};
    const double s = p[0] + p[1] + p[2] + p[3];
    for (double& x : p) x /= s;
    layer.push_back(pauli_channel(p));
  }
  return layer;
}

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("closed-form log-negativity of a pair") {
  CHECK_THAT(gd_pair_log_negativity({0.7, 0.1, 0.1, 0.1}), WithinAbs(std::log2(1.4), 1e-14));
  CHECK_THAT(gd_pair_log_negativity({0.7, 0.1, 0.1, 0.1}), WithinAbs(0.485426827170242, 1e-12));
  CHECK_THAT(gd_pair_log_negativity({1.0, 0.0, 0.0, 0.0}), WithinAbs(1.0, 1e-15));
  CHECK_THAT(gd_pair_log_negativity({0.5, 0.5, 0.0, 0.0}), WithinAbs(0.0, 1e-15));
  CHECK_THAT(gd_pair_log_negativity({0.25, 0.25, 0.25, 0.25}), WithinAbs(0.0, 1e-15));
  // the largest weight need not sit on the unflipped pattern
  CHECK_THAT(gd_pair_log_negativity({0.1, 0.1, 0.1, 0.7}), WithinAbs(std::log2(1.4), 1e-14));
  CHECK_THROWS(gd_pair_log_negativity({1.0, 0.0}));
}

TEST_CASE("closed-form eigenvalues agree with the dense partial transpose") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Graph edge = Graph::from_edges(2, {{0, 1}});
  for (int t = 0; t < 20; ++t) {
    std::vector<double> m{u(rng), u(rng), u(rng), u(rng)};
    const double s = m[0] + m[1] + m[2] + m[3];
    for (double& x : m) x /= s;
    const auto rho = gd_region_state(edge, Region({0, 1}, 2), m);
    auto dense = hermitian_eigenvalues(partial_transpose(rho, Region({0}, 2)));
    auto closed = gd_pair_ptranspose_eigenvalues(m);
    std::sort(dense.begin(), dense.end());
    std::sort(closed.begin(), closed.end());
    for (int i = 0; i < 4; ++i) CHECK_THAT(dense[i], WithinAbs(closed[i], 1e-12));
    CHECK_THAT(log_negativity(rho), WithinAbs(gd_pair_log_negativity(m), 1e-12));
  }
}

TEST_CASE("pure graph state has a point distribution") {
  const auto s = GDState::pure(Graph::from_edges(3, {{0, 1}, {1, 2}}));
  CHECK(s.p[0] == 1.0);
  CHECK(std::accumulate(s.p.begin(), s.p.end(), 0.0) == 1.0);
}

TEST_CASE("single Pauli errors map to Z patterns") {
  const Graph chain = Graph::from_edges(3, {{0, 1}, {1, 2}});
  auto one = [&](int q, Pauli1 p) {
    NoiseLayer layer = uniform_noise(3, identity_channel());
    PauliProbs probs{0, 0, 0, 0};
    probs[static_cast<int>(p)] = 1.0;
    layer[q] = pauli_channel(probs);
    return gd_from_pauli_noise(chain, layer);
  };
  CHECK(one(1, Pauli1::X).p[bit(0) | bit(2)] == 1.0);
  CHECK(one(1, Pauli1::Y).p[bit(0) | bit(1) | bit(2)] == 1.0);
  CHECK(one(0, Pauli1::Z).p[bit(0)] == 1.0);
}

TEST_CASE("graph-diagonal states reconstruct the dense noisy state") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 5;
    Graph g(n);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng)) g.add_edge(i, j);
    const auto layer = random_pauli_layer(n, rng);
    const auto dense = apply_noise(DensityMatrix::from_pure(graph_state(g)), layer);
    const auto gd = gd_from_pauli_noise(g, layer);
    CHECK_THAT(std::accumulate(gd.p.begin(), gd.p.end(), 0.0), WithinAbs(1.0, 1e-12));
    CHECK(max_abs(gd_density(gd).m - dense.m) < 1e-12);
  }
}

TEST_CASE("non-Pauli noise is refused") {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  CHECK_THROWS(gd_from_pauli_noise(g, uniform_noise(2, make_channel(ChannelKind::AD, 0.2))));
}

TEST_CASE("region marginals") {
  std::mt19937_64 rng(23);
  const Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 4}});
  const auto gd = gd_from_pauli_noise(g, random_pauli_layer(5, rng));
  const Region omega({1, 3, 4}, 5);
  const auto m = gd_marginal(gd, omega);
  CHECK_THAT(std::accumulate(m.begin(), m.end(), 0.0), WithinAbs(1.0, 1e-12));
  // marginalizing onto {1,4} equals the direct marginal
  const auto sub = marginalize(m, 3, {0, 2});
  const auto direct = gd_marginal(gd, Region({1, 4}, 5));
  for (int i = 0; i < 4; ++i) CHECK_THAT(sub[i], WithinAbs(direct[i], 1e-14));
}

TEST_CASE("region state of a graph-diagonal state matches the disentangled reduction") {
  std::mt19937_64 rng(29);
  const Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 2}});
  const auto layer = random_pauli_layer(5, rng);
  const auto dense = apply_noise(DensityMatrix::from_pure(graph_state(g)), layer);
  const auto gd = gd_from_pauli_noise(g, layer);
  for (const auto& members : {std::vector<int>{0, 2}, std::vector<int>{1, 2, 3}, std::vector<int>{0, 4}}) {
    const Region omega(members, 5);
    const auto via_gd = gd_region_state(g, omega, gd_marginal(gd, omega));
    CHECK(max_abs(via_gd.m - reduced_region_state(dense, g, omega).m) < 1e-12);
  }
}
