#include "catch_amalgamated.hpp"

#include <numeric>
#include <random>

#include "lebound/entanglement.hpp"
#include "lebound/gd.hpp"
#include "lebound/noise.hpp"

using namespace lebound;
using Catch::Matchers::WithinAbs;

namespace {

DensityMatrix random_state(int n, std::mt19937_64& rng, int rank) {
  std::normal_distribution<double> gauss;
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  CMat a(d, rank);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  DensityMatrix r{n, a * a.adjoint()};
  r.m /= r.trace();
  return r;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("negativity of simple states") {
  const auto bell = DensityMatrix::from_pure(graph_state(Graph::from_edges(2, {{0, 1}})));
  CHECK_THAT(negativity(bell, Region({0}, 2)), WithinAbs(1.0, 1e-12));
  CHECK_THAT(log_negativity(bell), WithinAbs(1.0, 1e-12));
  CHECK_THAT(negativity(DensityMatrix::maximally_mixed(2), Region({0}, 2)), WithinAbs(0.0, 1e-12));
  CHECK_THAT(log_negativity(DensityMatrix::from_pure(graph_state(Graph(2)))), WithinAbs(0.0, 1e-12));
}

TEST_CASE("negativity is symmetric under swapping the parts") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto r = random_state(3, rng, 2);
    CHECK_THAT(negativity(r, Region({0}, 3)), WithinAbs(negativity(r, Region({1, 2}, 3)), 1e-10));
  }
}

TEST_CASE("the full-graph witness is I/2 minus the graph-state projector") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const auto w = witness_matrix(local_witness(g, Region({0, 1, 2}, 3)));
  const CVec s = graph_state(g).amp;
  const CMat want = 0.5 * CMat::Identity(8, 8) - s * s.adjoint();
  CHECK((w - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("witness on the pure graph state") {
  const Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto rho = DensityMatrix::from_pure(graph_state(g));
  for (const auto& members : {std::vector<int>{0, 1}, std::vector<int>{1, 2, 3}}) {
    const auto w = local_witness(g, Region(members, 4));
    CHECK(w.terms.size() == (std::size_t{1} << members.size()));
    CHECK_THAT(witness_expectation(rho, w), WithinAbs(-0.5, 1e-12));
  }
  CHECK_THAT(wlb(-0.5), WithinAbs(1.0, 1e-15));
  CHECK_THAT(wlb_log(-0.5), WithinAbs(1.0, 1e-15));
  CHECK_THROWS(local_witness(g, Region({0, 2}, 4)));
}

TEST_CASE("witness value on graph-diagonal states") {
  std::mt19937_64 rng(7);
  const Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 3}});
  for (auto kind : {ChannelKind::BF, ChannelKind::BPF, ChannelKind::PF, ChannelKind::DP})
    for (double q : {0.1, 0.6}) {
      const auto layer = uniform_noise(5, make_channel(kind, q));
      const auto dense = apply_noise(DensityMatrix::from_pure(graph_state(g)), layer);
      const auto gd = gd_from_pauli_noise(g, layer);
      for (const auto& members : {std::vector<int>{1, 2}, std::vector<int>{1, 2, 3}}) {
        const Region omega(members, 5);
        CHECK_THAT(witness_expectation(dense, local_witness(g, omega)), WithinAbs(witness_expectation(gd, omega), 1e-12));
      }
    }
}

TEST_CASE("the witness bound never exceeds the negativity") {
  std::mt19937_64 rng(13);
  const Graph edge = Graph::from_edges(2, {{0, 1}});
  const auto w = local_witness(edge, Region({0, 1}, 2));
  const CVec target = graph_state(edge).amp;
  for (int t = 0; t < 200; ++t) {
    auto r = random_state(2, rng, 1 + t % 4);
    // bias half of the trials towards the target to populate negative witness values
    if (t % 2) r.m = 0.5 * r.m + 0.5 * target * target.adjoint();
    CHECK(wlb(witness_expectation(r, w)) <= negativity(r, Region({0}, 2)) + 1e-12);
  }
}

TEST_CASE("graph-diagonal pairs saturate the witness bound") {
  const Graph edge = Graph::from_edges(2, {{0, 1}});
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> m{u(rng), u(rng), u(rng), u(rng)};
    std::swap(m[0], *std::max_element(m.begin(), m.end()));
    const double s = m[0] + m[1] + m[2] + m[3];
    for (double& x : m) x /= s;
    const auto rho = gd_region_state(edge, Region({0, 1}, 2), m);
    CHECK_THAT(negativity(rho, Region({0}, 2)), WithinAbs(wlb(0.5 - m[0]), 1e-10));
  }
}

TEST_CASE("certificate singular values match the dense operator") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Graph chain3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  for (int size : {2, 3}) {
    const Graph g = size == 2 ? Graph::from_edges(2, {{0, 1}}) : chain3;
    std::vector<int> all(static_cast<std::size_t>(size));
    std::iota(all.begin(), all.end(), 0);
    const CMat wt = partial_transpose(witness_matrix(local_witness(g, Region(all, size))), size, bit(size - 1));
    for (int t = 0; t < 10; ++t) {
      const double f = u(rng), h = u(rng);
      const CMat d = -f * wt + h * CMat::Identity(wt.rows(), wt.cols());
      Eigen::JacobiSVD<CMat> svd(d);
      std::vector<double> dense(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
      dense.erase(std::unique(dense.begin(), dense.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                  dense.end());
      auto closed = certificate_singular_values(f, h, size);
      std::sort(closed.begin(), closed.end());
      closed.erase(std::unique(closed.begin(), closed.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                   closed.end());
      CHECK(sorted(dense).size() == closed.size());
      const auto sd = sorted(dense);
      for (std::size_t i = 0; i < std::min(sd.size(), closed.size()); ++i) CHECK_THAT(sd[i], WithinAbs(closed[i], 1e-9));
    }
  }
}

TEST_CASE("certificate search reproduces the closed-form bound") {
  for (double w : {-0.5, -0.3, -1e-4, 0.0, 0.2, 0.5})
    for (int size : {2, 3}) {
      const auto c = wlb_certificate(w, size);
      CHECK_THAT(c.bound, WithinAbs(wlb(w), 1e-12));
      CHECK(*std::max_element(c.singular_values.begin(), c.singular_values.end()) == Catch::Approx(1.0));
    }
  CHECK(wlb_certificate(-0.25, 2).f == 2.0);
  CHECK(wlb_certificate(0.25, 2).f == 0.0);
  CHECK_THROWS(wlb_certificate(0.7, 2));
  CHECK_THROWS(certificate_singular_values(1.0, 1.0, 4));
}
