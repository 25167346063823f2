#include "catch_amalgamated.hpp"

#include "lebound/pauli.hpp"

using namespace lebound;
using Catch::Matchers::WithinAbs;

namespace {

double matrix_distance(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Eigen::Matrix2cd signed_matrix(const SignedPauli& s) { return static_cast<double>(s.sign) * pauli_matrix(s.pauli); }

}  // namespace

TEST_CASE("single-qubit pauli products carry phases") {
  const auto x = PauliString::from_label("X"), y = PauliString::from_label("Y"), z = PauliString::from_label("Z");
  CHECK((x * y).label() == "+iZ");
  CHECK((y * x).label() == "-iZ");
  CHECK((z * x).label() == "+iY");
  CHECK((x * z).label() == "-iY");
  CHECK((y * y).is_identity());
  CHECK((y * y).phase() == 0);
}

TEST_CASE("pauli label round trip") {
  for (const char* s : {"XZI", "-YZ", "+iXX", "IIII"}) {
    const auto p = PauliString::from_label(s);
    CHECK(PauliString::from_label(p.label()).label() == p.label());
  }
  CHECK_THROWS(PauliString::from_label("XQ"));
}

TEST_CASE("commutation follows the symplectic form") {
  CHECK(PauliString::from_label("XX").commutes_with(PauliString::from_label("ZZ")));
  CHECK_FALSE(PauliString::from_label("XI").commutes_with(PauliString::from_label("ZI")));
}

TEST_CASE("graph-state generators on a five-node chain") {
  const Graph chain = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(generator(chain, 4).label() == "+IIIZX");
  CHECK(generator(chain, 2).label() == "+IZXZI");
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(generator(chain, i).commutes_with(generator(chain, j)));
}

TEST_CASE("elementary rotations act as tabulated") {
  const auto ux = SingleQubitClifford::ux(), uz = SingleQubitClifford::uz();
  CHECK(ux.image(Pauli1::X).pauli == Pauli1::X);
  CHECK(ux.image(Pauli1::Z).pauli == Pauli1::Y);
  CHECK(ux.image(Pauli1::Z).sign == -1);
  CHECK(ux.image(Pauli1::Y).pauli == Pauli1::Z);
  CHECK(uz.image(Pauli1::X).pauli == Pauli1::Y);
  CHECK(uz.image(Pauli1::X).sign == -1);
  CHECK(uz.image(Pauli1::Y).pauli == Pauli1::X);
  CHECK(uz.image(Pauli1::Z).pauli == Pauli1::Z);
}

TEST_CASE("the rotations match their matrices") {
  const Eigen::Matrix2cd ux = ux_matrix(), uz = uz_matrix();
  for (int p = 1; p <= 3; ++p) {
    const auto P = static_cast<Pauli1>(p);
    CHECK(matrix_distance(ux * pauli_matrix(P) * ux.adjoint(), signed_matrix(SingleQubitClifford::ux().image(P))) < 1e-12);
    CHECK(matrix_distance(uz * pauli_matrix(P) * uz.adjoint(), signed_matrix(SingleQubitClifford::uz().image(P))) < 1e-12);
  }
}

TEST_CASE("the single-qubit Clifford group has 24 elements") {
  const auto& group = single_qubit_clifford_group();
  REQUIRE(group.size() == 24);
  for (const auto& e : group) {
    CHECK(matrix_distance(e.matrix * e.matrix.adjoint(), Eigen::Matrix2cd::Identity()) < 1e-12);
    for (int p = 1; p <= 3; ++p) {
      const auto P = static_cast<Pauli1>(p);
      CHECK(matrix_distance(e.matrix * pauli_matrix(P) * e.matrix.adjoint(), signed_matrix(e.clifford.image(P))) < 1e-12);
    }
    CHECK(e.clifford.after(e.clifford.inverse()).is_identity());
    CHECK(SingleQubitClifford::from_unitary(e.matrix) == e.clifford);
  }
}

TEST_CASE("composition matches matrix products") {
  const auto& group = single_qubit_clifford_group();
  for (std::size_t i = 0; i < group.size(); i += 5)
    for (std::size_t j = 0; j < group.size(); j += 3) {
      const auto c = group[i].clifford.after(group[j].clifford);
      CHECK(SingleQubitClifford::from_unitary(group[i].matrix * group[j].matrix) == c);
    }
  CHECK(SingleQubitClifford::ux().pow(4).is_identity());
  CHECK(SingleQubitClifford::uz().pow(4).is_identity());
  CHECK_FALSE(SingleQubitClifford::uz().pow(2).is_identity());
}

TEST_CASE("preimage inverts the image") {
  for (const auto& e : single_qubit_clifford_group())
    for (int p = 1; p <= 3; ++p) {
      const auto pre = e.clifford.preimage(static_cast<Pauli1>(p));
      const auto back = e.clifford.image(pre.pauli);
      CHECK(back.pauli == static_cast<Pauli1>(p));
      CHECK(back.sign * pre.sign == 1);
    }
}

TEST_CASE("conjugating a pauli string by a layer") {
  const CliffordLayer layer{SingleQubitClifford::ux(), SingleQubitClifford::uz(), SingleQubitClifford{}};
  CHECK(conjugate(PauliString::from_label("ZXY"), layer).label() == "+YYY");
  CHECK(conjugate(conjugate(PauliString::from_label("ZXY"), layer), inverse(layer)).label() == "+ZXY");
}

TEST_CASE("local complementation maps stabilizers under the frame") {
  // tau_v g_i tau_v^dag is a stabilizer of the complemented graph
  const Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {1, 3}});
  const auto f = lc_sequence_frame(g, LcSequence{{1, 2}});
  for (int i = 0; i < 4; ++i) {
    const auto img = conjugate(generator(g, i), f.layer);
    for (int j = 0; j < 4; ++j) CHECK(img.commutes_with(generator(f.graph, j)));
  }
}
