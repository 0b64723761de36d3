#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"

#include "cqm/contexts.hpp"
#include "cqm/experiments.hpp"
#include "support.hpp"

using namespace cqm;
using cqm::test::Gen;

namespace {

ObservableFamily ray_family(const KSInstance& ks) {
  ObservableFamily fam;
  for (std::size_t r = 0; r < ks.rays.size(); ++r)
    fam.add("P" + std::to_string(r), make_observable(ks.rays[r] * ks.rays[r].adjoint()));
  return fam;
}

double source_residual(const Context& ctx, const Observable& a) {
  const std::vector<double> vals = restrict_to(a, ctx);
  Eigen::VectorXd d(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t k = 0; k < vals.size(); ++k) d(static_cast<Eigen::Index>(k)) = vals[k];
  const ComplexMatrix rebuilt = ctx.basis * d.cast<Complex>().asDiagonal() * ctx.basis.adjoint();
  return (rebuilt - a.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("joint_context of tau_3 is the identity basis") {
  const Context c = joint_context({make_observable(pauli(3))}, kDefaultCommutationTol, {"tau3"});
  CHECK(c.dim() == 2);
  CHECK(test::is_identity(c.basis, 0));
  CHECK(c.maximal_within_family);
  CHECK(c.source_observables == std::vector<std::string>{"tau3"});
  CHECK(c.id.rfind("ctx-", 0) == 0);
  CHECK(c.id.size() == 20);
}

TEST_CASE("spin-1 squares share one context") {
  const Observable x2 = make_observable(test::spin1(0) * test::spin1(0));
  const Observable y2 = make_observable(test::spin1(1) * test::spin1(1));
  const Observable z2 = make_observable(test::spin1(2) * test::spin1(2));
  CHECK(commutator(x2.matrix(), y2.matrix()).norm() < 1e-14);
  CHECK(commutator(y2.matrix(), z2.matrix()).norm() < 1e-14);
  CHECK(commutator(x2.matrix(), z2.matrix()).norm() < 1e-14);
  const Context c = joint_context({x2, y2, z2});
  CHECK(c.maximal_within_family);
  for (const Observable& a : {x2, y2, z2}) {
    CHECK(in_context(a, c));
    CHECK(source_residual(c, a) < 1e-9);
  }
  // each row of values is a permutation of (0, 1, 1)
  const auto vx = restrict_to(x2, c), vy = restrict_to(y2, c), vz = restrict_to(z2, c);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(vx[k] + vy[k] + vz[k] - 2.0) < 1e-12);
}

TEST_CASE("degenerate joint eigenspace is completed and flagged") {
  const Observable z2 = make_observable(test::spin1(2) * test::spin1(2));
  const Context c = joint_context({z2});
  CHECK_FALSE(c.maximal_within_family);
  CHECK(test::is_identity(c.basis.adjoint() * c.basis, 1e-10));
  CHECK(source_residual(c, z2) < 1e-9);
  // repeated call gives the same id
  CHECK(joint_context({z2}).id == c.id);
}

TEST_CASE("noncommuting input is rejected with indices and residual") {
  try {
    joint_context({make_observable(pauli(3)), make_observable(pauli(1)), make_observable(pauli(2))});
    FAIL("expected NotCommuting");
  } catch (const NotCommutingError& e) {
    CHECK(e.code() == ErrorCode::NotCommuting);
    CHECK(e.first() == 0);
    CHECK(e.second() == 1);
    CHECK(e.residual() == doctest::Approx(cstar_norm(commutator(pauli(3), pauli(1)))));
  }
  CHECK(test::error_code([] { joint_context({}); }) == ErrorCode::InvalidArgument);
  CHECK(test::error_code([] {
          joint_context({make_observable(pauli(3)), make_observable(ComplexMatrix::Identity(3, 3))});
        }) == ErrorCode::DimMismatch);
}

TEST_CASE("joint_context on random commuting families") {
  Gen g(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(2, 6);
    const ComplexMatrix v = g.unitary(n);
    std::vector<Observable> obs;
    const int count = g.integer(1, 4);
    for (int k = 0; k < count; ++k) {
      Eigen::VectorXd d(n);
      // coarse levels so single members are degenerate
      for (int i = 0; i < n; ++i) d(i) = g.integer(0, 2);
      const ComplexMatrix m = v * d.cast<Complex>().asDiagonal() * v.adjoint();
      obs.push_back(make_observable((m + m.adjoint()) * 0.5, 1e-9));
    }
    const Context c = joint_context(obs);
    CHECK(test::is_identity(c.basis.adjoint() * c.basis, 1e-10));
    for (const Observable& a : obs) {
      CHECK(in_context(a, c));
      CHECK(source_residual(c, a) <= 1e-9 * std::max(1.0, cstar_norm(a.matrix())));
    }
    CHECK(canonicalize_basis(c.basis) == c.basis);
  }
}

TEST_CASE("canonical form") {
  Gen g(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 8);
    ComplexMatrix u = g.unitary(n);
    const ComplexMatrix c1 = canonicalize_basis(u);
    const ComplexMatrix c2 = canonicalize_basis(c1);
    CHECK(c1 == c2);  // bit-exact
    for (int k = 0; k < n; ++k) {
      int first = 0;
      while (std::abs(c1(first, k)) <= 1e-12) ++first;
      CHECK(c1(first, k).imag() == 0.0);
      CHECK(c1(first, k).real() > 0.0);
    }
    // columns rephased and permuted describe the same context
    ComplexMatrix shuffled = u;
    for (int k = 0; k < n; ++k) shuffled.col(k) *= std::polar(1.0, g.real(-3, 3));
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = k;
    std::shuffle(perm.begin(), perm.end(), g.engine());
    ComplexMatrix permuted(n, n);
    for (int k = 0; k < n; ++k) permuted.col(k) = shuffled.col(perm[static_cast<std::size_t>(k)]);
    const ComplexMatrix c3 = canonicalize_basis(permuted);
    CHECK(same_canonical_basis(c1, c3));
    CHECK(context_id(c1) == context_id(c3));
  }
  CHECK(test::is_identity(canonicalize_basis(ComplexMatrix::Identity(4, 4)), 0));
}

TEST_CASE("maximal_contexts of the Pauli triple") {
  const ObservableFamily fam({"t1", "t2", "t3"},
                             {make_observable(pauli(1)), make_observable(pauli(2)), make_observable(pauli(3))});
  const auto ctxs = maximal_contexts(fam);
  CHECK(ctxs.size() == 3);
  std::set<std::string> ids;
  for (const Context& c : ctxs) {
    CHECK(c.source_observables.size() == 1);
    ids.insert(c.id);
  }
  CHECK(ids.size() == 3);
}

TEST_CASE("maximal_contexts merges identical eigenbases") {
  const ObservableFamily fam({"t3", "minus_t3"}, {make_observable(pauli(3)), make_observable(-pauli(3))});
  const auto ctxs = maximal_contexts(fam);
  REQUIRE(ctxs.size() == 1);
  CHECK(ctxs[0].source_observables.size() == 2);
}

TEST_CASE("18-ray family: complete contexts are the 9 brute-force orthogonal bases") {
  const KSInstance ks = builtin_18ray();
  const std::size_t n = ks.rays.size();
  REQUIRE(n == 18);

  // orthogonality table and every mutually orthogonal 4-subset
  std::vector<std::vector<bool>> orth(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      orth[i][j] = i != j && std::abs(ks.rays[i].dot(ks.rays[j])) < 1e-12;
  std::set<std::set<std::size_t>> bases;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d)
          if (orth[a][b] && orth[a][c] && orth[a][d] && orth[b][c] && orth[b][d] && orth[c][d])
            bases.insert({a, b, c, d});
  CHECK(bases.size() == 9);
  // the set also has orthogonal pairs and triples that no basis completes
  const auto cliques = test::brute_force_cliques(orth);
  CHECK(cliques.size() == 24);

  const auto ctxs = maximal_contexts(ray_family(ks));
  REQUIRE(ctxs.size() == cliques.size());
  std::set<std::set<std::size_t>> quads;
  std::map<std::size_t, int> by_size;
  for (const Context& c : ctxs) {
    std::set<std::size_t> members;
    for (const std::string& s : c.source_observables) members.insert(std::stoul(s.substr(1)));
    ++by_size[members.size()];
    CHECK(std::find(cliques.begin(), cliques.end(), std::vector<std::size_t>(members.begin(), members.end())) !=
          cliques.end());
    // three orthogonal rank-1 projectors in dim 4 already fix the basis
    CHECK(c.maximal_within_family == (members.size() >= 3));
    if (members.size() == 4) quads.insert(members);
  }
  CHECK(quads == bases);
  CHECK(by_size[4] == 9);
  CHECK(by_size[3] == 6);
  CHECK(by_size[2] == 9);
}

TEST_CASE("maximal_cliques matches subset enumeration") {
  Gen g(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 12));
    const double p = g.real(0.1, 0.9);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) adj[i][j] = adj[j][i] = g.real(0, 1) < p;
    const auto got = maximal_cliques(adj);
    CHECK(got == test::brute_force_cliques(adj));
    // antichain under inclusion
    for (std::size_t a = 0; a < got.size(); ++a)
      for (std::size_t b = 0; b < got.size(); ++b)
        if (a != b)
          CHECK_FALSE(std::includes(got[b].begin(), got[b].end(), got[a].begin(), got[a].end()));
  }
}

TEST_CASE("clique cap raises FamilyTooLarge") {
  // complement of a perfect matching on 2m vertices has 2^m maximal cliques
  const std::size_t m = 8;
  std::vector<std::vector<bool>> adj(2 * m, std::vector<bool>(2 * m, true));
  for (std::size_t i = 0; i < 2 * m; ++i) adj[i][i] = false;
  for (std::size_t i = 0; i < m; ++i) adj[2 * i][2 * i + 1] = adj[2 * i + 1][2 * i] = false;
  CHECK(maximal_cliques(adj).size() == (1u << m));
  CHECK(test::error_code([&] { maximal_cliques(adj, 100); }) == ErrorCode::FamilyTooLarge);
}

TEST_CASE("in_context and restrict_to") {
  const Context c3 = joint_context({make_observable(pauli(3))});
  CHECK(in_context(make_observable(pauli(3)), c3));
  CHECK_FALSE(in_context(make_observable(pauli(1)), c3));
  Gen g(3);
  for (int n = 2; n <= 5; ++n) {
    const Context c = joint_context({make_observable(g.hermitian(n))});
    CHECK(in_context(make_observable(ComplexMatrix::Identity(n, n)), c));
  }
  CHECK(restrict_to(make_observable(pauli(3)), c3) == std::vector<double>{1.0, -1.0});

  ComplexMatrix ad = ComplexMatrix::Zero(2, 2);
  ad(0, 0) = 0.7;
  ad(1, 1) = -2.5;
  const auto v = restrict_to(make_observable(ad), c3);
  CHECK(v == std::vector<double>{0.7, -2.5});

  // r0 + r tau(n) on the tau(n) context
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector3d n(g.normal(), g.normal(), g.normal());
    n.normalize();
    const double r0 = g.real(-2, 2), r = g.real(0.1, 2);
    const ComplexMatrix tn = pauli_direction(n(0), n(1), n(2));
    const Context c = joint_context({make_observable(tn)});
    auto vals = restrict_to(make_observable(r0 * ComplexMatrix::Identity(2, 2) + r * tn), c);
    std::sort(vals.begin(), vals.end());
    CHECK(std::abs(vals[0] - (r0 - r)) < 1e-12);
    CHECK(std::abs(vals[1] - (r0 + r)) < 1e-12);
  }

  CHECK(test::error_code([&] { restrict_to(make_observable(pauli(1)), c3); }) == ErrorCode::NotInContext);
  CHECK(test::error_code([&] { in_context(make_observable(ComplexMatrix::Identity(3, 3)), c3); }) ==
        ErrorCode::DimMismatch);
}

TEST_CASE("find_context and family validation") {
  const auto ctxs = maximal_contexts(ObservableFamily({"t1", "t3"}, {make_observable(pauli(1)), make_observable(pauli(3))}));
  CHECK(&find_context(ctxs, ctxs[1].id) == &ctxs[1]);
  CHECK(test::error_code([&] { find_context(ctxs, "ctx-nope"); }) == ErrorCode::InvalidArgument);

  ObservableFamily fam;
  fam.add("a", make_observable(pauli(1)));
  CHECK(test::error_code([&] { fam.add("a", make_observable(pauli(2))); }) == ErrorCode::InvalidArgument);
  CHECK(test::error_code([&] { fam.add("b", make_observable(ComplexMatrix::Identity(3, 3))); }) ==
        ErrorCode::DimMismatch);
  CHECK(test::error_code([] { maximal_contexts(ObservableFamily{}); }) == ErrorCode::InvalidArgument);
}
