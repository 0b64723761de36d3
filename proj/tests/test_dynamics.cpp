#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cqm/dynamics.hpp"
#include "cqm/oscillator.hpp"
#include "support.hpp"

using namespace cqm;
using cqm::test::Gen;

namespace {

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

Hamiltonian pauli_h(double e0) { return Hamiltonian(make_observable(e0 * pauli(3))); }

Hamiltonian random_h(Gen& g, int n) { return Hamiltonian(make_observable(g.hermitian(n))); }

}  // namespace

TEST_CASE("evolve examples") {
  Gen g(1);
  const Observable a = make_observable(g.hermitian(3));
  const Hamiltonian h = random_h(g, 3);
  CHECK(max_abs(evolve(a, h, 0.0).matrix() - a.matrix()) < 1e-14);

  const double e0 = 0.7;
  const Hamiltonian hp = pauli_h(e0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = g.real(-5, 5);
    const ComplexMatrix m = g.hermitian(2);
    const ComplexMatrix at = evolve(make_observable(m), hp, t).matrix();
    const Complex phase = std::polar(1.0, -2.0 * e0 * t);
    CHECK(std::abs(at(0, 0) - m(0, 0)) < 1e-13);
    CHECK(std::abs(at(1, 1) - m(1, 1)) < 1e-13);
    CHECK(std::abs(at(0, 1) - m(0, 1) * phase) < 1e-13);
    CHECK(std::abs(at(1, 0) - m(1, 0) * std::conj(phase)) < 1e-13);
    const ComplexMatrix u = test::expm_i(hp.observable().matrix(), t);
    CHECK(max_abs(at - u.adjoint() * m * u) < 1e-13);
  }
}

TEST_CASE("evolve matches the matrix exponential and preserves the spectrum") {
  Gen g(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = g.integer(2, 6);
    const Hamiltonian h = random_h(g, n);
    const Observable a = make_observable(g.hermitian(n));
    const double t = g.real(-3, 3);
    const Observable at = evolve(a, h, t);
    const ComplexMatrix u = test::expm_i(h.observable().matrix(), t);
    CHECK(max_abs(at.matrix() - u.adjoint() * a.matrix() * u) < 1e-11);
    CHECK(max_abs(at.matrix() - at.matrix().adjoint()) == 0.0);
    const auto s0 = spectrum(a), s1 = spectrum(at);
    REQUIRE(s0.size() == s1.size());
    for (std::size_t k = 0; k < s0.size(); ++k) CHECK(std::abs(s0[k] - s1[k]) < 1e-11);
    CHECK(max_abs(h.propagator(t) - u) < 1e-11);
  }
}

TEST_CASE("evolve is a one-parameter group action") {
  Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = g.integer(2, 6);
    const Hamiltonian h = random_h(g, n);
    const Observable a = make_observable(g.hermitian(n));
    const double s = g.real(-4, 4), t = g.real(-4, 4);
    const ComplexMatrix lhs = evolve(a, h, s + t).matrix();
    const ComplexMatrix rhs = evolve(evolve(a, h, s), h, t).matrix();
    CHECK(max_abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("evolve_state_eval") {
  const double e0 = 1.3;
  const Hamiltonian h = pauli_h(e0);
  const Context c3 = joint_context({make_observable(pauli(3))});
  const Observable t3 = make_observable(pauli(3));
  for (int k = 0; k < 2; ++k) {
    const PhysicalState phi(2, {{c3.id, k}});
    const double v0 = evaluate(phi, t3, c3);
    CHECK(evolve_state_eval(phi, t3, c3, h, 0.0) == v0);
    for (double t : {0.1, 1.0, 7.5, -3.0}) CHECK(std::abs(evolve_state_eval(phi, t3, c3, h, t) - v0) < 1e-12);
  }

  // tau_1 turns into tau_2 after a quarter turn of the doubled phase and into -tau_1 after half
  const Observable t1 = make_observable(pauli(1));
  const Context c1 = joint_context({t1});
  const Context c2 = joint_context({make_observable(pauli(2))});
  const double quarter = std::numbers::pi / (4.0 * e0);
  CHECK(max_abs(evolve(t1, h, quarter).matrix() - pauli(2)) < 1e-12);
  CHECK(max_abs(evolve(t1, h, 2.0 * quarter).matrix() + pauli(1)) < 1e-12);
  for (int k = 0; k < 2; ++k) {
    const PhysicalState phi(2, {{c1.id, k}, {c2.id, k}});
    const double y = evaluate(phi, make_observable(pauli(2)), c2);
    CHECK(std::abs(evolve_state_eval(phi, t1, c2, h, quarter) - y) < 1e-12);
    CHECK(std::abs(evolve_state_eval(phi, t1, c1, h, 2.0 * quarter) + evaluate(phi, t1, c1)) < 1e-12);
    CHECK(test::error_code([&] { evolve_state_eval(phi, t1, c1, h, quarter); }) == ErrorCode::NotInContext);
  }
}

TEST_CASE("time_average examples") {
  Gen g(4);
  const Hamiltonian h = pauli_h(0.9);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = g.hermitian(2);
    const ComplexMatrix bar = time_average(make_observable(m), h).matrix();
    CHECK(max_abs(bar - m2(m(0, 0), 0, 0, m(1, 1))) < 1e-14);
  }
  const Hamiltonian hr = random_h(g, 4);
  const Observable commuting = make_observable(hr.observable().matrix() * hr.observable().matrix());
  CHECK(max_abs(time_average(commuting, hr).matrix() - commuting.matrix()) < 1e-11);
  CHECK(test::error_code([&] { time_average(make_observable(g.hermitian(3)), hr); }) == ErrorCode::DimMismatch);
}

TEST_CASE("time_average equals the trapezoid quadrature of the long-time mean") {
  Gen g(5);
  const std::vector<double> levels{-2.0, -1.2, -0.5, 0.3, 1.1, 2.0};
  const double w_min = 0.7, w_max = 4.0;
  for (int trial = 0; trial < 3; ++trial) {
    const Hamiltonian h(make_observable(g.with_spectrum(levels), 1e-9));
    const Observable a = make_observable(g.hermitian(6));
    const double L = 1e3 * 2.0 * std::numbers::pi / w_min;
    const ComplexMatrix oracle = test::trapezoid_time_average(a.matrix(), h.observable().matrix(), L, 0.2 / w_max);
    CHECK(max_abs(time_average(a, h).matrix() - oracle) <= 1e-3);
  }
}

TEST_CASE("time_average properties") {
  Gen g(6);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = g.integer(2, 6);
    // some trials use a degenerate H
    const Hamiltonian h = trial % 3 == 0
                              ? Hamiltonian(make_observable(g.with_spectrum([&] {
                                  std::vector<double> l;
                                  for (int k = 0; k < n; ++k) l.push_back(g.integer(0, 2));
                                  return l;
                                }()), 1e-9))
                              : random_h(g, n);
    const Observable a = make_observable(g.hermitian(n));
    const Observable bar = time_average(a, h);
    CHECK(max_abs(time_average(bar, h).matrix() - bar.matrix()) < 1e-12);
    CHECK(std::abs(bar.matrix().trace() - a.matrix().trace()) < 1e-12);
    CHECK(max_abs(commutator(bar.matrix(), h.observable().matrix())) < 1e-10);
    const ComplexMatrix r = g.matrix(n);
    const Observable pos = make_observable(r.adjoint() * r, 1e-9);
    for (double l : spectrum(time_average(pos, h))) CHECK(l >= -1e-12);
  }
}

TEST_CASE("ground_projector") {
  const Hamiltonian h(make_observable(m2(1.5, 0, 0, -1.5)));
  CHECK(max_abs(ground_projector(h) - m2(0, 0, 0, 1)) < 1e-14);
  CHECK(h.ground_nondegenerate());
  CHECK(h.ground_energy() == doctest::Approx(-1.5));

  const Hamiltonian id(make_observable(ComplexMatrix::Identity(3, 3)));
  CHECK_FALSE(id.ground_nondegenerate());
  CHECK(test::error_code([&] { ground_projector(id); }) == ErrorCode::DegenerateGround);
  CHECK(test::error_code([&] { ground_functional(id); }) == ErrorCode::DegenerateGround);

  const FockTruncation f(12, 1.0);
  const ComplexMatrix p0 = ground_projector(Hamiltonian(make_observable(f.hamiltonian())));
  ComplexMatrix expected = ComplexMatrix::Zero(12, 12);
  expected(0, 0) = 1.0;
  CHECK(max_abs(p0 - expected) < 1e-14);

  Gen g(7);
  const ComplexMatrix p = ground_projector(random_h(g, 5));
  CHECK(max_abs(p * p - p) < 1e-12);
  CHECK(std::abs(p.trace() - 1.0) < 1e-12);
}

TEST_CASE("ground_functional") {
  Gen g(8);
  const Hamiltonian h = pauli_h(1.0);
  const StateFunctional psi0 = ground_functional(h);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix m = g.matrix(2);
    CHECK(std::abs(quantum_average(psi0, m) - m(1, 1)) < 1e-14);
  }
  CHECK(std::abs(quantum_average(psi0, ComplexMatrix::Identity(2, 2)) - 1.0) < 1e-14);

  const Hamiltonian h5 = random_h(g, 5);
  const StateFunctional psi5 = ground_functional(h5);
  const ComplexMatrix p0 = ground_projector(h5);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix r = g.matrix(5);
    CHECK(quantum_average(psi5, r.adjoint() * r).real() >= 0.0);
    const Complex v = quantum_average(psi5, r);
    CHECK(max_abs(p0 * r * p0 - v * p0) < 1e-12);
    const ComplexMatrix s = g.matrix(5);
    const Complex lin = quantum_average(psi5, 2.0 * r + Complex(0, 3) * s);
    CHECK(std::abs(lin - 2.0 * v - Complex(0, 3) * quantum_average(psi5, s)) < 1e-12);
    CHECK(std::abs(v - quantum_average(psi5, s)) <= cstar_norm(r - s) * (1 + 1e-12));
  }
}

TEST_CASE("ergodicity_check") {
  SUBCASE("two-level example") {
    Gen g(9);
    const Hamiltonian h = pauli_h(1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix m = g.hermitian(2);
      const Observable a = make_observable(m);
      const auto [ctx, phi0] = ground_physical_state(h, a);
      const ErgodicityReport r = ergodicity_check(h, a, phi0, ctx);
      CHECK(r.passed);
      CHECK(r.gap <= 1e-10);
      CHECK(std::abs(r.ensemble_value - m(1, 1).real()) < 1e-14);
      CHECK(std::abs(r.time_value - m(1, 1).real()) < 1e-12);
      // a + d over 2 minus a - d over 2
      const double a_ = m(0, 0).real(), d_ = m(1, 1).real();
      CHECK(std::abs(r.time_value - ((a_ + d_) / 2 - (a_ - d_) / 2)) < 1e-12);
    }
  }
  SUBCASE("identity") {
    const Hamiltonian h = pauli_h(2.0);
    const Observable id = make_observable(ComplexMatrix::Identity(2, 2));
    const auto [ctx, phi0] = ground_physical_state(h, id);
    const ErgodicityReport r = ergodicity_check(h, id, phi0, ctx);
    CHECK(r.ensemble_value == doctest::Approx(1.0));
    CHECK(r.time_value == doctest::Approx(1.0));
  }
  SUBCASE("random 5x5") {
    Gen g(10);
    for (int trial = 0; trial < 50; ++trial) {
      const Hamiltonian h = random_h(g, 5);
      const Observable a = make_observable(g.hermitian(5));
      const auto [ctx, phi0] = ground_physical_state(h, a);
      const ErgodicityReport r = ergodicity_check(h, a, phi0, ctx);
      CHECK(r.gap <= 1e-10);
      const ComplexVector v0 = spectral_decomposition(h.observable()).eigenvectors[0].col(0);
      CHECK(std::abs(r.ensemble_value - (v0.adjoint() * a.matrix() * v0)(0, 0).real()) < 1e-10);
    }
  }
  SUBCASE("not a ground state") {
    const Hamiltonian h = pauli_h(1.0);
    const Observable a = make_observable(pauli(1) + pauli(3));
    const auto [ctx, phi0] = ground_physical_state(h, a);
    const int excited = 1 - *phi0.outcome(ctx.id);
    const PhysicalState wrong(2, {{ctx.id, excited}});
    CHECK(test::error_code([&] { ergodicity_check(h, a, wrong, ctx); }) == ErrorCode::NotGroundState);
  }
}
