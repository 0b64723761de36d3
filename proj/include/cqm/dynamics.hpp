#pragma once

#include <utility>

#include "cqm/probability.hpp"

namespace cqm {

/// Hamiltonian with its cached spectral decomposition. Evolution operators
/// are U(t) = sum_n p_n exp(i E_n t).
class Hamiltonian {
 public:
  explicit Hamiltonian(Observable h, std::optional<double> degeneracy_tol = {});

  const Observable& observable() const noexcept { return h_; }
  const SpectralDecomposition& decomposition() const noexcept { return decomposition_; }
  Eigen::Index dim() const noexcept { return h_.dim(); }
  bool ground_nondegenerate() const noexcept { return decomposition_.multiplicities.front() == 1; }
  double ground_energy() const noexcept { return decomposition_.eigenvalues.front(); }

  ComplexMatrix propagator(double t) const;

 private:
  Observable h_;
  SpectralDecomposition decomposition_;
};

/// A(t) = U(t)^{-1} A U(t).
Observable evolve(const Observable& a, const Hamiltonian& h, double t);

/// phi_t(A) = phi(A(t)); ctx must contain A(t).
double evolve_state_eval(const PhysicalState& phi, const Observable& a, const Context& ctx,
                         const Hamiltonian& h, double t, double tol = kDefaultCommutationTol);

/// Infinite-time average: sum_n p_n A p_n.
Observable time_average(const Observable& a, const Hamiltonian& h);

/// Throws DegenerateGround when the lowest level is degenerate.
ComplexMatrix ground_projector(const Hamiltonian& h);

/// Psi_0 with p0 A p0 = Psi_0(A) p0.
StateFunctional ground_functional(const Hamiltonian& h);

struct ErgodicityReport {
  double ensemble_value = 0.0;  // Psi_0(A)
  double time_value = 0.0;      // phi_0(time average of A)
  double gap = 0.0;
  bool passed = false;
};

/// Compares the ground-state mean of A with the value of its time average
/// in the physical ground state phi0, evaluated in ctx.
ErgodicityReport ergodicity_check(const Hamiltonian& h, const Observable& a, const PhysicalState& phi0,
                                  const Context& ctx, double tol = 1e-10);

/// Joint context of H and the time average of A, with phi0 assigned to the
/// ground vector there.
std::pair<Context, PhysicalState> ground_physical_state(const Hamiltonian& h, const Observable& a);

}  // namespace cqm
