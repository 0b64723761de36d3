#include "cqm/dynamics.hpp"

#include <cmath>

#include "cqm/error.hpp"

namespace cqm {

namespace {

void require_nondegenerate(const Hamiltonian& h) {
  if (!h.ground_nondegenerate()) {
    throw Error(ErrorCode::DegenerateGround,
                "ground level has multiplicity " + std::to_string(h.decomposition().multiplicities.front()));
  }
}

}  // namespace

Hamiltonian::Hamiltonian(Observable h, std::optional<double> degeneracy_tol)
    : h_(std::move(h)), decomposition_(spectral_decomposition(h_, degeneracy_tol)) {}

ComplexMatrix Hamiltonian::propagator(double t) const {
  if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "propagator: time is not finite");
  return spectral_function(decomposition_, [t](double e) { return std::polar(1.0, e * t); });
}

Observable evolve(const Observable& a, const Hamiltonian& h, double t) {
  require_same_dim(a.matrix(), h.observable().matrix());
  const ComplexMatrix u = h.propagator(t);
  return Observable::from_matrix(u.adjoint() * a.matrix() * u, 1e-8 * (1.0 + cstar_norm(a.matrix())));
}

double evolve_state_eval(const PhysicalState& phi, const Observable& a, const Context& ctx,
                         const Hamiltonian& h, double t, double tol) {
  return evaluate(phi, evolve(a, h, t), ctx, tol);
}

Observable time_average(const Observable& a, const Hamiltonian& h) {
  require_same_dim(a.matrix(), h.observable().matrix());
  ComplexMatrix out = ComplexMatrix::Zero(a.dim(), a.dim());
  for (const ComplexMatrix& p : h.decomposition().projectors) out += p * a.matrix() * p;
  return Observable::from_matrix(out, 1e-8 * (1.0 + cstar_norm(a.matrix())));
}

ComplexMatrix ground_projector(const Hamiltonian& h) {
  require_nondegenerate(h);
  return h.decomposition().projectors.front();
}

StateFunctional ground_functional(const Hamiltonian& h) {
  require_nondegenerate(h);
  const ComplexVector v = h.decomposition().eigenvectors.front().col(0);
  return StateFunctional(v * v.adjoint());
}

ErgodicityReport ergodicity_check(const Hamiltonian& h, const Observable& a, const PhysicalState& phi0,
                                  const Context& ctx, double tol) {
  const Observable p0 = Observable::from_matrix(ground_projector(h), 1e-8);
  if (std::abs(evaluate(phi0, p0, ctx) - 1.0) > tol) {
    throw Error(ErrorCode::NotGroundState, "physical state does not assign 1 to the ground projector");
  }
  ErgodicityReport report;
  report.ensemble_value = quantum_average(ground_functional(h), a.matrix()).real();
  report.time_value = evaluate(phi0, time_average(a, h), ctx);
  report.gap = std::abs(report.ensemble_value - report.time_value);
  report.passed = report.gap <= tol;
  return report;
}

std::pair<Context, PhysicalState> ground_physical_state(const Hamiltonian& h, const Observable& a) {
  const ComplexMatrix p0 = ground_projector(h);
  Context ctx = joint_context({h.observable(), time_average(a, h)}, kDefaultCommutationTol, {"H", "A_bar"});
  const Observable p0_obs = Observable::from_matrix(p0, 1e-8);
  const std::vector<double> values = restrict_to(p0_obs, ctx);
  int ground = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > values[static_cast<std::size_t>(ground)]) ground = static_cast<int>(k);
  }
  PhysicalState phi(ctx.dim(), {{ctx.id, ground}});
  return {std::move(ctx), std::move(phi)};
}

}  // namespace cqm
