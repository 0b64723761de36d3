#include "cqm/gns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cqm/error.hpp"
#include "cqm/rng.hpp"

namespace cqm {

namespace {

// Row-major coordinates of R in the matrix-unit basis: index i*n + j.
ComplexVector unit_coordinates(const ComplexMatrix& r) {
  const Eigen::Index n = r.rows();
  ComplexVector v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = r(i, j);
  }
  return v;
}

// Left multiplication by S on unit coordinates: S (x) I.
ComplexMatrix left_multiplication(const ComplexMatrix& s) {
  return kron(s, ComplexMatrix::Identity(s.rows(), s.cols()));
}

}  // namespace

GnsRepresentation::GnsRepresentation(Eigen::Index algebra_dim, ComplexMatrix weight,
                                     ComplexMatrix embedding, ComplexMatrix lift, ComplexMatrix gram)
    : n_(algebra_dim),
      weight_(std::move(weight)),
      embedding_(std::move(embedding)),
      lift_(std::move(lift)),
      gram_(std::move(gram)) {}

ComplexVector GnsRepresentation::embed(const ComplexMatrix& r) const {
  if (r.rows() != n_ || r.cols() != n_) throw Error(ErrorCode::DimMismatch, "embed: wrong algebra dim");
  return embedding_ * unit_coordinates(r);
}

ComplexMatrix GnsRepresentation::rep_map(const ComplexMatrix& s) const {
  if (s.rows() != n_ || s.cols() != n_) throw Error(ErrorCode::DimMismatch, "rep_map: wrong algebra dim");
  return embedding_ * left_multiplication(s) * lift_;
}

ComplexVector GnsRepresentation::cyclic_vector() const {
  return embed(ComplexMatrix::Identity(n_, n_));
}

GnsRepresentation gns_construct(const StateFunctional& psi, double rank_tol,
                                const std::vector<int>& unit_order) {
  return gns_construct(psi.weight(), rank_tol, unit_order);
}

GnsRepresentation gns_construct(const ComplexMatrix& weight, double rank_tol,
                                const std::vector<int>& unit_order) {
  require_square_finite(weight, "gns_construct");
  const Eigen::Index n = weight.rows();
  const Eigen::Index units = n * n;
  if (max_abs_entry(weight - weight.adjoint()) > 1e-10) {
    throw Error(ErrorCode::NotHermitian, "gns_construct: weight is not Hermitian");
  }
  if (std::abs(weight.trace() - Complex(1.0, 0.0)) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "gns_construct: weight must have unit trace");
  }

  std::vector<int> order = unit_order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(units));
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<int> check = order;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i) {
    if (check.size() != static_cast<std::size_t>(units) || check[i] != static_cast<int>(i)) {
      throw Error(ErrorCode::InvalidArgument, "gns_construct: unit_order is not a permutation of n^2 units");
    }
  }
  // perm maps reordered coordinates to row-major unit coordinates.
  ComplexMatrix perm = ComplexMatrix::Zero(units, units);
  for (Eigen::Index a = 0; a < units; ++a) perm(order[static_cast<std::size_t>(a)], a) = 1.0;

  // Psi(E_ij^* E_kl) = delta_ik Psi(E_jl) = delta_ik W_lj.
  ComplexMatrix gram_units(units, units);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
          gram_units(i * n + j, k * n + l) = (i == k) ? weight(l, j) : Complex(0.0, 0.0);
        }
      }
    }
  }
  const ComplexMatrix gram = perm.adjoint() * gram_units * perm;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "gns_construct: Gram eigensolver did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  if (values.minCoeff() < -rank_tol) {
    throw Error(ErrorCode::NotPositive, "gns_construct: Gram matrix has a negative eigenvalue");
  }
  const double cutoff = rank_tol * std::max(values.maxCoeff(), 0.0);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index m = values.size() - 1; m >= 0; --m) {
    if (values(m) > cutoff) kept.push_back(m);
  }
  const auto rank = static_cast<Eigen::Index>(kept.size());
  ComplexMatrix embedding(rank, units);
  ComplexMatrix lift(units, rank);
  for (Eigen::Index r = 0; r < rank; ++r) {
    const Eigen::Index m = kept[static_cast<std::size_t>(r)];
    const double s = std::sqrt(values(m));
    const ComplexVector v = perm * solver.eigenvectors().col(m);
    embedding.row(r) = s * v.adjoint();
    lift.col(r) = v / s;
  }
  return GnsRepresentation(n, weight, std::move(embedding), std::move(lift), gram);
}

RepresentationReport verify_representation(const GnsRepresentation& rep, int trials, std::uint64_t seed,
                                           double tol) {
  const Eigen::Index n = rep.algebra_dim();
  const CounterRng rng(seed, 0x676e73ULL);
  std::uint64_t counter = 0;
  auto random_element = [&] {
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        m(i, j) = Complex(2.0 * rng.uniform(counter) - 1.0, 2.0 * rng.uniform(counter + 1) - 1.0);
        counter += 2;
      }
    }
    return m;
  };
  const ComplexVector cyclic = rep.cyclic_vector();
  const ComplexMatrix& w = rep.weight();

  RepresentationReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const ComplexMatrix r = t == 0 ? ComplexMatrix::Identity(n, n) : random_element();
    const ComplexMatrix s = t == 0 ? ComplexMatrix::Identity(n, n) : random_element();
    const ComplexMatrix pr = rep.rep_map(r);
    const ComplexMatrix ps = rep.rep_map(s);
    const double hom = max_abs_entry(rep.rep_map(r * s) - pr * ps);
    const double adj = max_abs_entry(rep.rep_map(r.adjoint()) - pr.adjoint());
    const double state = std::abs(cyclic.dot(pr * cyclic) - (w * r).trace());
    const double action = (ps * rep.embed(r) - rep.embed(s * r)).cwiseAbs().maxCoeff();
    const double inner = std::abs(rep.embed(r).dot(rep.embed(s)) - (w * r.adjoint() * s).trace());
    report.max_homomorphism_residual = std::max(report.max_homomorphism_residual, hom);
    report.max_adjoint_residual = std::max(report.max_adjoint_residual, adj);
    report.max_state_residual = std::max(report.max_state_residual, state);
    report.max_action_residual = std::max(report.max_action_residual, action);
    report.max_inner_product_residual = std::max(report.max_inner_product_residual, inner);
    if (hom > tol || adj > tol || state > tol || action > tol || inner > tol) ++report.violations;
  }
  return report;
}

}  // namespace cqm
