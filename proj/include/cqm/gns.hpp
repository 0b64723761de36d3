#pragma once

#include <cstdint>
#include <vector>

#include "cqm/probability.hpp"

namespace cqm {

inline constexpr double kDefaultRankTol = 1e-10;

/// Representation of the n x n matrix algebra on the quotient of the
/// algebra by the null space of the state. Algebra elements are indexed by
/// the matrix units E_ij; class vectors live in C^rep_dim with the
/// orthonormal basis diagonalizing the Gram form.
class GnsRepresentation {
 public:
  GnsRepresentation(Eigen::Index algebra_dim, ComplexMatrix weight, ComplexMatrix embedding,
                    ComplexMatrix lift, ComplexMatrix gram);

  Eigen::Index algebra_dim() const noexcept { return n_; }
  Eigen::Index rep_dim() const noexcept { return embedding_.rows(); }
  const ComplexMatrix& weight() const noexcept { return weight_; }
  const ComplexMatrix& gram() const noexcept { return gram_; }

  /// Class vector Phi(R).
  ComplexVector embed(const ComplexMatrix& r) const;
  /// Pi(S), acting by Pi(S) Phi(R) = Phi(S R).
  ComplexMatrix rep_map(const ComplexMatrix& s) const;
  ComplexVector cyclic_vector() const;

 private:
  Eigen::Index n_;
  ComplexMatrix weight_;
  ComplexMatrix embedding_;  // rep_dim x n^2: unit coordinates -> class vector
  ComplexMatrix lift_;       // n^2 x rep_dim: right inverse on the quotient
  ComplexMatrix gram_;
};

/// Builds the representation from the Gram matrix
/// G_(ij),(kl) = Psi(E_ij^* E_kl). `unit_order` permutes the matrix units
/// used as the coordinate basis (identity when empty).
GnsRepresentation gns_construct(const StateFunctional& psi, double rank_tol = kDefaultRankTol,
                                const std::vector<int>& unit_order = {});

/// Weight given as a raw matrix; a weight that is not positive surfaces as
/// NotPositive from the Gram spectrum.
GnsRepresentation gns_construct(const ComplexMatrix& weight, double rank_tol = kDefaultRankTol,
                                const std::vector<int>& unit_order = {});

struct RepresentationReport {
  int trials = 0;
  int violations = 0;
  double max_homomorphism_residual = 0.0;
  double max_adjoint_residual = 0.0;
  double max_state_residual = 0.0;
  double max_action_residual = 0.0;
  double max_inner_product_residual = 0.0;
};

RepresentationReport verify_representation(const GnsRepresentation& rep, int trials, std::uint64_t seed,
                                           double tol = 1e-8);

}  // namespace cqm
