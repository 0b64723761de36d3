#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqm/contexts.hpp"

namespace cqm {

inline constexpr double kValueTol = 1e-9;

/// A (possibly multivalued) physical state: one outcome index per context.
/// On a maximal commutative matrix subalgebra the real homomorphisms are
/// exactly "read the k-th diagonal entry in the joint eigenbasis", so an
/// outcome index is a complete description of the restriction.
class PhysicalState {
 public:
  PhysicalState() = default;
  PhysicalState(Eigen::Index dim, std::map<std::string, int> assignments);

  Eigen::Index dim() const noexcept { return dim_; }
  const std::map<std::string, int>& assignments() const noexcept { return assignments_; }
  std::optional<int> outcome(const std::string& context_id) const;

  // Every referenced context exists in `contexts`; throws InvalidArgument otherwise.
  void validate_against(const std::vector<Context>& contexts) const;

 private:
  Eigen::Index dim_ = 0;
  std::map<std::string, int> assignments_;
};

/// Preparation: the equivalence class of physical states sharing one
/// outcome on an anchor context, carried by its rank-1 projector.
struct QuantumState {
  std::string anchor_context;
  int outcome = 0;
  ComplexVector vector;

  static QuantumState from_context(const Context& ctx, int outcome);
  static QuantumState from_vector(std::string label, const ComplexVector& v);

  Eigen::Index dim() const noexcept { return vector.size(); }
  ComplexMatrix projector() const { return vector * vector.adjoint(); }
};

struct ValueSet {
  std::vector<double> values;
  // contexts[i] lists the context ids producing values[i].
  std::vector<std::vector<std::string>> contexts;

  bool single_valued() const noexcept { return values.size() == 1; }
};

double evaluate(const PhysicalState& phi, const Observable& a, const Context& ctx,
                double tol = kDefaultCommutationTol);

ValueSet evaluate_multivalued(const PhysicalState& phi, const Observable& a,
                              const std::vector<Context>& contexts,
                              double tol = kDefaultCommutationTol);

/// Anchors the state at (anchor, outcome) and gives every other context an
/// outcome drawn uniformly from those compatible with the anchor on shared
/// rank-1 eigenprojectors. Reproducible for a given seed.
PhysicalState construct_physical_state(const std::vector<Context>& contexts,
                                       const std::string& anchor_id, int anchor_outcome,
                                       std::uint64_t seed);

bool is_stable(const PhysicalState& phi, const Observable& a, const std::vector<Context>& contexts,
               double tol = kDefaultCommutationTol);

struct HomomorphismReport {
  int trials = 0;
  int violations = 0;
  double max_additive_residual = 0.0;
  double max_multiplicative_residual = 0.0;
};

/// Random pairs A, B diagonal in the context basis; checks phi(A+B) and
/// phi(AB) against phi(A)+phi(B) and phi(A)phi(B).
HomomorphismReport check_homomorphism(const PhysicalState& phi, const Context& ctx, int trials,
                                      std::uint64_t seed, double tol = kValueTol);

/// Observable with the given eigenvalues on the context's basis vectors.
Observable observable_in_context(const Context& ctx, const std::vector<double>& diagonal);

}  // namespace cqm
