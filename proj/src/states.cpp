#include "cqm/states.hpp"

#include <algorithm>
#include <cmath>

#include "cqm/error.hpp"
#include "cqm/rng.hpp"

namespace cqm {

namespace {

// Rank-1 projectors agree when |<u|v>| = 1.
constexpr double kSharedProjectorTol = 1e-9;

int assigned_outcome(const PhysicalState& phi, const Context& ctx) {
  const auto k = phi.outcome(ctx.id);
  if (!k) throw Error(ErrorCode::UnassignedContext, "context " + ctx.id + " has no assigned outcome");
  return *k;
}

}  // namespace

PhysicalState::PhysicalState(Eigen::Index dim, std::map<std::string, int> assignments)
    : dim_(dim), assignments_(std::move(assignments)) {
  if (dim <= 0) throw Error(ErrorCode::InvalidArgument, "PhysicalState: dim must be positive");
  for (const auto& [id, k] : assignments_) {
    if (k < 0 || k >= dim) {
      throw Error(ErrorCode::InvalidArgument, "PhysicalState: outcome out of range for " + id);
    }
  }
}

std::optional<int> PhysicalState::outcome(const std::string& context_id) const {
  auto it = assignments_.find(context_id);
  if (it == assignments_.end()) return std::nullopt;
  return it->second;
}

void PhysicalState::validate_against(const std::vector<Context>& contexts) const {
  for (const auto& [id, k] : assignments_) {
    (void)k;
    const Context& ctx = find_context(contexts, id);
    if (ctx.dim() != dim_) throw Error(ErrorCode::DimMismatch, "PhysicalState: context " + id + " has wrong dim");
  }
}

QuantumState QuantumState::from_context(const Context& ctx, int outcome) {
  if (outcome < 0 || outcome >= ctx.dim()) {
    throw Error(ErrorCode::InvalidArgument, "QuantumState: outcome out of range");
  }
  return QuantumState{ctx.id, outcome, ctx.basis.col(outcome)};
}

QuantumState QuantumState::from_vector(std::string label, const ComplexVector& v) {
  if (v.size() == 0 || !v.allFinite()) throw Error(ErrorCode::NonFinite, "QuantumState: invalid vector");
  const double norm = v.norm();
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "QuantumState: zero vector");
  return QuantumState{std::move(label), 0, v / norm};
}

double evaluate(const PhysicalState& phi, const Observable& a, const Context& ctx, double tol) {
  const int k = assigned_outcome(phi, ctx);
  return restrict_to(a, ctx, tol)[static_cast<std::size_t>(k)];
}

ValueSet evaluate_multivalued(const PhysicalState& phi, const Observable& a,
                              const std::vector<Context>& contexts, double tol) {
  ValueSet out;
  const double scale = std::max(1.0, cstar_norm(a.matrix()));
  for (const Context& ctx : contexts) {
    if (!phi.outcome(ctx.id) || ctx.dim() != a.dim() || !in_context(a, ctx, tol)) continue;
    const double value = evaluate(phi, a, ctx, tol);
    auto it = std::find_if(out.values.begin(), out.values.end(),
                           [&](double v) { return std::abs(v - value) <= kValueTol * scale; });
    if (it == out.values.end()) {
      out.values.push_back(value);
      out.contexts.push_back({ctx.id});
    } else {
      out.contexts[static_cast<std::size_t>(it - out.values.begin())].push_back(ctx.id);
    }
  }
  if (out.values.empty()) {
    throw Error(ErrorCode::NoContainingContext, "no assigned context contains the observable");
  }
  return out;
}

PhysicalState construct_physical_state(const std::vector<Context>& contexts,
                                       const std::string& anchor_id, int anchor_outcome,
                                       std::uint64_t seed) {
  const Context& anchor = find_context(contexts, anchor_id);
  const Eigen::Index dim = anchor.dim();
  if (anchor_outcome < 0 || anchor_outcome >= dim) {
    throw Error(ErrorCode::InvalidArgument, "construct_physical_state: anchor outcome out of range");
  }
  const CounterRng rng(seed, 0x70687973ULL);
  std::map<std::string, int> assignments{{anchor.id, anchor_outcome}};

  for (std::size_t c = 0; c < contexts.size(); ++c) {
    const Context& ctx = contexts[c];
    if (ctx.id == anchor.id) continue;
    if (ctx.dim() != dim) throw Error(ErrorCode::DimMismatch, "construct_physical_state: mixed dimensions");

    std::vector<bool> allowed(static_cast<std::size_t>(dim), true);
    const ComplexMatrix overlap = anchor.basis.adjoint() * ctx.basis;
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        if (std::abs(std::abs(overlap(j, k)) - 1.0) > kSharedProjectorTol) continue;
        // Shared eigenprojector: value 1 iff it is the anchor outcome.
        if (j == anchor_outcome) {
          std::fill(allowed.begin(), allowed.end(), false);
          allowed[static_cast<std::size_t>(k)] = true;
          j = dim;
          break;
        }
        allowed[static_cast<std::size_t>(k)] = false;
      }
    }
    std::vector<int> choices;
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (allowed[static_cast<std::size_t>(k)]) choices.push_back(static_cast<int>(k));
    }
    if (choices.empty()) {
      throw Error(ErrorCode::InconsistentIntersection,
                  "no outcome of context " + ctx.id + " is consistent with the anchor");
    }
    assignments[ctx.id] = choices[static_cast<std::size_t>(rng.index(c, choices.size()))];
  }
  return PhysicalState(dim, std::move(assignments));
}

bool is_stable(const PhysicalState& phi, const Observable& a, const std::vector<Context>& contexts,
               double tol) {
  return evaluate_multivalued(phi, a, contexts, tol).single_valued();
}

Observable observable_in_context(const Context& ctx, const std::vector<double>& diagonal) {
  if (static_cast<Eigen::Index>(diagonal.size()) != ctx.dim()) {
    throw Error(ErrorCode::DimMismatch, "observable_in_context: wrong diagonal length");
  }
  Eigen::VectorXcd d(ctx.dim());
  for (Eigen::Index k = 0; k < ctx.dim(); ++k) d(k) = diagonal[static_cast<std::size_t>(k)];
  return Observable::from_matrix(ctx.basis * d.asDiagonal() * ctx.basis.adjoint(), 1e-8);
}

HomomorphismReport check_homomorphism(const PhysicalState& phi, const Context& ctx, int trials,
                                      std::uint64_t seed, double tol) {
  assigned_outcome(phi, ctx);
  const CounterRng rng(seed, 0x686f6dULL);
  const std::size_t n = static_cast<std::size_t>(ctx.dim());
  HomomorphismReport report;
  report.trials = trials;
  std::uint64_t counter = 0;
  auto draw = [&] {
    std::vector<double> d(n);
    for (double& x : d) x = 4.0 * rng.uniform(counter++) - 2.0;
    return observable_in_context(ctx, d);
  };
  for (int t = 0; t < trials; ++t) {
    const Observable a = draw();
    const Observable b = draw();
    const double fa = evaluate(phi, a, ctx);
    const double fb = evaluate(phi, b, ctx);
    const Observable sum = Observable::from_matrix(a.matrix() + b.matrix());
    // AB is Hermitian because A and B commute.
    const Observable product = Observable::from_matrix(a.matrix() * b.matrix(), 1e-8);
    const double add = std::abs(evaluate(phi, sum, ctx) - fa - fb);
    const double mul = std::abs(evaluate(phi, product, ctx) - fa * fb);
    report.max_additive_residual = std::max(report.max_additive_residual, add);
    report.max_multiplicative_residual = std::max(report.max_multiplicative_residual, mul);
    if (add > tol || mul > tol) ++report.violations;
  }
  return report;
}

}  // namespace cqm
