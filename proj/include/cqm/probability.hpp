#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cqm/states.hpp"

namespace cqm {

/// One measuring device applied to one preparation. The context fixes the
/// event algebra; samples from different contexts are never merged.
struct MeasurementConfig {
  QuantumState preparation;
  Context measurement_context;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
};

struct SampleSet {
  std::string context_id;
  std::vector<std::uint64_t> outcome_counts;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Positive, normalized linear functional R -> trace(weight R).
class StateFunctional {
 public:
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPositivityTol = 1e-12;

  explicit StateFunctional(const ComplexMatrix& weight);
  static StateFunctional from_state(const QuantumState& prep);
  static StateFunctional maximally_mixed(Eigen::Index dim);

  const ComplexMatrix& weight() const noexcept { return weight_; }
  Eigen::Index dim() const noexcept { return weight_.rows(); }

 private:
  ComplexMatrix weight_;
};

/// p_k = |<e_k|psi>|^2.
std::vector<double> born_weights(const QuantumState& prep, const Context& ctx);

/// Draws `trials` outcomes; trial i uses the counter-based substream
/// (seed, i), so the histogram does not depend on `threads`.
SampleSet sample(const MeasurementConfig& config, unsigned threads = 1);

double empirical_mean(const SampleSet& s, const Observable& a, const Context& ctx,
                      double tol = kDefaultCommutationTol);

Complex quantum_average(const StateFunctional& psi, const ComplexMatrix& r);

/// Distribution of the values of A when measured with device `ctx`:
/// eigenvalue -> probability, ascending in eigenvalue.
std::vector<std::pair<double, double>> marginal_distribution(const QuantumState& prep,
                                                             const Context& ctx,
                                                             const Observable& a,
                                                             double tol = kDefaultCommutationTol);

/// Same push-forward applied to observed counts.
std::vector<std::pair<double, double>> empirical_marginal(const SampleSet& s, const Context& ctx,
                                                          const Observable& a,
                                                          double tol = kDefaultCommutationTol);

}  // namespace cqm
