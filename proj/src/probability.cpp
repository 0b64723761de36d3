#include "cqm/probability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "cqm/error.hpp"
#include "cqm/rng.hpp"

namespace cqm {

namespace {

void require_context_match(const SampleSet& s, const Context& ctx) {
  if (s.context_id != ctx.id) {
    throw Error(ErrorCode::ContextMismatch,
                "sample from context " + s.context_id + " cannot be evaluated in context " + ctx.id);
  }
  if (static_cast<Eigen::Index>(s.outcome_counts.size()) != ctx.dim()) {
    throw Error(ErrorCode::DimMismatch, "sample histogram length differs from context dim");
  }
}

std::vector<std::pair<double, double>> push_forward(const std::vector<double>& values,
                                                    const std::vector<double>& probs) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  std::vector<std::pair<double, double>> out;
  for (std::size_t i : order) {
    if (!out.empty() && std::abs(values[i] - out.back().first) <= kValueTol * scale) {
      out.back().second += probs[i];
    } else {
      out.emplace_back(values[i], probs[i]);
    }
  }
  return out;
}

}  // namespace

StateFunctional::StateFunctional(const ComplexMatrix& weight) {
  require_square_finite(weight, "StateFunctional");
  if (max_abs_entry(weight - weight.adjoint()) > kPositivityTol) {
    throw Error(ErrorCode::NotHermitian, "StateFunctional: weight is not Hermitian");
  }
  weight_ = (weight + weight.adjoint()) / 2.0;
  const Complex trace = weight_.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > kTraceTol) {
    std::ostringstream os;
    os << "StateFunctional: trace " << trace.real() << " differs from 1";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(weight_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "StateFunctional: eigensolver did not converge");
  }
  if (solver.eigenvalues().minCoeff() < -kPositivityTol) {
    throw Error(ErrorCode::NotPositive, "StateFunctional: weight has a negative eigenvalue");
  }
}

StateFunctional StateFunctional::from_state(const QuantumState& prep) {
  return StateFunctional(prep.projector());
}

StateFunctional StateFunctional::maximally_mixed(Eigen::Index dim) {
  return StateFunctional(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

std::vector<double> born_weights(const QuantumState& prep, const Context& ctx) {
  if (prep.dim() != ctx.dim()) throw Error(ErrorCode::DimMismatch, "born_weights: dimension mismatch");
  const ComplexVector amplitudes = ctx.basis.adjoint() * prep.vector;
  std::vector<double> p(static_cast<std::size_t>(ctx.dim()));
  double total = 0.0;
  for (Eigen::Index k = 0; k < ctx.dim(); ++k) {
    p[static_cast<std::size_t>(k)] = std::norm(amplitudes(k));
    total += p[static_cast<std::size_t>(k)];
  }
  for (double& x : p) x /= total;
  return p;
}

SampleSet sample(const MeasurementConfig& config, unsigned threads) {
  if (config.trials < 1) throw Error(ErrorCode::InvalidArgument, "sample: trials must be >= 1");
  const std::vector<double> weights = born_weights(config.preparation, config.measurement_context);
  const std::size_t n = weights.size();
  std::vector<double> cdf(n);
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += weights[k];
    cdf[k] = acc;
    if (weights[k] > 0.0) last_nonzero = k;
  }
  const CounterRng rng(config.seed);
  auto draw = [&](std::uint64_t trial) {
    const double u = rng.uniform(trial);
    for (std::size_t k = 0; k < n; ++k) {
      if (u < cdf[k] && weights[k] > 0.0) return k;
    }
    return last_nonzero;
  };

  threads = std::max(1u, threads);
  std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(n, 0));
  auto run = [&](unsigned worker) {
    const std::uint64_t begin = config.trials * worker / threads;
    const std::uint64_t end = config.trials * (worker + 1) / threads;
    for (std::uint64_t t = begin; t < end; ++t) ++partial[worker][draw(t)];
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  SampleSet out{config.measurement_context.id, std::vector<std::uint64_t>(n, 0), config.trials, config.seed};
  for (const auto& part : partial) {
    for (std::size_t k = 0; k < n; ++k) out.outcome_counts[k] += part[k];
  }
  return out;
}

double empirical_mean(const SampleSet& s, const Observable& a, const Context& ctx, double tol) {
  require_context_match(s, ctx);
  const std::vector<double> values = restrict_to(a, ctx, tol);
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) sum += static_cast<double>(s.outcome_counts[k]) * values[k];
  return sum / static_cast<double>(s.trials);
}

Complex quantum_average(const StateFunctional& psi, const ComplexMatrix& r) {
  require_same_dim(psi.weight(), r);
  return (psi.weight() * r).trace();
}

std::vector<std::pair<double, double>> marginal_distribution(const QuantumState& prep,
                                                             const Context& ctx,
                                                             const Observable& a, double tol) {
  return push_forward(restrict_to(a, ctx, tol), born_weights(prep, ctx));
}

std::vector<std::pair<double, double>> empirical_marginal(const SampleSet& s, const Context& ctx,
                                                          const Observable& a, double tol) {
  require_context_match(s, ctx);
  std::vector<double> freq(s.outcome_counts.size());
  for (std::size_t k = 0; k < freq.size(); ++k) {
    freq[k] = static_cast<double>(s.outcome_counts[k]) / static_cast<double>(s.trials);
  }
  return push_forward(restrict_to(a, ctx, tol), freq);
}

}  // namespace cqm
