#include "cqm/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cqm/dynamics.hpp"
#include "cqm/error.hpp"

namespace cqm {

namespace {

// Pair factor (1/i)^2 * i D^c(t) = -i D^c(t).
Complex pair_factor(double t, double nu) { return Complex(0.0, -1.0) * causal_propagator(t, nu); }

Complex pairing_sum(const std::vector<double>& times, std::vector<bool>& used, double nu) {
  auto first = std::find(used.begin(), used.end(), false);
  if (first == used.end()) return Complex(1.0, 0.0);
  const std::size_t i = static_cast<std::size_t>(first - used.begin());
  used[i] = true;
  Complex total(0.0, 0.0);
  for (std::size_t j = i + 1; j < times.size(); ++j) {
    if (used[j]) continue;
    used[j] = true;
    total += pair_factor(times[i] - times[j], nu) * pairing_sum(times, used, nu);
    used[j] = false;
  }
  used[i] = false;
  return total;
}

Observable number_observable(const FockTruncation& trunc) {
  return Observable::from_matrix(trunc.number());
}

}  // namespace

FockTruncation::FockTruncation(int levels, double nu) : levels_(levels), nu_(nu) {
  if (levels < 2) throw Error(ErrorCode::InvalidArgument, "FockTruncation: need at least 2 levels");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(ErrorCode::InvalidArgument, "FockTruncation: nu must be positive");
  lowering_ = ComplexMatrix::Zero(levels, levels);
  for (int k = 1; k < levels; ++k) lowering_(k - 1, k) = std::sqrt(static_cast<double>(k));
  raising_ = lowering_.adjoint();
}

ComplexMatrix FockTruncation::position() const { return (lowering_ + raising_) / std::sqrt(2.0 * nu_); }

ComplexMatrix FockTruncation::momentum() const {
  return Complex(0.0, std::sqrt(nu_ / 2.0)) * (raising_ - lowering_);
}

ComplexMatrix FockTruncation::hamiltonian() const {
  return nu_ * (number() + 0.5 * ComplexMatrix::Identity(levels_, levels_));
}

FockTruncation build_truncation(int levels, double nu) { return FockTruncation(levels, nu); }

ProjectorLimitReport ground_projector_limit(const FockTruncation& trunc, const std::vector<double>& r_values) {
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    if (!(r_values[i] >= 0.0) || (i > 0 && r_values[i] <= r_values[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "ground_projector_limit: r values must be nonnegative and increasing");
    }
  }
  const auto number = spectral_decomposition(number_observable(trunc));
  const int n = trunc.levels();
  ProjectorLimitReport report;
  report.limit = ComplexMatrix::Zero(n, n);
  report.limit(0, 0) = 1.0;
  report.r_values = r_values;
  for (double r : r_values) {
    const ComplexMatrix damped = spectral_function(number, [r](double k) { return Complex(std::exp(-r * k), 0.0); });
    report.distances.push_back(cstar_norm(damped - report.limit));
    report.expected.push_back(std::exp(-r));
  }
  report.monotone = std::is_sorted(report.distances.rbegin(), report.distances.rend());
  const Hamiltonian h(Observable::from_matrix(trunc.hamiltonian()));
  report.limit_is_ground_projector = max_abs_entry(ground_projector(h) - report.limit) <= 1e-12;
  return report;
}

double auxiliary_vanishing(const FockTruncation& trunc, int k, int l, double r) {
  if (k < 1 || l < 1) throw Error(ErrorCode::InvalidArgument, "auxiliary_vanishing: k and l must be >= 1");
  const auto number = spectral_decomposition(number_observable(trunc));
  const ComplexMatrix damped = spectral_function(number, [r](double m) { return Complex(std::exp(-r * m), 0.0); });
  const int n = trunc.levels();
  ComplexMatrix word = ComplexMatrix::Identity(n, n);
  for (int i = 0; i < k; ++i) word = word * trunc.raising();
  for (int i = 0; i < l; ++i) word = word * trunc.lowering();
  return cstar_norm(damped * word * damped);
}

Complex causal_propagator(double t, double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "causal_propagator: nu must be positive");
  return Complex(0.0, 1.0) * std::polar(1.0, -nu * std::abs(t)) / (2.0 * nu);
}

long long pairing_count(int n) {
  if (n < 0 || n % 2 != 0) return 0;
  long long count = 1;
  for (int k = n - 1; k > 1; k -= 2) count *= k;
  return count;
}

Complex green_wick(const GreenRequest& req) {
  for (double t : req.times) {
    if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "green_wick: non-finite time");
  }
  if (req.times.size() % 2 != 0) return Complex(0.0, 0.0);
  std::vector<bool> used(req.times.size(), false);
  return pairing_sum(req.times, used, req.truncation.nu());
}

Complex green_operator_at(const FockTruncation& trunc, const std::vector<double>& times) {
  for (double t : times) {
    if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "green_operator: non-finite time");
  }
  // Chronological order: latest time leftmost; ties keep input order.
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] > times[b]; });

  const int n = trunc.levels();
  const ComplexMatrix q = trunc.position();
  const double nu = trunc.nu();
  // Row vector <0| multiplied from the left keeps the cost at O(n N^2).
  Eigen::RowVectorXcd bra = Eigen::RowVectorXcd::Zero(n);
  bra(0) = 1.0;
  for (std::size_t idx : order) {
    const double t = times[idx];
    ComplexMatrix qt(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) qt(j, k) = q(j, k) * std::polar(1.0, nu * (j - k) * t);
    }
    bra = bra * qt;
  }
  return bra(0);
}

Complex green_operator(const GreenRequest& req, double tol) {
  const Complex value = green_operator_at(req.truncation, req.times);
  const FockTruncation doubled(2 * req.truncation.levels(), req.truncation.nu());
  const Complex reference = green_operator_at(doubled, req.times);
  if (std::abs(value - reference) > tol * std::max(1.0, std::abs(reference))) {
    throw Error(ErrorCode::TruncationInsufficient,
                "green_operator: truncation at N = " + std::to_string(req.truncation.levels()) +
                    " moves by more than tol under doubling");
  }
  return value;
}

}  // namespace cqm
