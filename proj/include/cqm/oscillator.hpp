#pragma once

#include <vector>

#include "cqm/algebra.hpp"

namespace cqm {

/// Lowest `levels` Fock states of a harmonic oscillator with frequency nu.
/// [a-, a+] = I holds on the span of the lowest levels - 1 states only.
class FockTruncation {
 public:
  FockTruncation(int levels, double nu);

  int levels() const noexcept { return levels_; }
  double nu() const noexcept { return nu_; }
  const ComplexMatrix& lowering() const noexcept { return lowering_; }
  const ComplexMatrix& raising() const noexcept { return raising_; }

  ComplexMatrix number() const { return raising_ * lowering_; }
  ComplexMatrix position() const;  // Q = (a- + a+) / sqrt(2 nu)
  ComplexMatrix momentum() const;  // P = i sqrt(nu / 2) (a+ - a-)
  ComplexMatrix hamiltonian() const;  // nu (a+ a- + 1/2)

 private:
  int levels_;
  double nu_;
  ComplexMatrix lowering_;
  ComplexMatrix raising_;
};

FockTruncation build_truncation(int levels, double nu);

struct ProjectorLimitReport {
  std::vector<double> r_values;
  std::vector<double> distances;  // ||exp(-r N) - |0><0|||
  std::vector<double> expected;   // exp(-r)
  bool monotone = false;
  ComplexMatrix limit;            // |0><0|
  bool limit_is_ground_projector = false;
};

ProjectorLimitReport ground_projector_limit(const FockTruncation& trunc, const std::vector<double>& r_values);

/// ||exp(-r N) (a+)^k (a-)^l exp(-r N)||.
double auxiliary_vanishing(const FockTruncation& trunc, int k, int l, double r);

/// Closed form of (1/2pi) int dE exp(-i t E) / (nu^2 - E^2 - i0):
/// i exp(-i nu |t|) / (2 nu).
Complex causal_propagator(double t, double nu);

struct GreenRequest {
  std::vector<double> times;
  FockTruncation truncation;
};

/// Sum over perfect pairings of the two-point factors generated by
/// differentiating Z(j) = exp((i/2) jD^c j); odd orders are exactly 0.
Complex green_wick(const GreenRequest& req);

/// <0| T Q(t_1) ... Q(t_n) |0> in the truncation, Q(t) = e^{iHt} Q e^{-iHt}.
Complex green_operator_at(const FockTruncation& trunc, const std::vector<double>& times);

/// green_operator_at with an N vs 2N stability check; throws
/// TruncationInsufficient when the two differ by more than tol.
Complex green_operator(const GreenRequest& req, double tol = 1e-10);

/// Number of perfect pairings of n points ((n-1)!! for even n, 0 otherwise).
long long pairing_count(int n);

}  // namespace cqm
