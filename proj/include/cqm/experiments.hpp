#pragma once

#include <array>
#include <numbers>
#include <cstdint>
#include <string>
#include <vector>

#include "cqm/probability.hpp"

namespace cqm {

// ---------------------------------------------------------------- CHSH

/// Device settings are polarizer-style angles: setting x measures the spin
/// along (sin 2x, 0, cos 2x), so theta_ab = 2|a - b| (mod the sphere).
struct CHSHConfig {
  double a = 0.0;
  double a_prime = std::numbers::pi / 4.0;
  double b = std::numbers::pi / 8.0;
  double b_prime = 3.0 * std::numbers::pi / 8.0;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
};

struct CHSHSetting {
  std::string label;  // "ab", "ab'", "a'b", "a'b'"
  double alice = 0.0;
  double bob = 0.0;
  double theta = 0.0;
  std::string context_id;
  SampleSet samples;
  double e_exact = 0.0;
  double e_hat = 0.0;
  double stderr_ = 0.0;
};

struct CHSHReport {
  std::array<CHSHSetting, 4> settings;
  double i_hat = 0.0;
  double i_stderr = 0.0;
  double i_exact = 0.0;
};

std::array<double, 3> measurement_direction(double setting);

/// Angle between the measurement directions of two settings.
double setting_angle(double a, double b);

/// (1/2) sigma(n) for the setting's direction.
ComplexMatrix spin_half_observable(double setting);

/// Singlet (|01> - |10>)/sqrt2 as the joint eigenvector of the Bell context.
QuantumState singlet_state();

/// Joint context of A_a (x) I and I (x) B_b.
Context chsh_context(double a, double b);

/// E(a,b) = Psi(A_a B_b) for the singlet.
double chsh_correlation_exact(double a, double b);

double chsh_combination(double e_ab, double e_abp, double e_apb, double e_apbp);

CHSHReport chsh_run(const CHSHConfig& cfg);

enum class HiddenVariableModel {
  SignOfDot,  // lambda uniform on the circle, outcomes from sign(n . lambda)
  Constant,   // fixed outcomes, lambda ignored
};

struct ClassicalReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  HiddenVariableModel model = HiddenVariableModel::SignOfDot;
  std::array<double, 4> e_hat{};
  double i_hat = 0.0;
  double i_stderr = 0.0;
  bool within_bound = false;          // I_hat <= 1/2 + 3 stderr
  std::uint64_t dichotomy_violations = 0;
};

/// One shared sample of noncontextual assignments lambda -> (A_a, B_b) in
/// {+-1/2} for all four settings.
ClassicalReport classical_chsh_baseline(const CHSHConfig& angles, std::uint64_t seed, std::uint64_t trials,
                                        HiddenVariableModel model = HiddenVariableModel::SignOfDot);

/// For B, B' in {+-1/2}: one of |B - B'|, |B + B'| is 0, the other 1.
bool pointwise_dichotomy(double b, double b_prime);

// -------------------------------------------------------- Kochen-Specker

struct KSInstance {
  Eigen::Index dim = 0;
  std::vector<ComplexVector> rays;
  std::vector<std::vector<int>> contexts;

  /// Normalizes rays and checks every context is an orthonormal basis.
  /// Throws InvalidInstance.
  static KSInstance make(Eigen::Index dim, std::vector<ComplexVector> rays,
                         std::vector<std::vector<int>> contexts);
};

/// The standard 18-ray, 9-context set in dimension 4.
KSInstance builtin_18ray();

struct KSResult {
  bool colorable = false;
  std::vector<int> witness;        // 0/1 per ray (rays outside every context stay 0)
  std::uint64_t witness_count = 0; // number of colorings (capped)
  std::uint64_t nodes = 0;
};

/// Exhaustive search for a {0,1} coloring with exactly one 1 per context.
KSResult ks_check(const KSInstance& instance, std::uint64_t witness_cap = 1ULL << 20);

// ------------------------------------------------------ Pauli walkthrough

struct PauliWalkthrough {
  ComplexMatrix a;
  double r0 = 0.0;
  double r = 0.0;
  std::array<double, 3> n{};
  double reconstruction_error = 0.0;
  std::array<double, 2> phi{};           // phi(A) on the f(n) = +1 and -1 branches
  std::array<double, 2> phi_expected{};  // r0 + r f(n)
  bool antisymmetric = false;            // f(-n) = -f(n)
  ComplexMatrix time_average;
  double time_average_error = 0.0;       // vs diag(a, d)
  double psi0 = 0.0;
  double psi0_error = 0.0;               // vs d
  double ground_branch_value = 0.0;      // phi_0(A_bar) with f(z) = -1
  bool passed = false;
};

/// Walks through the two-level example with H = E0 tau_3.
PauliWalkthrough pauli_walkthrough(const ComplexMatrix& a, double e0 = 1.0);
PauliWalkthrough pauli_walkthrough();

}  // namespace cqm
