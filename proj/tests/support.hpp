#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cqm/algebra.hpp"
#include "cqm/contexts.hpp"
#include "cqm/error.hpp"

namespace cqm::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double real(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::uint64_t seed() { return eng_(); }

  ComplexMatrix matrix(Eigen::Index rows, Eigen::Index cols);
  ComplexMatrix matrix(Eigen::Index n) { return matrix(n, n); }
  ComplexMatrix hermitian(Eigen::Index n);
  ComplexMatrix unitary(Eigen::Index n);
  ComplexVector unit_vector(Eigen::Index n);
  // Hermitian PSD, trace one, with the requested rank.
  ComplexMatrix density(Eigen::Index n, Eigen::Index rank);
  // V diag(levels) V^dagger for a random unitary V.
  ComplexMatrix with_spectrum(const std::vector<double>& levels);

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Spin-1 components in the S_z basis (hbar = 1).
ComplexMatrix spin1(int axis);
// Component along the unit vector (nx, ny, nz).
ComplexMatrix spin1_along(double nx, double ny, double nz);

// Padé matrix exponential of i t H, independent of the spectral route.
ComplexMatrix expm_i(const ComplexMatrix& h, double t);

// Largest singular value by power iteration on R^dagger R.
double power_norm(const ComplexMatrix& r, int iterations = 2000);

// (1/2L) int_{-L}^{L} U^{-1} A U dt by the trapezoid rule, U(t) = exp(i t H).
ComplexMatrix trapezoid_time_average(const ComplexMatrix& a, const ComplexMatrix& h, double L, double dt);

// Every maximal clique by subset enumeration (n <= 20).
std::vector<std::vector<std::size_t>> brute_force_cliques(const std::vector<std::vector<bool>>& adj);

bool is_identity(const ComplexMatrix& m, double tol);

// Writes content to a fresh file under the system temp directory.
std::string temp_file(const std::string& name, const std::string& content);

// Input files for every CLI subcommand: family, prep, weight, negative_weight, instance.
std::map<std::string, std::string> cli_fixture_files();

// Code of the cqm::Error thrown by f, or nullopt when nothing was thrown.
template <class F>
std::optional<ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace cqm::test
