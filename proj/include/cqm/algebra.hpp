#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace cqm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultHermiticityTol = 1e-10;
inline constexpr double kRelativeDegeneracyTol = 1e-9;

/// Hermitian element of the matrix algebra. Construction checks the
/// deviation from self-adjointness against a tolerance and then stores the
/// symmetrized matrix (A + A^dagger) / 2.
class Observable {
 public:
  Observable() = default;

  static Observable from_matrix(const ComplexMatrix& entries,
                                double hermiticity_tol = kDefaultHermiticityTol);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  double hermiticity_tol() const noexcept { return hermiticity_tol_; }

 private:
  ComplexMatrix matrix_;
  double hermiticity_tol_ = kDefaultHermiticityTol;
};

Observable make_observable(const ComplexMatrix& entries,
                           double hermiticity_tol = kDefaultHermiticityTol);

/// Point spectrum of a Hermitian matrix: distinct eigenvalues (ascending)
/// with their orthogonal projectors.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<ComplexMatrix> projectors;
  std::vector<int> multiplicities;
  // Orthonormal eigenvectors of each eigenvalue, one matrix per cluster.
  std::vector<ComplexMatrix> eigenvectors;

  Eigen::Index dim() const;
  ComplexMatrix reconstruct() const;
};

// Throws DimMismatch / NonFinite.
void require_square_finite(const ComplexMatrix& m, const char* what);
void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigenvalues closer than degeneracy_tol are merged into one cluster.
/// The default threshold is kRelativeDegeneracyTol * ||A||.
SpectralDecomposition spectral_decomposition(const Observable& a,
                                             std::optional<double> degeneracy_tol = {});

std::vector<double> spectrum(const Observable& a,
                             std::optional<double> degeneracy_tol = {});

/// f(A) = sum_i f(lambda_i) P_i for complex-valued f.
ComplexMatrix spectral_function(const SpectralDecomposition& d,
                                const std::function<Complex(double)>& f);

/// ||R|| = sqrt(lambda_max(R^dagger R)).
double cstar_norm(const ComplexMatrix& r);

/// |(||R^* R|| - ||R||^2)| <= tol * ||R||^2.
bool check_cstar_identity(const ComplexMatrix& r, double tol);

/// The Hermitian A = sqrt(R^dagger R), so that R^* R = A^2.
Observable positive_root(const ComplexMatrix& r);

/// Largest |entry| of the off-diagonal part.
double max_off_diagonal(const ComplexMatrix& m);

double max_abs_entry(const ComplexMatrix& m);

// Pauli matrices tau_1..tau_3 (k = 0 gives the identity).
ComplexMatrix pauli(int k);

/// tau(n) = n_1 tau_1 + n_2 tau_2 + n_3 tau_3.
ComplexMatrix pauli_direction(double n1, double n2, double n3);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace cqm
