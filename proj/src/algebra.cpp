#include "cqm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cqm/error.hpp"

namespace cqm {

void require_square_finite(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a nonempty square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimMismatch, os.str());
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + ": matrix has NaN or Inf entries");
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw Error(ErrorCode::DimMismatch, os.str());
  }
}

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_off_diagonal(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    }
  }
  return worst;
}

Observable Observable::from_matrix(const ComplexMatrix& entries, double hermiticity_tol) {
  require_square_finite(entries, "make_observable");
  const double deviation = max_abs_entry(entries - entries.adjoint());
  if (deviation > hermiticity_tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max|A - A^dagger| = " << deviation << " > " << hermiticity_tol;
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  Observable obs;
  obs.matrix_ = (entries + entries.adjoint()) / 2.0;
  obs.hermiticity_tol_ = hermiticity_tol;
  return obs;
}

Observable make_observable(const ComplexMatrix& entries, double hermiticity_tol) {
  return Observable::from_matrix(entries, hermiticity_tol);
}

Eigen::Index SpectralDecomposition::dim() const {
  return projectors.empty() ? 0 : projectors.front().rows();
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) out += eigenvalues[i] * projectors[i];
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b);
  return a * b - b * a;
}

SpectralDecomposition spectral_decomposition(const Observable& a,
                                             std::optional<double> degeneracy_tol) {
  const ComplexMatrix& m = a.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  const ComplexMatrix& vectors = solver.eigenvectors();
  const double scale = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  const double tol = degeneracy_tol.value_or(kRelativeDegeneracyTol * scale);

  SpectralDecomposition out;
  Eigen::Index start = 0;
  const Eigen::Index n = values.size();
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && values(stop) - values(stop - 1) <= tol) ++stop;
    const Eigen::Index count = stop - start;
    const ComplexMatrix block = vectors.middleCols(start, count);
    out.eigenvalues.push_back(values.segment(start, count).mean());
    out.projectors.push_back(block * block.adjoint());
    out.multiplicities.push_back(static_cast<int>(count));
    out.eigenvectors.push_back(block);
    start = stop;
  }
  return out;
}

std::vector<double> spectrum(const Observable& a, std::optional<double> degeneracy_tol) {
  return spectral_decomposition(a, degeneracy_tol).eigenvalues;
}

ComplexMatrix spectral_function(const SpectralDecomposition& d,
                                const std::function<Complex(double)>& f) {
  ComplexMatrix out = ComplexMatrix::Zero(d.dim(), d.dim());
  for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) out += f(d.eigenvalues[i]) * d.projectors[i];
  return out;
}

double cstar_norm(const ComplexMatrix& r) {
  if (!r.allFinite()) throw Error(ErrorCode::NonFinite, "cstar_norm: non-finite entries");
  if (r.size() == 0) return 0.0;
  const ComplexMatrix gram = r.adjoint() * r;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "cstar_norm: eigensolver did not converge");
  }
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

bool check_cstar_identity(const ComplexMatrix& r, double tol) {
  const double norm = cstar_norm(r);
  const double norm_sq = norm * norm;
  const double star_norm = cstar_norm(r.adjoint() * r);
  return std::abs(star_norm - norm_sq) <= tol * norm_sq;
}

Observable positive_root(const ComplexMatrix& r) {
  require_square_finite(r, "positive_root");
  const ComplexMatrix gram = r.adjoint() * r;
  const auto d = spectral_decomposition(Observable::from_matrix(gram, 1e-8 * (1.0 + max_abs_entry(gram))));
  return Observable::from_matrix(
      spectral_function(d, [](double x) { return Complex(std::sqrt(std::max(0.0, x)), 0.0); }));
}

ComplexMatrix pauli(int k) {
  const Complex i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw Error(ErrorCode::InvalidArgument, "pauli index must be 0..3");
  }
  return m;
}

ComplexMatrix pauli_direction(double n1, double n2, double n3) {
  return n1 * pauli(1) + n2 * pauli(2) + n3 * pauli(3);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace cqm
