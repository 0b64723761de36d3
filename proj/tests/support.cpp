#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include <unsupported/Eigen/MatrixFunctions>

namespace cqm::test {

ComplexMatrix Gen::matrix(Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(normal(), normal());
  return m;
}

ComplexMatrix Gen::hermitian(Eigen::Index n) {
  const ComplexMatrix m = matrix(n);
  return (m + m.adjoint()) * 0.5;
}

ComplexMatrix Gen::unitary(Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(matrix(n));
  ComplexMatrix q = qr.householderQ();
  // fix the phases of R's diagonal so the distribution is Haar
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

ComplexVector Gen::unit_vector(Eigen::Index n) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(normal(), normal());
  return v / v.norm();
}

ComplexMatrix Gen::density(Eigen::Index n, Eigen::Index rank) {
  const ComplexMatrix b = matrix(n, rank);
  ComplexMatrix w = b * b.adjoint();
  w /= w.trace().real();
  return (w + w.adjoint()) * 0.5;
}

ComplexMatrix Gen::with_spectrum(const std::vector<double>& levels) {
  const auto n = static_cast<Eigen::Index>(levels.size());
  const ComplexMatrix v = unitary(n);
  Eigen::VectorXd d(n);
  for (Eigen::Index k = 0; k < n; ++k) d(k) = levels[static_cast<std::size_t>(k)];
  const ComplexMatrix m = v * d.cast<Complex>().asDiagonal() * v.adjoint();
  return (m + m.adjoint()) * 0.5;
}

ComplexMatrix spin1(int axis) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0, 1);
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  switch (axis) {
    case 0:
      m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = s;
      break;
    case 1:
      m(0, 1) = -i * s;
      m(1, 0) = i * s;
      m(1, 2) = -i * s;
      m(2, 1) = i * s;
      break;
    default:
      m(0, 0) = 1.0;
      m(2, 2) = -1.0;
  }
  return m;
}

ComplexMatrix spin1_along(double nx, double ny, double nz) {
  return nx * spin1(0) + ny * spin1(1) + nz * spin1(2);
}

ComplexMatrix expm_i(const ComplexMatrix& h, double t) {
  const ComplexMatrix x = Complex(0, t) * h;
  return x.exp();
}

double power_norm(const ComplexMatrix& r, int iterations) {
  const ComplexMatrix g = r.adjoint() * r;
  ComplexVector v = ComplexVector::Ones(r.cols());
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) += Complex(0.01 * static_cast<double>(k), 0.003 * k * k);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    ComplexVector w = g * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    lambda = n;
  }
  return std::sqrt(lambda);
}

ComplexMatrix trapezoid_time_average(const ComplexMatrix& a, const ComplexMatrix& h, double L, double dt) {
  const auto steps = static_cast<long long>(std::ceil(2.0 * L / dt));
  const double step = 2.0 * L / static_cast<double>(steps);
  const ComplexMatrix u_step = expm_i(h, step);
  ComplexMatrix u = expm_i(h, -L);
  ComplexMatrix acc = ComplexMatrix::Zero(a.rows(), a.cols());
  for (long long k = 0; k <= steps; ++k) {
    const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
    acc += w * (u.adjoint() * a * u);
    u = u * u_step;
  }
  return acc * (step / (2.0 * L));
}

std::vector<std::vector<std::size_t>> brute_force_cliques(const std::vector<std::vector<bool>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::uint32_t> cliques;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if ((mask >> i & 1u) && (mask >> j & 1u) && !adj[i][j]) ok = false;
    if (!ok) continue;
    bool maximal = true;
    for (std::size_t v = 0; v < n && maximal; ++v) {
      if (mask >> v & 1u) continue;
      bool joins = true;
      for (std::size_t u = 0; u < n; ++u)
        if ((mask >> u & 1u) && !adj[u][v]) joins = false;
      if (joins) maximal = false;
    }
    if (maximal) cliques.push_back(mask);
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask : cliques) {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) c.push_back(i);
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_identity(const ComplexMatrix& m, double tol) {
  return (m - ComplexMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / ("cqm-test-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

std::map<std::string, std::string> cli_fixture_files() {
  // spin-1 squares plus S_z: two contexts sharing S_z^2
  const char* family = R"({
  "dim": 3,
  "observables": [
    {"label": "Sx2", "matrix": {"dim": 3, "re": [[0.5, 0, 0.5], [0, 1, 0], [0.5, 0, 0.5]]}},
    {"label": "Sy2", "matrix": {"dim": 3, "re": [[0.5, 0, -0.5], [0, 1, 0], [-0.5, 0, 0.5]]}},
    {"label": "Sz2", "matrix": {"dim": 3, "re": [[1, 0, 0], [0, 0, 0], [0, 0, 1]]}},
    {"label": "Sz", "matrix": {"dim": 3, "re": [[1, 0, 0], [0, 0, 0], [0, 0, -1]]}}
  ]
})";
  const char* prep = R"({"re": [0.48, 0.6, 0], "im": [0, 0, 0.64]})";
  const char* weight = R"({"dim": 2, "re": [[0.7, 0.1], [0.1, 0.3]], "im": [[0, -0.2], [0.2, 0]]})";
  const char* negative = R"({"dim": 2, "re": [[1.5, 0], [0, -0.5]]})";
  const char* instance = R"({"dim": 3, "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, 1], [0, 1, -1]],
  "contexts": [[0, 1, 2], [0, 3, 4]]})";
  return {{"family", temp_file("family.json", family)},
          {"prep", temp_file("prep.json", prep)},
          {"weight", temp_file("weight.json", weight)},
          {"negative_weight", temp_file("negative_weight.json", negative)},
          {"instance", temp_file("instance.json", instance)}};
}

}  // namespace cqm::test
