#include "cqm/contexts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "cqm/error.hpp"
#include "cqm/rng.hpp"

namespace cqm {

namespace {

using Key = std::vector<std::int64_t>;

Key column_key(const ComplexMatrix& basis, Eigen::Index col) {
  Key key;
  key.reserve(static_cast<std::size_t>(2 * basis.rows()));
  for (Eigen::Index r = 0; r < basis.rows(); ++r) {
    key.push_back(std::llround(basis(r, col).real() / kCanonicalResolution));
    key.push_back(std::llround(basis(r, col).imag() / kCanonicalResolution));
  }
  return key;
}

Key basis_key(const ComplexMatrix& basis) {
  Key key;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const Key col = column_key(basis, c);
    key.insert(key.end(), col.begin(), col.end());
  }
  return key;
}

// Orthonormal basis of range(P) built by Gram-Schmidt on P e_0, P e_1, ...
// Depends only on the subspace, not on how it was found.
ComplexMatrix canonical_completion(const ComplexMatrix& block) {
  const Eigen::Index n = block.rows();
  const Eigen::Index m = block.cols();
  const ComplexMatrix proj = block * block.adjoint();
  ComplexMatrix out(n, m);
  Eigen::Index found = 0;
  auto residual = [&](Eigen::Index j) {
    ComplexVector v = proj.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < found; ++c) v -= out.col(c) * out.col(c).dot(v);
    }
    return v;
  };
  for (Eigen::Index j = 0; j < n && found < m; ++j) {
    ComplexVector v = residual(j);
    const double norm = v.norm();
    if (norm > 1e-4) out.col(found++) = v / norm;
  }
  // Pivoted fallback for nearly-coordinate-aligned subspaces.
  while (found < m) {
    Eigen::Index best = 0;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double norm = residual(j).norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = j;
      }
    }
    ComplexVector v = residual(best);
    out.col(found++) = v / v.norm();
  }
  return out;
}

struct Refinement {
  std::vector<ComplexMatrix> blocks;
};

// Splits every block into eigenspaces of the compression of `a`.
Refinement refine(const Refinement& current, const ComplexMatrix& a, double tol) {
  Refinement next;
  for (const ComplexMatrix& v : current.blocks) {
    if (v.cols() == 1) {
      next.blocks.push_back(v);
      continue;
    }
    ComplexMatrix compressed = v.adjoint() * a * v;
    compressed = (compressed + compressed.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(compressed);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::ConvergenceFailure, "joint_context: eigensolver did not converge");
    }
    const Eigen::VectorXd& values = solver.eigenvalues();
    const ComplexMatrix rotated = v * solver.eigenvectors();
    Eigen::Index start = 0;
    while (start < values.size()) {
      Eigen::Index stop = start + 1;
      while (stop < values.size() && values(stop) - values(stop - 1) <= tol) ++stop;
      next.blocks.push_back(rotated.middleCols(start, stop - start));
      start = stop;
    }
  }
  return next;
}

double spectral_scale(const ComplexMatrix& a) { return cstar_norm(a); }

bool diagonalizes(const ComplexMatrix& basis, const std::vector<Observable>& obs, double tol) {
  for (const Observable& a : obs) {
    const double limit = tol * spectral_scale(a.matrix());
    if (max_off_diagonal(basis.adjoint() * a.matrix() * basis) > limit) return false;
  }
  return true;
}

ComplexMatrix assemble(const std::vector<ComplexMatrix>& blocks, Eigen::Index n) {
  ComplexMatrix basis(n, n);
  Eigen::Index col = 0;
  for (const ComplexMatrix& b : blocks) {
    basis.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  return basis;
}

Refinement refine_all(const std::vector<const ComplexMatrix*>& mats, Eigen::Index n, double tol) {
  Refinement r;
  r.blocks.push_back(ComplexMatrix::Identity(n, n));
  for (const ComplexMatrix* m : mats) {
    const double scale = spectral_scale(*m);
    r = refine(r, *m, std::max(tol, 1e-12) * scale);
  }
  return r;
}

}  // namespace

ObservableFamily::ObservableFamily(std::vector<std::string> labels,
                                   std::vector<Observable> observables) {
  if (labels.size() != observables.size()) {
    throw Error(ErrorCode::InvalidArgument, "ObservableFamily: labels and observables differ in length");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) add(std::move(labels[i]), std::move(observables[i]));
}

void ObservableFamily::add(std::string label, Observable observable) {
  if (std::find(labels_.begin(), labels_.end(), label) != labels_.end()) {
    throw Error(ErrorCode::InvalidArgument, "ObservableFamily: duplicate label '" + label + "'");
  }
  if (!observables_.empty() && observable.dim() != dim()) {
    throw Error(ErrorCode::DimMismatch, "ObservableFamily: observable '" + label + "' has wrong dim");
  }
  labels_.push_back(std::move(label));
  observables_.push_back(std::move(observable));
}

ComplexMatrix canonicalize_basis(const ComplexMatrix& basis) {
  ComplexMatrix out = basis;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const Complex z = out(r, c);
      const double mag = std::abs(z);
      if (mag <= 1e-12) continue;
      if (z.imag() != 0.0 || z.real() < 0.0) {
        out.col(c) *= std::conj(z) / mag;
        out(r, c) = Complex(mag, 0.0);
      }
      break;
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(out.cols()));
  std::vector<Key> keys;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    order[static_cast<std::size_t>(c)] = c;
    keys.push_back(column_key(out, c));
  }
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return keys[static_cast<std::size_t>(a)] > keys[static_cast<std::size_t>(b)];
  });
  ComplexMatrix sorted(out.rows(), out.cols());
  for (std::size_t i = 0; i < order.size(); ++i) sorted.col(static_cast<Eigen::Index>(i)) = out.col(order[i]);
  return sorted;
}

std::string context_id(const ComplexMatrix& canonical_basis) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::int64_t v : basis_key(canonical_basis)) {
    auto u = static_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (u >> (8 * byte)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "ctx-%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

bool same_canonical_basis(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && basis_key(a) == basis_key(b);
}

Context joint_context(const std::vector<Observable>& commuting, double tol,
                      std::vector<std::string> labels) {
  if (commuting.empty()) throw Error(ErrorCode::InvalidArgument, "joint_context: empty observable list");
  const Eigen::Index n = commuting.front().dim();
  for (const Observable& a : commuting) {
    if (a.dim() != n) throw Error(ErrorCode::DimMismatch, "joint_context: observables differ in dimension");
  }
  for (std::size_t i = 0; i < commuting.size(); ++i) {
    for (std::size_t j = i + 1; j < commuting.size(); ++j) {
      const double residual = cstar_norm(commuting[i].matrix() * commuting[j].matrix() -
                                         commuting[j].matrix() * commuting[i].matrix());
      if (residual > tol) throw NotCommutingError(i, j, residual);
    }
  }

  std::vector<const ComplexMatrix*> mats;
  for (const Observable& a : commuting) mats.push_back(&a.matrix());
  Refinement r = refine_all(mats, n, tol);
  if (!diagonalizes(assemble(r.blocks, n), commuting, tol)) {
    // Generic combination separates every joint eigenspace at once.
    const CounterRng rng(0x5eedc0de, commuting.size());
    ComplexMatrix combo = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < commuting.size(); ++i) {
      const double norm = cstar_norm(commuting[i].matrix());
      if (norm > 0) combo += (0.5 + rng.uniform(i)) / norm * commuting[i].matrix();
    }
    std::vector<const ComplexMatrix*> one{&combo};
    r = refine_all(one, n, tol);
    if (!diagonalizes(assemble(r.blocks, n), commuting, tol)) {
      throw Error(ErrorCode::ConvergenceFailure, "joint_context: simultaneous diagonalization failed");
    }
  }

  bool maximal = true;
  for (ComplexMatrix& block : r.blocks) {
    if (block.cols() > 1) {
      maximal = false;
      block = canonical_completion(block);
    }
  }
  Context ctx;
  ctx.basis = canonicalize_basis(assemble(r.blocks, n));
  ctx.id = context_id(ctx.basis);
  ctx.maximal_within_family = maximal;
  if (labels.empty()) {
    for (std::size_t i = 0; i < commuting.size(); ++i) labels.push_back("A" + std::to_string(i));
  }
  ctx.source_observables = std::move(labels);
  return ctx;
}

std::vector<std::vector<std::size_t>> maximal_cliques(const std::vector<std::vector<bool>>& adjacency,
                                                      std::size_t cap) {
  const std::size_t n = adjacency.size();
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::size_t> current;

  auto neighbors_in = [&](std::size_t v, const std::vector<std::size_t>& set) {
    std::vector<std::size_t> out;
    for (std::size_t u : set) {
      if (u != v && adjacency[v][u]) out.push_back(u);
    }
    return out;
  };

  auto expand = [&](auto&& self, std::vector<std::size_t> candidates,
                    std::vector<std::size_t> excluded) -> void {
    if (candidates.empty() && excluded.empty()) {
      std::vector<std::size_t> clique = current;
      std::sort(clique.begin(), clique.end());
      cliques.push_back(std::move(clique));
      if (cliques.size() > cap) {
        throw Error(ErrorCode::FamilyTooLarge,
                    "maximal_contexts: clique count exceeds cap " + std::to_string(cap));
      }
      return;
    }
    // Pivot: vertex of candidates u excluded with most neighbours in candidates.
    std::size_t pivot = candidates.empty() ? excluded.front() : candidates.front();
    std::size_t best = 0;
    for (const auto* set : {&candidates, &excluded}) {
      for (std::size_t u : *set) {
        const std::size_t count = neighbors_in(u, candidates).size();
        if (count > best) {
          best = count;
          pivot = u;
        }
      }
    }
    std::vector<std::size_t> branch;
    for (std::size_t v : candidates) {
      if (v == pivot || !adjacency[pivot][v]) branch.push_back(v);
    }
    for (std::size_t v : branch) {
      current.push_back(v);
      self(self, neighbors_in(v, candidates), neighbors_in(v, excluded));
      current.pop_back();
      candidates.erase(std::find(candidates.begin(), candidates.end(), v));
      excluded.push_back(v);
    }
  };

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  if (n > 0) expand(expand, all, {});
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

std::vector<Context> maximal_contexts(const ObservableFamily& family, double tol, std::size_t clique_cap) {
  if (family.size() == 0) throw Error(ErrorCode::InvalidArgument, "maximal_contexts: empty family");
  const auto& obs = family.observables();
  const std::size_t n = obs.size();
  std::vector<std::vector<bool>> adjacency(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool commute = cstar_norm(commutator(obs[i].matrix(), obs[j].matrix())) <= tol;
      adjacency[i][j] = adjacency[j][i] = commute;
    }
  }

  std::vector<Context> out;
  for (const auto& clique : maximal_cliques(adjacency, clique_cap)) {
    std::vector<Observable> members;
    std::vector<std::string> labels;
    for (std::size_t v : clique) {
      members.push_back(obs[v]);
      labels.push_back(family.labels()[v]);
    }
    Context ctx = joint_context(members, tol, labels);
    auto dup = std::find_if(out.begin(), out.end(), [&](const Context& c) {
      return same_canonical_basis(c.basis, ctx.basis);
    });
    if (dup == out.end()) {
      out.push_back(std::move(ctx));
      continue;
    }
    for (const std::string& label : ctx.source_observables) {
      if (std::find(dup->source_observables.begin(), dup->source_observables.end(), label) ==
          dup->source_observables.end()) {
        dup->source_observables.push_back(label);
      }
    }
  }
  return out;
}

bool in_context(const Observable& a, const Context& ctx, double tol) {
  if (a.dim() != ctx.dim()) {
    throw Error(ErrorCode::DimMismatch, "in_context: observable and context differ in dimension");
  }
  const ComplexMatrix rotated = ctx.basis.adjoint() * a.matrix() * ctx.basis;
  return max_off_diagonal(rotated) <= tol * cstar_norm(a.matrix());
}

std::vector<double> restrict_to(const Observable& a, const Context& ctx, double tol) {
  if (!in_context(a, ctx, tol)) {
    throw Error(ErrorCode::NotInContext, "observable does not belong to context " + ctx.id);
  }
  const ComplexMatrix rotated = ctx.basis.adjoint() * a.matrix() * ctx.basis;
  std::vector<double> values(static_cast<std::size_t>(ctx.dim()));
  for (Eigen::Index k = 0; k < ctx.dim(); ++k) values[static_cast<std::size_t>(k)] = rotated(k, k).real();
  return values;
}

const Context& find_context(const std::vector<Context>& contexts, const std::string& id) {
  auto it = std::find_if(contexts.begin(), contexts.end(), [&](const Context& c) { return c.id == id; });
  if (it == contexts.end()) throw Error(ErrorCode::InvalidArgument, "unknown context id " + id);
  return *it;
}

}  // namespace cqm
