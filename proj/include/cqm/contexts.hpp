#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cqm/algebra.hpp"

namespace cqm {

inline constexpr double kDefaultCommutationTol = 1e-9;
inline constexpr double kBasisUnitaryTol = 1e-10;
// Resolution used to order and compare canonical basis columns.
inline constexpr double kCanonicalResolution = 1e-8;
inline constexpr std::size_t kDefaultCliqueCap = 1'000'000;

/// A maximal commutative subalgebra, represented by an orthonormal joint
/// eigenbasis in canonical form. Columns are the joint eigenvectors; a
/// valuation on the context picks one column.
struct Context {
  std::string id;
  ComplexMatrix basis;
  std::vector<std::string> source_observables;
  bool maximal_within_family = true;

  Eigen::Index dim() const noexcept { return basis.rows(); }
  ComplexVector vector(Eigen::Index k) const { return basis.col(k); }
  ComplexMatrix projector(Eigen::Index k) const { return basis.col(k) * basis.col(k).adjoint(); }
};

/// Finite generating family standing in for the set of all maximal
/// subalgebras; contexts are only ever discovered inside such a family.
class ObservableFamily {
 public:
  ObservableFamily() = default;
  ObservableFamily(std::vector<std::string> labels, std::vector<Observable> observables);

  void add(std::string label, Observable observable);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Observable>& observables() const noexcept { return observables_; }
  std::size_t size() const noexcept { return observables_.size(); }
  Eigen::Index dim() const noexcept { return observables_.empty() ? 0 : observables_.front().dim(); }

 private:
  std::vector<std::string> labels_;
  std::vector<Observable> observables_;
};

/// Fixes each column's phase (first component with magnitude > 1e-12 made
/// real positive) and orders columns descending by their rounded components.
/// Idempotent bit-for-bit.
ComplexMatrix canonicalize_basis(const ComplexMatrix& basis);

/// Stable id derived from the rounded canonical basis.
std::string context_id(const ComplexMatrix& canonical_basis);

/// True when two canonical bases agree at kCanonicalResolution.
bool same_canonical_basis(const ComplexMatrix& a, const ComplexMatrix& b);

/// Simultaneous diagonalization of a commuting list by sequential eigenspace
/// refinement. Throws NotCommutingError if some ||[A_i, A_j]|| > tol.
Context joint_context(const std::vector<Observable>& commuting,
                      double tol = kDefaultCommutationTol,
                      std::vector<std::string> labels = {});

/// All maximal commuting subsets of the family (maximal cliques of the
/// commutation graph), one Context each, deduplicated by canonical basis.
std::vector<Context> maximal_contexts(const ObservableFamily& family,
                                      double tol = kDefaultCommutationTol,
                                      std::size_t clique_cap = kDefaultCliqueCap);

/// Maximal cliques of an undirected graph given as an adjacency matrix
/// (Bron-Kerbosch with Tomita pivoting). Each clique is sorted ascending and
/// the list is sorted lexicographically.
std::vector<std::vector<std::size_t>> maximal_cliques(const std::vector<std::vector<bool>>& adjacency,
                                                      std::size_t cap = kDefaultCliqueCap);

bool in_context(const Observable& a, const Context& ctx, double tol = kDefaultCommutationTol);

/// Diagonal values <e_k|A|e_k> in context order. Throws NotInContext.
std::vector<double> restrict_to(const Observable& a, const Context& ctx,
                                double tol = kDefaultCommutationTol);

const Context& find_context(const std::vector<Context>& contexts, const std::string& id);

}  // namespace cqm
