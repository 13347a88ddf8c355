#pragma once

#include <cstdint>
#include <vector>

#include "oscint/errors.hpp"
#include "oscint/rational.hpp"

namespace oscint {

template <typename Scalar>
struct RrefResult {
  MatX<Scalar> reduced;
  Index rank = 0;
  std::vector<Index> pivots;
};

/// Reduced row echelon form over an exact field. Pivot rows are normalised
/// to a leading one and every other entry of a pivot column is cleared.
template <typename Derived>
RrefResult<typename Derived::Scalar> rref(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  RrefResult<Scalar> out;
  out.reduced = input;
  MatX<Scalar>& a = out.reduced;
  const Index rows = a.rows();
  const Index cols = a.cols();

  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index pivot = -1;
    for (Index i = r; i < rows; ++i) {
      if (a(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != r) a.row(pivot).swap(a.row(r));

    const Scalar lead = a(r, c);
    for (Index j = c; j < cols; ++j) a(r, j) /= lead;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Scalar factor = a(i, c);
      for (Index j = c; j < cols; ++j) a(i, j) -= factor * a(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

template <typename Derived>
Index exact_rank(const Eigen::MatrixBase<Derived>& m) {
  return rref(m).rank;
}

/// Columns spanning the nullspace of `m`, one per free column of its RREF.
template <typename Derived>
MatX<typename Derived::Scalar> nullspace_columns(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto rr = rref(m);
  const Index n = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index p : rr.pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  MatX<Scalar> basis = MatX<Scalar>::Zero(n, n - rr.rank);
  Index k = 0;
  for (Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    basis(free, k) = Scalar(1);
    for (Index i = 0; i < rr.rank; ++i) basis(rr.pivots[static_cast<std::size_t>(i)], k) = -rr.reduced(i, free);
    ++k;
  }
  return basis;
}

/// Linear subspace of Q^m, held in canonical form: the basis columns are the
/// transposed nonzero rows of the RREF of any spanning set. Two subspaces are
/// equal iff their representations are equal.
class Subspace {
 public:
  explicit Subspace(Index ambient_dim = 0);

  /// Span of the columns of `vectors` (m × k, any rank).
  static Subspace span(const RatMat& vectors);
  static Subspace full(Index ambient_dim);
  static Subspace zero(Index ambient_dim) { return Subspace(ambient_dim); }

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  Index codim() const { return ambient_ - dim(); }
  bool is_zero() const { return dim() == 0; }

  /// m × dim, reduced column-echelon.
  const RatMat& basis() const { return basis_; }

  /// Rows spanning the annihilator {u : u·v = 0 for all v in this}, (m − dim) × m.
  /// A matrix whose kernel is exactly this subspace.
  RatMat annihilator() const;

  bool contains(const RatVec& v) const;
  bool contains(const Subspace& other) const;

  bool operator==(const Subspace& other) const;
  bool operator!=(const Subspace& other) const { return !(*this == other); }

 private:
  Index ambient_;
  RatMat basis_;
};

Subspace kernel(const RatMat& map);
Subspace image(const RatMat& map);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);

/// Random subspace spanned by `dim` integer vectors with entries uniform in
/// [−coeff_bound, coeff_bound]; redrawn until independent (at most 64 draws).
Subspace random_subspace(Index ambient_dim, Index dim, std::uint64_t seed, int coeff_bound = 10);

/// Whether the rows of `rows` are linearly independent. A rank computation
/// modulo a 61-bit prime settles the common case; exact rational elimination
/// is used only when the modular rank is deficient.
bool rows_independent(const RatMat& rows);

/// Exact solution X of A·X = B when one exists (any particular solution,
/// free variables zero). Returns false if the system is inconsistent.
bool solve_exact(const RatMat& a, const RatMat& b, RatMat& x);

}  // namespace oscint
