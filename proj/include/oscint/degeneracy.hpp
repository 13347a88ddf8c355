#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscint/linalg.hpp"
#include "oscint/polynomial.hpp"

namespace oscint {

struct SplittingStep;

/// A surjective linear map Q^m → Q^κ with a label used in certificates.
struct LabeledMap {
  std::string label;
  RatMat matrix;
};

/// Spanning set of the degenerate polynomials of degree ≤ D: one column per
/// pair (map j, monomial q over the target of map j), holding the
/// coefficients of q∘π_j in the monomial basis of Q[x_1..x_m]_{≤D}.
struct DegenerateSpan {
  std::size_t num_vars = 0;
  unsigned degree = 0;
  std::vector<Exponents> basis;
  RatMat columns;
  std::vector<std::pair<std::size_t, Exponents>> sources;
  /// Pivot columns of the exact RREF: a basis of the degenerate subspace.
  std::vector<Index> independent;
  /// Nonzero rows of that RREF: a basis of the coefficient row space.
  RatMat row_basis;

  Index rank() const { return static_cast<Index>(independent.size()); }
};

/// Memoised by map contents and degree; safe to call from several threads.
/// Throws NonSurjective if a map lacks full row rank.
std::shared_ptr<const DegenerateSpan> degenerate_basis(std::span<const LabeledMap> maps, unsigned max_degree);

using Certificate = std::vector<std::pair<std::string, MultiPoly>>;

struct DegeneracyReport {
  bool is_degenerate = false;
  /// Q_j per map with Σ Q_j∘π_j = P exactly; present iff degenerate.
  std::optional<Certificate> certificate;
  double quotient_norm = 0.0;
  /// Component of P orthogonal to the degenerate subspace (coefficient ℓ²).
  RealPoly residual;
};

/// Exact decision of P ∈ span{q∘π_j}. The certificate is the minimal-ℓ²
/// coefficient solution, and the quotient norm is the ℓ² length of the
/// exact orthogonal residual.
DegeneracyReport is_degenerate(const MultiPoly& p, std::span<const LabeledMap> maps);

double nd_norm(const MultiPoly& p, std::span<const LabeledMap> maps);

/// Σ_j certificate[j]∘maps[j].
MultiPoly expand_certificate(const Certificate& certificate, std::span<const LabeledMap> maps);

/// Q(v) = P(v) − P(x(v) + z) where v = x(v) + y(v) with x(v) in `complement`
/// and y(v) in ker(alpha0_map). `z` holds coordinates of a point of
/// ker(alpha0_map) in its canonical basis.
MultiPoly slice_subtract(const MultiPoly& p, const RatMat& alpha0_map, const Subspace& complement, const RatVec& z);

/// Uses W' + W'' of the step as the complement.
MultiPoly slice_subtract(const MultiPoly& p, const SplittingStep& step, const RatMat& alpha0_map, const RatVec& z);

}  // namespace oscint
