#include "oscint/degeneracy.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "oscint/resolution.hpp"

namespace oscint {

namespace {

std::string cache_key(std::span<const LabeledMap> maps, unsigned degree) {
  std::ostringstream key;
  key << degree;
  for (const auto& m : maps) {
    key << '|' << m.matrix.rows() << 'x' << m.matrix.cols() << ':';
    for (Index i = 0; i < m.matrix.rows(); ++i)
      for (Index j = 0; j < m.matrix.cols(); ++j) key << to_string(m.matrix(i, j)) << ',';
  }
  return key.str();
}

class SpanCache {
 public:
  std::shared_ptr<const DegenerateSpan> find(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : it->second;
  }
  std::shared_ptr<const DegenerateSpan> insert(const std::string& key, std::shared_ptr<const DegenerateSpan> value) {
    std::unique_lock lock(mutex_);
    if (entries_.size() > 256) entries_.clear();
    return entries_.emplace(key, std::move(value)).first->second;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const DegenerateSpan>> entries_;
};

SpanCache& span_cache() {
  static SpanCache cache;
  return cache;
}

void require_maps(std::span<const LabeledMap> maps, std::size_t num_vars) {
  for (const auto& m : maps)
    if (static_cast<std::size_t>(m.matrix.cols()) != num_vars)
      throw DimensionMismatch("map '" + m.label + "' has " + std::to_string(m.matrix.cols()) +
                              " columns, polynomial has " + std::to_string(num_vars) + " variables");
}

// Exact orthogonal residual of `p` against the column span of `independent`.
RatVec exact_residual(const RatMat& independent, const RatVec& p) {
  if (independent.cols() == 0) return p;
  const RatMat gram = independent.transpose() * independent;
  RatMat rhs = independent.transpose() * p;
  RatMat coeffs;
  solve_exact(gram, rhs, coeffs);
  return p - independent * coeffs.col(0);
}

}  // namespace

std::shared_ptr<const DegenerateSpan> degenerate_basis(std::span<const LabeledMap> maps, unsigned max_degree) {
  if (maps.empty()) throw PreconditionError("degenerate_basis: no maps");
  const std::size_t m = static_cast<std::size_t>(maps.front().matrix.cols());
  require_maps(maps, m);
  const std::string key = cache_key(maps, max_degree);
  if (auto hit = span_cache().find(key)) return hit;

  for (const auto& map : maps)
    if (exact_rank(map.matrix) != map.matrix.rows())
      throw NonSurjective("map '" + map.label + "' is not surjective");

  auto span = std::make_shared<DegenerateSpan>();
  span->num_vars = m;
  span->degree = max_degree;
  span->basis = monomials(m, max_degree);

  std::vector<RatVec> cols;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    const std::size_t k = static_cast<std::size_t>(maps[j].matrix.rows());
    for (const Exponents& q : monomials(k, max_degree)) {
      MultiPoly mono(k);
      mono.add_term(q, Rat(1));
      cols.push_back(coefficient_vector(compose(mono, maps[j].matrix), span->basis));
      span->sources.emplace_back(j, q);
    }
  }
  span->columns = RatMat(static_cast<Index>(span->basis.size()), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) span->columns.col(static_cast<Index>(c)) = cols[c];
  auto rr = rref(span->columns);
  span->independent = rr.pivots;
  span->row_basis = rr.reduced.topRows(rr.rank);
  return span_cache().insert(key, std::move(span));
}

MultiPoly expand_certificate(const Certificate& certificate, std::span<const LabeledMap> maps) {
  if (certificate.size() != maps.size()) throw InvalidCertificate("certificate and map counts differ");
  if (maps.empty()) return MultiPoly(0);
  MultiPoly total(static_cast<std::size_t>(maps.front().matrix.cols()));
  for (std::size_t j = 0; j < maps.size(); ++j) {
    if (certificate[j].first != maps[j].label)
      throw InvalidCertificate("certificate label '" + certificate[j].first + "' does not match map '" +
                               maps[j].label + "'");
    total += compose(certificate[j].second, maps[j].matrix);
  }
  return total;
}

DegeneracyReport is_degenerate(const MultiPoly& p, std::span<const LabeledMap> maps) {
  require_maps(maps, p.num_vars());
  const auto span = degenerate_basis(maps, p.degree());
  const RatVec target = coefficient_vector(p, span->basis);

  DegeneracyReport report;
  report.residual = RealPoly(p.num_vars());

  // Membership: P lies in the span iff appending it leaves the rank unchanged.
  RatMat augmented(span->columns.rows(), span->columns.cols() + 1);
  augmented << span->columns, target;
  const auto rr = rref(augmented);
  report.is_degenerate = rr.pivots.empty() || rr.pivots.back() < span->columns.cols();

  if (report.is_degenerate) {
    // Minimal-norm solution lies in the row space: x = Rᵀ y with B Rᵀ y = P.
    const RatMat& row_basis = span->row_basis;
    RatMat y;
    solve_exact(RatMat(span->columns * row_basis.transpose()), RatMat(target), y);
    const RatVec x = row_basis.transpose() * y.col(0);

    Certificate cert;
    for (const auto& map : maps) cert.emplace_back(map.label, MultiPoly(static_cast<std::size_t>(map.matrix.rows())));
    for (std::size_t c = 0; c < span->sources.size(); ++c)
      cert[span->sources[c].first].second.add_term(span->sources[c].second, x(static_cast<Index>(c)));
    if (!(expand_certificate(cert, maps) == p))
      throw InvalidCertificate("internal: assembled certificate does not reproduce P");
    report.certificate = std::move(cert);
    report.quotient_norm = 0.0;
    return report;
  }

  RatMat independent(span->columns.rows(), span->rank());
  for (Index k = 0; k < span->rank(); ++k)
    independent.col(k) = span->columns.col(span->independent[static_cast<std::size_t>(k)]);
  const RatVec residual = exact_residual(independent, target);
  Rat squared = 0;
  for (Index i = 0; i < residual.size(); ++i) squared += residual(i) * residual(i);
  report.quotient_norm = std::sqrt(to_double(squared));
  report.residual = from_coefficients(p.num_vars(), span->basis, to_double(residual).col(0));
  return report;
}

double nd_norm(const MultiPoly& p, std::span<const LabeledMap> maps) { return is_degenerate(p, maps).quotient_norm; }

MultiPoly slice_subtract(const MultiPoly& p, const RatMat& alpha0_map, const Subspace& complement, const RatVec& z) {
  const Index m = static_cast<Index>(p.num_vars());
  if (alpha0_map.cols() != m || complement.ambient_dim() != m)
    throw DimensionMismatch("slice_subtract: splitting data does not match the polynomial's variables");
  const Subspace slice = kernel(alpha0_map);
  if (complement.dim() + slice.dim() != m || !intersect(complement, slice).is_zero())
    throw PreconditionError("slice_subtract: complement is not supplementary to ker(alpha0_map)");
  if (z.size() != slice.dim()) throw DimensionMismatch("slice_subtract: z must have dim ker(alpha0_map) coordinates");

  // Projection onto the complement along the slice: v = [W | V0] c, x(v) = W c_W.
  RatMat frame(m, m);
  frame << complement.basis(), slice.basis();
  RatMat inverse;
  if (!solve_exact(frame, RatMat::Identity(m, m), inverse))
    throw PreconditionError("slice_subtract: singular frame");
  const RatMat projection = complement.basis() * inverse.topRows(complement.dim());
  const RatVec offset = slice.basis() * z;
  return p - compose_affine(p, projection, offset);
}

MultiPoly slice_subtract(const MultiPoly& p, const SplittingStep& step, const RatMat& alpha0_map, const RatVec& z) {
  return slice_subtract(p, alpha0_map, sum(step.w_first, step.w_second), z);
}

}  // namespace oscint
