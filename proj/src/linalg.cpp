#include "oscint/linalg.hpp"

#include <cassert>
#include <random>

namespace oscint {

namespace {

RatMat canonical_basis(const RatMat& vectors) {
  const auto rr = rref(RatMat(vectors.transpose()));
  return rr.reduced.topRows(rr.rank).transpose();
}

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionMismatch(std::string(op) + ": ambient dimensions " + std::to_string(a.ambient_dim()) +
                            " and " + std::to_string(b.ambient_dim()) + " differ");
}

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base);
    base = mul_mod(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t reduce_mod(const BigInt& v) {
  BigInt r = v % BigInt(kPrime);
  if (r < 0) r += kPrime;
  return r.convert_to<std::uint64_t>();
}

// Rank of an integer matrix modulo kPrime. Never exceeds the rational rank.
Index modular_rank(std::vector<std::vector<std::uint64_t>> a) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        pivot = i;
        break;
      }
    if (pivot == rows) continue;
    std::swap(a[pivot], a[r]);
    const std::uint64_t inv = pow_mod(a[r][c], kPrime - 2);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const std::uint64_t f = mul_mod(a[i][c], inv);
      for (std::size_t j = c; j < cols; ++j) a[i][j] = (a[i][j] + kPrime - mul_mod(f, a[r][j])) % kPrime;
    }
    ++r;
  }
  return static_cast<Index>(r);
}

}  // namespace

Subspace::Subspace(Index ambient_dim) : ambient_(ambient_dim), basis_(ambient_dim, 0) {
  if (ambient_dim < 0) throw PreconditionError("negative ambient dimension");
}

Subspace Subspace::span(const RatMat& vectors) {
  Subspace s(vectors.rows());
  s.basis_ = canonical_basis(vectors);
  return s;
}

Subspace Subspace::full(Index ambient_dim) {
  Subspace s(ambient_dim);
  s.basis_ = RatMat::Identity(ambient_dim, ambient_dim);
  return s;
}

RatMat Subspace::annihilator() const {
  if (dim() == 0) return RatMat::Identity(ambient_, ambient_);
  const RatMat normals = nullspace_columns(RatMat(basis_.transpose()));
  return canonical_basis(normals).transpose();
}

bool Subspace::contains(const RatVec& v) const {
  if (v.size() != ambient_) throw DimensionMismatch("contains: vector length differs from ambient dimension");
  if (dim() == ambient_) return true;
  const RatMat ann = annihilator();
  for (Index i = 0; i < ann.rows(); ++i)
    if (ann.row(i).dot(v) != 0) return false;
  return true;
}

bool Subspace::contains(const Subspace& other) const {
  require_same_ambient(*this, other, "contains");
  if (other.dim() > dim()) return false;
  if (dim() == ambient_) return true;
  const RatMat products = annihilator() * other.basis();
  for (Index i = 0; i < products.rows(); ++i)
    for (Index j = 0; j < products.cols(); ++j)
      if (products(i, j) != 0) return false;
  return true;
}

bool Subspace::operator==(const Subspace& other) const {
  if (ambient_ != other.ambient_ || dim() != other.dim()) return false;
  for (Index i = 0; i < basis_.rows(); ++i)
    for (Index j = 0; j < basis_.cols(); ++j)
      if (basis_(i, j) != other.basis_(i, j)) return false;
  return true;
}

Subspace kernel(const RatMat& map) {
  if (map.rows() == 0) return Subspace::full(map.cols());
  return Subspace::span(nullspace_columns(map));
}

Subspace image(const RatMat& map) { return Subspace::span(map); }

Subspace intersect(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "intersect");
  const Index m = a.ambient_dim();
  if (a.dim() == m) return b;
  if (b.dim() == m) return a;
  const RatMat ann_a = a.annihilator();
  const RatMat ann_b = b.annihilator();
  RatMat stacked(ann_a.rows() + ann_b.rows(), m);
  stacked << ann_a, ann_b;
  Subspace out = kernel(stacked);
  assert(out.dim() >= a.dim() + b.dim() - m);
  return out;
}

Subspace sum(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "sum");
  RatMat joined(a.ambient_dim(), a.dim() + b.dim());
  joined << a.basis(), b.basis();
  Subspace out = Subspace::span(joined);
  assert(out.dim() + intersect(a, b).dim() == a.dim() + b.dim());
  return out;
}

Subspace random_subspace(Index ambient_dim, Index dim, std::uint64_t seed, int coeff_bound) {
  if (dim < 0 || dim > ambient_dim) throw PreconditionError("random_subspace: need 0 <= dim <= m");
  if (coeff_bound < 1) throw PreconditionError("random_subspace: coeff_bound must be >= 1");
  if (dim == 0) return Subspace::zero(ambient_dim);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-coeff_bound, coeff_bound);
  constexpr int kMaxDraws = 64;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    RatMat vectors(ambient_dim, dim);
    for (Index j = 0; j < dim; ++j)
      for (Index i = 0; i < ambient_dim; ++i) vectors(i, j) = coeff(rng);
    if (exact_rank(vectors) == dim) return Subspace::span(vectors);
  }
  throw GenericityFailure("random_subspace: 64 draws without an independent set");
}

bool rows_independent(const RatMat& rows) {
  if (rows.rows() > rows.cols()) return false;
  if (rows.rows() == 0) return true;
  std::vector<std::vector<std::uint64_t>> mod(static_cast<std::size_t>(rows.rows()));
  for (Index i = 0; i < rows.rows(); ++i) {
    BigInt scale = 1;
    for (Index j = 0; j < rows.cols(); ++j) {
      const BigInt den = boost::multiprecision::denominator(rows(i, j));
      scale = boost::multiprecision::lcm(scale, den);
    }
    auto& out = mod[static_cast<std::size_t>(i)];
    out.reserve(static_cast<std::size_t>(rows.cols()));
    for (Index j = 0; j < rows.cols(); ++j) {
      const Rat scaled = rows(i, j) * Rat(scale);
      out.push_back(reduce_mod(boost::multiprecision::numerator(scaled)));
    }
  }
  if (modular_rank(std::move(mod)) == rows.rows()) return true;
  return exact_rank(rows) == rows.rows();
}

bool solve_exact(const RatMat& a, const RatMat& b, RatMat& x) {
  if (a.rows() != b.rows()) throw DimensionMismatch("solve_exact: row counts differ");
  RatMat aug(a.rows(), a.cols() + b.cols());
  aug << a, b;
  const auto rr = rref(aug);
  x = RatMat::Zero(a.cols(), b.cols());
  for (Index i = 0; i < rr.rank; ++i) {
    const Index p = rr.pivots[static_cast<std::size_t>(i)];
    if (p >= a.cols()) return false;
    x.row(p) = rr.reduced.row(i).tail(b.cols());
  }
  return true;
}

}  // namespace oscint
