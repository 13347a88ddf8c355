#pragma once

#include <map>
#include <span>
#include <vector>

#include "oscint/errors.hpp"
#include "oscint/rational.hpp"

namespace oscint {

using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
  unsigned d = 0;
  for (unsigned k : e) d += k;
  return d;
}

/// Graded lexicographic: lower total degree first, then x1 before x2 before ...
struct GradedLex {
  bool operator()(const Exponents& a, const Exponents& b) const {
    const unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
  }
};

/// Multivariate polynomial as a sparse map from exponent vectors to nonzero
/// coefficients, kept in graded-lex order.
template <typename Scalar>
class Polynomial {
 public:
  using Terms = std::map<Exponents, Scalar, GradedLex>;

  explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const Scalar& c) {
    Polynomial p(num_vars);
    p.add_term(Exponents(num_vars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t num_vars, std::size_t index) {
    if (index >= num_vars) throw DimensionMismatch("variable index out of range");
    Exponents e(num_vars, 0);
    e[index] = 1;
    Polynomial p(num_vars);
    p.add_term(e, Scalar(1));
    return p;
  }

  std::size_t num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Largest total degree of a stored term; 0 for the zero polynomial.
  unsigned degree() const { return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first); }

  Scalar coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const Exponents& e, const Scalar& c) {
    if (e.size() != num_vars_) throw DimensionMismatch("exponent vector length differs from variable count");
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    require_same_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    require_same_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * Scalar(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.require_same_vars(b);
    Polynomial out(a.num_vars_);
    Exponents e(a.num_vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  bool operator==(const Polynomial& o) const { return num_vars_ == o.num_vars_ && terms_ == o.terms_; }

  /// Evaluation at a point whose coordinates may be of another type (double, complex).
  template <typename T>
  T evaluate(std::span<const T> x) const {
    if (x.size() != num_vars_) throw DimensionMismatch("evaluate: point has wrong dimension");
    T total{};
    for (const auto& [e, c] : terms_) {
      T term = static_cast<T>(convert(c));
      for (std::size_t i = 0; i < num_vars_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
      total += term;
    }
    return total;
  }

 private:
  static double convert(const Scalar& c) {
    if constexpr (std::is_same_v<Scalar, double>)
      return c;
    else
      return c.template convert_to<double>();
  }

  void require_same_vars(const Polynomial& o) const {
    if (o.num_vars_ != num_vars_) throw DimensionMismatch("polynomials over different variable counts");
  }

  std::size_t num_vars_;
  Terms terms_;
};

using MultiPoly = Polynomial<Rat>;
using RealPoly = Polynomial<double>;

/// All exponent vectors of total degree ≤ max_degree in graded-lex order;
/// there are C(num_vars + max_degree, max_degree) of them.
std::vector<Exponents> monomials(std::size_t num_vars, unsigned max_degree);

/// q(map · x): `q` has map.rows() variables, the result has map.cols().
MultiPoly compose(const MultiPoly& q, const RatMat& map);

/// q(map · x + offset).
MultiPoly compose_affine(const MultiPoly& q, const RatMat& map, const RatVec& offset);

/// Coefficients of `p` in the given monomial basis. Throws PreconditionError
/// if `p` has a term outside the basis.
RatVec coefficient_vector(const MultiPoly& p, const std::vector<Exponents>& basis);

template <typename Derived>
Polynomial<typename Derived::Scalar> from_coefficients(std::size_t num_vars, const std::vector<Exponents>& basis,
                                                       const Eigen::MatrixBase<Derived>& coeffs) {
  Polynomial<typename Derived::Scalar> p(num_vars);
  for (std::size_t i = 0; i < basis.size(); ++i) p.add_term(basis[i], coeffs(static_cast<Index>(i)));
  return p;
}

}  // namespace oscint
