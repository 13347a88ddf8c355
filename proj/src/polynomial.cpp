#include "oscint/polynomial.hpp"

#include <functional>

namespace oscint {

std::vector<Exponents> monomials(std::size_t num_vars, unsigned max_degree) {
  std::vector<Exponents> out;
  Exponents current(num_vars, 0);
  // Fill positions left to right, largest exponent first, so x1 precedes x2.
  std::function<void(std::size_t, unsigned)> fill = [&](std::size_t pos, unsigned remaining) {
    if (pos + 1 == num_vars) {
      current[pos] = remaining;
      out.push_back(current);
      return;
    }
    for (unsigned k = remaining + 1; k-- > 0;) {
      current[pos] = k;
      fill(pos + 1, remaining - k);
    }
  };
  for (unsigned d = 0; d <= max_degree; ++d) {
    if (num_vars == 0) {
      if (d == 0) out.push_back(current);
      continue;
    }
    fill(0, d);
  }
  return out;
}

MultiPoly compose_affine(const MultiPoly& q, const RatMat& map, const RatVec& offset) {
  if (static_cast<Index>(q.num_vars()) != map.rows())
    throw DimensionMismatch("compose: polynomial has " + std::to_string(q.num_vars()) + " variables, map has " +
                            std::to_string(map.rows()) + " rows");
  if (offset.size() != map.rows()) throw DimensionMismatch("compose: offset length differs from map rows");
  const std::size_t out_vars = static_cast<std::size_t>(map.cols());

  std::vector<MultiPoly> linear;
  for (Index i = 0; i < map.rows(); ++i) {
    MultiPoly l = MultiPoly::constant(out_vars, offset(i));
    for (Index j = 0; j < map.cols(); ++j) l += MultiPoly::variable(out_vars, static_cast<std::size_t>(j)) * map(i, j);
    linear.push_back(std::move(l));
  }
  // powers[i][k] = linear[i]^k, grown on demand.
  std::vector<std::vector<MultiPoly>> powers(linear.size());
  for (std::size_t i = 0; i < linear.size(); ++i) powers[i].push_back(MultiPoly::constant(out_vars, Rat(1)));
  auto power = [&](std::size_t i, unsigned k) -> const MultiPoly& {
    while (powers[i].size() <= k) powers[i].push_back(powers[i].back() * linear[i]);
    return powers[i][k];
  };

  MultiPoly out(out_vars);
  for (const auto& [e, c] : q.terms()) {
    MultiPoly term = MultiPoly::constant(out_vars, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term = term * power(i, e[i]);
    out += term;
  }
  return out;
}

MultiPoly compose(const MultiPoly& q, const RatMat& map) {
  return compose_affine(q, map, RatVec::Zero(map.rows()));
}

RatVec coefficient_vector(const MultiPoly& p, const std::vector<Exponents>& basis) {
  std::map<Exponents, Index, GradedLex> position;
  for (std::size_t i = 0; i < basis.size(); ++i) position.emplace(basis[i], static_cast<Index>(i));
  RatVec v = RatVec::Zero(static_cast<Index>(basis.size()));
  for (const auto& [e, c] : p.terms()) {
    auto it = position.find(e);
    if (it == position.end()) throw PreconditionError("coefficient_vector: term outside the monomial basis");
    v(it->second) = c;
  }
  return v;
}

}  // namespace oscint
