#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "oscint/degeneracy.hpp"
#include "oscint/resolution.hpp"

namespace oscint::testing {

inline RatMat ints(std::initializer_list<std::initializer_list<long>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r ? static_cast<Index>(rows.begin()->size()) : 0;
  RatMat m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (long v : row) m(i, j++) = Rat(v);
    ++i;
  }
  return m;
}

inline RatVec vec(std::initializer_list<long> values) {
  RatVec v(static_cast<Index>(values.size()));
  Index i = 0;
  for (long x : values) v(i++) = Rat(x);
  return v;
}

inline Subspace span_of(std::initializer_list<std::initializer_list<long>> vectors) {
  return Subspace::span(RatMat(ints(vectors).transpose()));
}

inline Exponents exps(std::initializer_list<unsigned> e) { return Exponents(e); }

inline MultiPoly monomial(std::size_t vars, std::initializer_list<unsigned> e, long coeff = 1) {
  MultiPoly p(vars);
  p.add_term(Exponents(e), Rat(coeff));
  return p;
}

// Coordinates (x1, x2, y1, y2).
inline std::vector<LabeledMap> worked_example_maps() {
  return {{"pi0", ints({{1, 0, 0, 0}, {0, 0, 1, 0}})},
          {"pi1", ints({{0, 1, 0, 0}, {0, 0, 0, 1}})},
          {"pi2", ints({{1, 1, 0, 0}, {0, 0, 1, 1}})}};
}

inline Snarl worked_example_snarl() {
  std::vector<SnarlEntry> entries;
  for (const auto& m : worked_example_maps()) entries.push_back({m.label, kernel(m.matrix)});
  return Snarl(4, std::move(entries));
}

/// Rank by fraction-free Bareiss elimination on the integer matrix obtained
/// by clearing denominators row by row.
inline Index bareiss_rank(const RatMat& input) {
  const Index rows = input.rows(), cols = input.cols();
  std::vector<std::vector<BigInt>> a(static_cast<std::size_t>(rows), std::vector<BigInt>(static_cast<std::size_t>(cols)));
  for (Index i = 0; i < rows; ++i) {
    BigInt lcm = 1;
    for (Index j = 0; j < cols; ++j) lcm = boost::multiprecision::lcm(lcm, BigInt(denominator(input(i, j))));
    for (Index j = 0; j < cols; ++j)
      a[i][j] = BigInt(numerator(input(i, j))) * (lcm / BigInt(denominator(input(i, j))));
  }
  BigInt prev = 1;
  Index rank = 0;
  for (Index c = 0; c < cols && rank < rows; ++c) {
    Index pivot = -1;
    for (Index i = rank; i < rows; ++i)
      if (a[i][c] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rank]);
    for (Index i = rank + 1; i < rows; ++i) {
      for (Index j = c + 1; j < cols; ++j) a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

inline RatMat random_int_matrix(std::mt19937_64& rng, Index rows, Index cols, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  RatMat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Rat(dist(rng));
  return m;
}

inline RatMat random_surjection(std::mt19937_64& rng, Index rows, Index cols, int bound = 5) {
  for (;;) {
    RatMat m = random_int_matrix(rng, rows, cols, bound);
    if (bareiss_rank(m) == rows) return m;
  }
}

/// Random snarl with at least three entries satisfying the weak hypothesis.
inline Snarl random_weak_snarl(std::mt19937_64& rng, Index m) {
  std::uniform_int_distribution<Index> codim(1, m - 1);
  for (;;) {
    std::uniform_int_distribution<int> count(3, static_cast<int>(2 * m - 1));
    const int n = count(rng);
    std::vector<Index> kappas;
    Index total = 0, biggest = 0;
    for (int j = 0; j < n; ++j) {
      kappas.push_back(codim(rng));
      total += kappas.back();
      biggest = std::max(biggest, kappas.back());
    }
    if (biggest + total > 2 * m) continue;
    std::vector<SnarlEntry> entries;
    for (int j = 0; j < n; ++j)
      entries.push_back({"v" + std::to_string(j), kernel(random_surjection(rng, kappas[j], m))});
    return Snarl(m, std::move(entries));
  }
}

inline MultiPoly random_poly(std::mt19937_64& rng, std::size_t vars, unsigned degree, int bound = 5,
                             double density = 0.6) {
  std::uniform_int_distribution<int> coeff(-bound, bound);
  std::bernoulli_distribution keep(density);
  MultiPoly p(vars);
  for (const auto& e : monomials(vars, degree))
    if (keep(rng)) p.add_term(e, Rat(coeff(rng)));
  return p;
}

}  // namespace oscint::testing
