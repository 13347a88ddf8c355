#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Dense>
#include <string>
#include <string_view>

namespace oscint {

/// Exact rational scalar. GMP keeps every value in lowest terms with a
/// positive denominator once constructed through `parse_rat` or arithmetic.
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

using Index = Eigen::Index;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RatMat = MatX<Rat>;
using RatVec = VecX<Rat>;

/// Parses "p/q", "p", or a plain decimal literal like "-0.25".
/// Throws std::invalid_argument on anything else, or on a zero denominator.
Rat parse_rat(std::string_view text);

/// "p/q" for non-integers, "p" for integers.
std::string to_string(const Rat& value);

inline double to_double(const Rat& value) { return value.convert_to<double>(); }

/// True iff numerator and denominator are coprime and the denominator is positive.
bool is_canonical(const Rat& value);

template <typename Derived>
MatX<double> to_double(const Eigen::MatrixBase<Derived>& m) {
  MatX<double> out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

}  // namespace oscint
