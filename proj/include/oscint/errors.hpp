#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oscint {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands live in different ambient spaces, or a map/vector has the wrong shape.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A precondition on the arguments of an operation does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

/// Random sampling never produced a configuration passing the exact checks.
/// `step` is set when the failure happened inside a resolution chain.
struct GenericityFailure : Error {
  explicit GenericityFailure(const std::string& what, std::ptrdiff_t step_index = -1)
      : Error(what), step(step_index) {}
  std::ptrdiff_t step;
};

/// The weak hypothesis max κ + Σκ ≤ 2m fails, so no resolution is attempted.
struct HypothesisViolated : Error {
  using Error::Error;
};

struct NotSplittable : Error {
  using Error::Error;
};

struct CannotPartition : Error {
  using Error::Error;
};

struct NonOneDimensional : Error {
  using Error::Error;
};

struct UnknownLabel : Error {
  using Error::Error;
};

struct InvalidWitness : Error {
  using Error::Error;
};

struct InconsistentKernel : Error {
  using Error::Error;
};

struct NonSurjective : Error {
  using Error::Error;
};

struct InvalidCertificate : Error {
  using Error::Error;
};

struct InsufficientTail : Error {
  using Error::Error;
};

/// Quadrature refinement hit the per-axis node cap before converging.
struct NodeCapExceeded : Error {
  NodeCapExceeded(const std::string& what, double prev_re, double prev_im, double last_re,
                  double last_im, std::size_t nodes)
      : Error(what),
        previous_re(prev_re),
        previous_im(prev_im),
        last_re(last_re),
        last_im(last_im),
        nodes_per_axis(nodes) {}
  double previous_re, previous_im;
  double last_re, last_im;
  std::size_t nodes_per_axis;
};

/// Malformed JSON input. `where` names the offending field path.
struct InputError : Error {
  InputError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), where(field) {}
  std::string where;
};

}  // namespace oscint
