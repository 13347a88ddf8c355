#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oscint/snarl.hpp"

namespace oscint {

struct Partition {
  std::vector<std::string> first;
  std::vector<std::string> second;
};

/// Greedy largest-first split of every label except `excluded` into two
/// nonempty groups whose codimension sums differ by at most κ(excluded).
/// Ties in κ keep profile order. Throws CannotPartition with < 2 labels left.
Partition balance_partition(const CodimProfile& kappas, const std::string& excluded);

/// One transverse splitting together with its certificate. The child
/// replaces V0 = parent[alpha0] by V0 + W' (label beta1) and V0 + W''
/// (label beta2), with W' ⊂ V_{first group} and W'' ⊂ V_{second group}.
struct SplittingStep {
  Snarl parent;
  Snarl child;
  SplitWitness witness;
  Subspace w_first;
  Subspace w_second;
  Index kappa_first = 0;
  Index kappa_second = 0;
  /// Per-attempt seeds for the random transversals, in draw order; the last
  /// pair produced this step.
  std::vector<std::uint64_t> seeds_used;
};

struct SplittingOptions {
  int max_attempts = 32;
  int coeff_bound = 10;
  /// First numeric suffix for generated labels "b<k>"; 0 picks one past the
  /// largest suffix already present in the parent.
  std::size_t label_start = 0;
};

SplittingStep construct_transverse_splitting(const Snarl& s, const std::string& alpha0, std::uint64_t seed,
                                             const SplittingOptions& options = {});

struct Resolution {
  std::vector<Snarl> chain;
  std::vector<SplittingStep> steps;
  bool terminal_general_position = false;
  std::uint64_t seed = 0;

  const Snarl& terminal() const { return chain.back(); }
};

/// Splits the entry of largest codimension (first in order on ties) until
/// every entry is a hyperplane. Throws HypothesisViolated when the weak
/// hypothesis fails and GenericityFailure (with the step index) when a step
/// cannot be constructed.
Resolution resolve(const Snarl& s, std::uint64_t seed, const SplittingOptions& options = {});

/// Surjective maps attached to the two new entries of a step, each written as
/// a left factor times the map of the replaced entry. `first_group_map` has
/// kernel V0 + W'' and `second_group_map` has kernel V0 + W'.
struct DerivedProjections {
  RatMat first_group_map;
  RatMat second_group_map;
  RatMat first_group_factor;
  RatMat second_group_factor;
};

/// `alpha0_map` must be surjective with kernel exactly parent[alpha0].
DerivedProjections derived_projections(const SplittingStep& step, const RatMat& alpha0_map);

struct StepCheck {
  std::size_t index = 0;
  bool linked = false;
  bool transverse = false;
  bool conservation = false;
  bool certificate = false;
  std::string detail;

  bool passed() const { return linked && transverse && conservation && certificate; }
};

struct ResolutionReport {
  std::vector<StepCheck> steps;
  bool terminal_one_dimensional = false;
  bool terminal_general_position = false;

  bool passed() const;
};

ResolutionReport verify_resolution(const Resolution& r);

}  // namespace oscint
