#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oscint/linalg.hpp"

namespace oscint {

struct SnarlEntry {
  std::string label;
  Subspace subspace;

  bool operator==(const SnarlEntry&) const = default;
};

/// An indexed family of proper nonzero subspaces {V_α} of Q^m.
/// Labels are unique and every codimension κ_α lies in [1, m − 1].
class Snarl {
 public:
  Snarl(Index ambient_dim, std::vector<SnarlEntry> entries);

  Index ambient_dim() const { return ambient_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<SnarlEntry>& entries() const { return entries_; }

  bool has(const std::string& label) const;
  const Subspace& at(const std::string& label) const;
  std::vector<std::string> labels() const;

  bool operator==(const Snarl&) const = default;

 private:
  Index ambient_;
  std::vector<SnarlEntry> entries_;
};

using CodimProfile = std::vector<std::pair<std::string, Index>>;

CodimProfile codim_profile(const Snarl& s);

Index codim_sum(const Snarl& s);
Index codim_max(const Snarl& s);

/// 2·max κ + Σκ ≤ 2m.
bool check_strong_hypothesis(const Snarl& s);
/// max κ + Σκ ≤ 2m.
bool check_weak_hypothesis(const Snarl& s);

/// V_{A'} = ∩_{α ∈ A'} V_α.
Subspace intersect_indexed(const Snarl& s, const std::set<std::string>& labels);
Subspace intersect_indexed(const Snarl& s, const std::vector<std::string>& labels);

/// Records which entry was replaced (alpha0), the two new labels and the
/// partition of the remaining labels used for the transversality conditions.
/// beta1 pairs with partition_first, beta2 with partition_second.
struct SplitWitness {
  std::string alpha0;
  std::string beta1;
  std::string beta2;
  std::vector<std::string> partition_first;
  std::vector<std::string> partition_second;

  bool operator==(const SplitWitness&) const = default;
};

/// Checks that `child` is obtained from `parent` by replacing V_{α0} with two
/// subspaces intersecting in V_{α0} whose codimensions add up.
/// Throws InvalidWitness if the witness does not refer to the parent sensibly.
bool is_splitting(const Snarl& parent, const Snarl& child, const SplitWitness& w);

/// is_splitting plus, for the witness partition (A', A''):
/// dim(W_{β'} ∩ V_{A'}) > 0, dim(W_{β''} ∩ V_{A''}) > 0,
/// W_{β'} + W_{β''} = Q^m, and W_{β'} + V_{α0}, W_{β''} + V_{α0} proper.
bool is_transverse_splitting(const Snarl& parent, const Snarl& child, const SplitWitness& w);

/// Every entry has codimension one.
bool is_one_dimensional(const Snarl& s);

/// General position of a one-dimensional snarl, read through the normal
/// lines: every subset of at most m normals is linearly independent.
/// Throws NonOneDimensional if some entry has codimension above one.
bool is_onedim_general_position(const Snarl& s);

}  // namespace oscint
