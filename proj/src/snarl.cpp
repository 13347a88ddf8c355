#include "oscint/snarl.hpp"

#include <algorithm>
#include <numeric>

namespace oscint {

Snarl::Snarl(Index ambient_dim, std::vector<SnarlEntry> entries)
    : ambient_(ambient_dim), entries_(std::move(entries)) {
  if (ambient_ < 2) throw PreconditionError("snarl: ambient dimension must be at least 2");
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.label.empty()) throw PreconditionError("snarl: empty label");
    if (!seen.insert(e.label).second) throw PreconditionError("snarl: duplicate label '" + e.label + "'");
    if (e.subspace.ambient_dim() != ambient_)
      throw DimensionMismatch("snarl: entry '" + e.label + "' lives in dimension " +
                              std::to_string(e.subspace.ambient_dim()) + ", expected " + std::to_string(ambient_));
    const Index k = e.subspace.codim();
    if (k < 1 || k > ambient_ - 1)
      throw PreconditionError("snarl: entry '" + e.label + "' has codimension " + std::to_string(k) +
                              " outside [1, m-1]");
  }
}

bool Snarl::has(const std::string& label) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const SnarlEntry& e) { return e.label == label; });
}

const Subspace& Snarl::at(const std::string& label) const {
  for (const auto& e : entries_)
    if (e.label == label) return e.subspace;
  throw UnknownLabel("snarl has no entry '" + label + "'");
}

std::vector<std::string> Snarl::labels() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

CodimProfile codim_profile(const Snarl& s) {
  CodimProfile out;
  for (const auto& e : s.entries()) out.emplace_back(e.label, e.subspace.codim());
  return out;
}

Index codim_sum(const Snarl& s) {
  Index total = 0;
  for (const auto& e : s.entries()) total += e.subspace.codim();
  return total;
}

Index codim_max(const Snarl& s) {
  Index best = 0;
  for (const auto& e : s.entries()) best = std::max(best, e.subspace.codim());
  return best;
}

bool check_strong_hypothesis(const Snarl& s) {
  return 2 * codim_max(s) + codim_sum(s) <= 2 * s.ambient_dim();
}

bool check_weak_hypothesis(const Snarl& s) { return codim_max(s) + codim_sum(s) <= 2 * s.ambient_dim(); }

Subspace intersect_indexed(const Snarl& s, const std::vector<std::string>& labels) {
  if (labels.empty()) throw PreconditionError("intersect_indexed: empty label set");
  Subspace out = s.at(labels.front());
  for (std::size_t i = 1; i < labels.size(); ++i) out = intersect(out, s.at(labels[i]));
  return out;
}

Subspace intersect_indexed(const Snarl& s, const std::set<std::string>& labels) {
  return intersect_indexed(s, std::vector<std::string>(labels.begin(), labels.end()));
}

bool is_splitting(const Snarl& parent, const Snarl& child, const SplitWitness& w) {
  if (!parent.has(w.alpha0)) throw InvalidWitness("witness alpha0 '" + w.alpha0 + "' is not a parent label");
  if (w.beta1 == w.beta2) throw InvalidWitness("witness beta labels coincide");
  if (parent.has(w.beta1) || parent.has(w.beta2))
    throw InvalidWitness("witness beta labels must be new relative to the parent");

  if (parent.ambient_dim() != child.ambient_dim()) return false;
  if (child.size() != parent.size() + 1) return false;
  if (child.has(w.alpha0) || !child.has(w.beta1) || !child.has(w.beta2)) return false;

  for (const auto& e : parent.entries()) {
    if (e.label == w.alpha0) continue;
    if (!child.has(e.label) || child.at(e.label) != e.subspace) return false;
  }

  const Subspace& v0 = parent.at(w.alpha0);
  const Subspace& w1 = child.at(w.beta1);
  const Subspace& w2 = child.at(w.beta2);
  if (intersect(w1, w2) != v0) return false;
  return w1.codim() + w2.codim() == v0.codim();
}

namespace {

bool valid_partition(const Snarl& parent, const SplitWitness& w) {
  if (w.partition_first.empty() || w.partition_second.empty()) return false;
  std::set<std::string> first(w.partition_first.begin(), w.partition_first.end());
  std::set<std::string> second(w.partition_second.begin(), w.partition_second.end());
  if (first.size() != w.partition_first.size() || second.size() != w.partition_second.size()) return false;
  for (const auto& l : first)
    if (second.count(l)) return false;
  std::set<std::string> expected;
  for (const auto& e : parent.entries())
    if (e.label != w.alpha0) expected.insert(e.label);
  std::set<std::string> both = first;
  both.insert(second.begin(), second.end());
  return both == expected;
}

}  // namespace

bool is_transverse_splitting(const Snarl& parent, const Snarl& child, const SplitWitness& w) {
  if (!is_splitting(parent, child, w)) return false;
  if (!valid_partition(parent, w)) return false;

  const Index m = parent.ambient_dim();
  const Subspace& v0 = parent.at(w.alpha0);
  const Subspace& w1 = child.at(w.beta1);
  const Subspace& w2 = child.at(w.beta2);

  if (intersect(w1, intersect_indexed(parent, w.partition_first)).dim() == 0) return false;
  if (intersect(w2, intersect_indexed(parent, w.partition_second)).dim() == 0) return false;
  if (sum(w1, w2).dim() != m) return false;
  if (sum(w1, v0).dim() >= m || sum(w2, v0).dim() >= m) return false;
  return true;
}

bool is_one_dimensional(const Snarl& s) {
  return std::all_of(s.entries().begin(), s.entries().end(),
                     [](const SnarlEntry& e) { return e.subspace.codim() == 1; });
}

bool is_onedim_general_position(const Snarl& s) {
  const Index m = s.ambient_dim();
  RatMat normals(static_cast<Index>(s.size()), m);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& e = s.entries()[i];
    if (e.subspace.codim() != 1)
      throw NonOneDimensional("general position: entry '" + e.label + "' has codimension " +
                              std::to_string(e.subspace.codim()));
    normals.row(static_cast<Index>(i)) = e.subspace.annihilator().row(0);
  }

  // Independence of every k-subset with k = min(n, m) implies it for all smaller subsets.
  const std::size_t n = s.size();
  const std::size_t k = std::min<std::size_t>(n, static_cast<std::size_t>(m));
  if (k == 0) return true;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  RatMat subset(static_cast<Index>(k), m);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset.row(static_cast<Index>(i)) = normals.row(static_cast<Index>(pick[i]));
    if (!rows_independent(subset)) return false;

    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return true;
}

}  // namespace oscint
