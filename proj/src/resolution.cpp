#include "oscint/resolution.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace oscint {

namespace {

std::size_t next_label_index(const Snarl& s) {
  std::size_t best = 0;
  for (const auto& e : s.entries()) {
    const std::string& l = e.label;
    if (l.size() < 2 || l[0] != 'b') continue;
    if (!std::all_of(l.begin() + 1, l.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
    if (l.size() > 19) continue;
    best = std::max<std::size_t>(best, std::stoull(l.substr(1)));
  }
  return best + 1;
}

Index profile_sum(const CodimProfile& kappas, const std::vector<std::string>& group) {
  Index total = 0;
  for (const auto& [label, k] : kappas)
    if (std::find(group.begin(), group.end(), label) != group.end()) total += k;
  return total;
}

// W = first `count` canonical basis vectors of U ∩ V, or nullopt when the
// intersection is too small.
std::optional<Subspace> generic_piece(const Subspace& v, Index count, std::uint64_t seed, int coeff_bound) {
  const Index m = v.ambient_dim();
  const Index u_dim = m - v.dim() + count;
  const Subspace u = random_subspace(m, u_dim, seed, coeff_bound);
  const Subspace w = intersect(u, v);
  if (w.dim() < count) return std::nullopt;
  if (w.dim() == count) return w;
  return Subspace::span(w.basis().leftCols(count));
}

std::string describe(const Snarl& s) {
  std::ostringstream out;
  out << "m=" << s.ambient_dim() << " codims=(";
  bool first = true;
  for (const auto& [l, k] : codim_profile(s)) {
    out << (first ? "" : ",") << k;
    first = false;
  }
  out << ")";
  return out.str();
}

}  // namespace

Partition balance_partition(const CodimProfile& kappas, const std::string& excluded) {
  std::vector<std::pair<std::string, Index>> rest;
  Index kappa0 = -1;
  for (const auto& entry : kappas) {
    if (entry.first == excluded)
      kappa0 = entry.second;
    else
      rest.push_back(entry);
  }
  if (kappa0 < 0) throw UnknownLabel("balance_partition: no entry '" + excluded + "'");
  if (rest.size() < 2)
    throw CannotPartition("balance_partition: need at least two labels besides '" + excluded + "'");

  std::stable_sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  Partition p;
  Index sum_first = 0, sum_second = 0;
  for (const auto& [label, k] : rest) {
    if (sum_first <= sum_second) {
      p.first.push_back(label);
      sum_first += k;
    } else {
      p.second.push_back(label);
      sum_second += k;
    }
  }
  if (std::abs(sum_first - sum_second) > kappa0)
    throw CannotPartition("balance_partition: gap " + std::to_string(std::abs(sum_first - sum_second)) +
                          " exceeds codim(" + excluded + ") = " + std::to_string(kappa0));
  return p;
}

SplittingStep construct_transverse_splitting(const Snarl& s, const std::string& alpha0, std::uint64_t seed,
                                             const SplittingOptions& options) {
  const Index m = s.ambient_dim();
  const Subspace& v0 = s.at(alpha0);
  const Index kappa0 = v0.codim();
  if (kappa0 < 2) throw NotSplittable("entry '" + alpha0 + "' has codimension 1");
  if (!check_weak_hypothesis(s))
    throw HypothesisViolated("weak hypothesis max codim + sum codim <= 2m fails for " + describe(s));

  const CodimProfile kappas = codim_profile(s);
  const Partition part = balance_partition(kappas, alpha0);
  const Subspace v_first = intersect_indexed(s, part.first);
  const Subspace v_second = intersect_indexed(s, part.second);

  // The larger half of κ0 goes to the group with the smaller codimension sum.
  const Index big = (kappa0 + 1) / 2, small = kappa0 / 2;
  Index kappa_first = big, kappa_second = small;
  if (profile_sum(kappas, part.first) > profile_sum(kappas, part.second)) std::swap(kappa_first, kappa_second);
  if (v_first.dim() < kappa_first || v_second.dim() < kappa_second) std::swap(kappa_first, kappa_second);
  if (v_first.dim() < kappa_first || v_second.dim() < kappa_second)
    throw GenericityFailure("intersections of the partition groups are too small to host W', W'' (" +
                            describe(s) + ")");

  std::size_t label_index = options.label_start ? options.label_start : next_label_index(s);
  auto fresh = [&] {
    while (s.has("b" + std::to_string(label_index))) ++label_index;
    return "b" + std::to_string(label_index++);
  };
  SplitWitness witness;
  witness.alpha0 = alpha0;
  witness.beta1 = fresh();
  witness.beta2 = fresh();
  witness.partition_first = part.first;
  witness.partition_second = part.second;

  std::mt19937_64 seeder(seed);
  std::vector<std::uint64_t> seeds;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    const std::uint64_t seed_first = seeder();
    const std::uint64_t seed_second = seeder();
    seeds.push_back(seed_first);
    seeds.push_back(seed_second);

    std::optional<Subspace> w_first, w_second;
    try {
      w_first = generic_piece(v_first, kappa_first, seed_first, options.coeff_bound);
      w_second = generic_piece(v_second, kappa_second, seed_second, options.coeff_bound);
    } catch (const GenericityFailure&) {
      continue;
    }
    if (!w_first || !w_second) continue;
    if (!intersect(*w_first, *w_second).is_zero()) continue;
    if (!intersect(sum(*w_first, *w_second), v0).is_zero()) continue;

    std::vector<SnarlEntry> entries;
    for (const auto& e : s.entries()) {
      if (e.label != alpha0) {
        entries.push_back(e);
        continue;
      }
      entries.push_back({witness.beta1, sum(v0, *w_first)});
      entries.push_back({witness.beta2, sum(v0, *w_second)});
    }
    Snarl child(m, std::move(entries));
    if (!is_transverse_splitting(s, child, witness)) continue;

    return SplittingStep{s,        std::move(child), std::move(witness), std::move(*w_first), std::move(*w_second),
                         kappa_first, kappa_second,  std::move(seeds)};
  }
  throw GenericityFailure("no transverse splitting of '" + alpha0 + "' found in " +
                          std::to_string(options.max_attempts) + " attempts (" + describe(s) + ")");
}

Resolution resolve(const Snarl& s, std::uint64_t seed, const SplittingOptions& options) {
  if (!check_weak_hypothesis(s))
    throw HypothesisViolated("weak hypothesis max codim + sum codim <= 2m fails for " + describe(s) + ": " +
                             std::to_string(codim_max(s)) + " + " + std::to_string(codim_sum(s)) + " > " +
                             std::to_string(2 * s.ambient_dim()));
  Resolution r;
  r.seed = seed;
  r.chain.push_back(s);
  SplittingOptions step_options = options;
  step_options.label_start = options.label_start ? options.label_start : next_label_index(s);

  while (codim_max(r.chain.back()) > 1) {
    const Snarl& current = r.chain.back();
    std::string alpha0;
    Index best = 0;
    for (const auto& e : current.entries())
      if (e.subspace.codim() > best) {
        best = e.subspace.codim();
        alpha0 = e.label;
      }

    const std::size_t step_index = r.steps.size();
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(step_index)};
    std::uint64_t step_seed = 0;
    {
      std::uint32_t words[2];
      seq.generate(words, words + 2);
      step_seed = (std::uint64_t{words[0]} << 32) | words[1];
    }
    try {
      SplittingStep step = construct_transverse_splitting(current, alpha0, step_seed, step_options);
      step_options.label_start += 2;
      r.chain.push_back(step.child);
      r.steps.push_back(std::move(step));
    } catch (const GenericityFailure& e) {
      throw GenericityFailure("step " + std::to_string(step_index) + ": " + e.what(),
                              static_cast<std::ptrdiff_t>(step_index));
    }
  }
  r.terminal_general_position = is_onedim_general_position(r.chain.back());
  return r;
}

DerivedProjections derived_projections(const SplittingStep& step, const RatMat& alpha0_map) {
  const Subspace& v0 = step.parent.at(step.witness.alpha0);
  const Index m = v0.ambient_dim();
  if (alpha0_map.cols() != m) throw DimensionMismatch("derived_projections: map has wrong column count");
  if (alpha0_map.rows() != v0.codim() || kernel(alpha0_map) != v0)
    throw InconsistentKernel("derived_projections: map for '" + step.witness.alpha0 +
                             "' is not surjective with kernel equal to the replaced subspace");

  auto pull_back = [&](const Subspace& killed, RatMat& factor) {
    // Functionals on the target that vanish on the image of `killed`.
    factor = image(alpha0_map * killed.basis()).annihilator();
    return RatMat(factor * alpha0_map);
  };
  DerivedProjections out;
  out.first_group_map = pull_back(step.w_second, out.first_group_factor);
  out.second_group_map = pull_back(step.w_first, out.second_group_factor);

  if (kernel(out.first_group_map) != sum(v0, step.w_second) || kernel(out.second_group_map) != sum(v0, step.w_first))
    throw InconsistentKernel("derived_projections: pulled-back kernels disagree with the step certificate");
  return out;
}

bool ResolutionReport::passed() const {
  if (!terminal_one_dimensional) return false;
  return std::all_of(steps.begin(), steps.end(), [](const StepCheck& c) { return c.passed(); });
}

ResolutionReport verify_resolution(const Resolution& r) {
  ResolutionReport report;
  if (r.chain.empty()) return report;
  if (r.chain.size() != r.steps.size() + 1) {
    StepCheck bad;
    bad.index = r.steps.size();
    bad.detail = "chain has " + std::to_string(r.chain.size()) + " snarls for " + std::to_string(r.steps.size()) +
                 " steps";
    report.steps.push_back(bad);
    return report;
  }

  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const SplittingStep& step = r.steps[k];
    StepCheck c;
    c.index = k;
    std::vector<std::string> notes;

    c.linked = step.parent == r.chain[k] && step.child == r.chain[k + 1];
    if (!c.linked) notes.push_back("step does not match chain");

    try {
      c.transverse = is_transverse_splitting(r.chain[k], r.chain[k + 1], step.witness);
    } catch (const Error& e) {
      notes.push_back(e.what());
    }
    if (!c.transverse) notes.push_back("not a transverse splitting");

    c.conservation = codim_sum(r.chain[k + 1]) == codim_sum(r.chain[k]) &&
                     codim_max(r.chain[k + 1]) <= codim_max(r.chain[k]) &&
                     r.chain[k + 1].size() == r.chain[k].size() + 1;
    if (!c.conservation) notes.push_back("codimension conservation violated");

    try {
      const Subspace& v0 = r.chain[k].at(step.witness.alpha0);
      const Index k0 = v0.codim();
      const bool dims = step.w_first.dim() == step.kappa_first && step.w_second.dim() == step.kappa_second &&
                        step.kappa_first + step.kappa_second == k0 && step.kappa_first >= 1 &&
                        step.kappa_second >= 1 && step.kappa_first <= k0 - 1 && step.kappa_second <= k0 - 1;
      const bool independent = intersect(step.w_first, step.w_second).is_zero() &&
                               intersect(sum(step.w_first, step.w_second), v0).is_zero();
      const bool matches = r.chain[k + 1].has(step.witness.beta1) && r.chain[k + 1].has(step.witness.beta2) &&
                           r.chain[k + 1].at(step.witness.beta1) == sum(v0, step.w_first) &&
                           r.chain[k + 1].at(step.witness.beta2) == sum(v0, step.w_second);
      c.certificate = dims && independent && matches;
    } catch (const Error& e) {
      notes.push_back(e.what());
    }
    if (!c.certificate) notes.push_back("W', W'' certificate invalid");

    for (std::size_t i = 0; i < notes.size(); ++i) c.detail += (i ? "; " : "") + notes[i];
    report.steps.push_back(std::move(c));
  }

  report.terminal_one_dimensional = is_one_dimensional(r.chain.back());
  if (report.terminal_one_dimensional) report.terminal_general_position = is_onedim_general_position(r.chain.back());
  return report;
}

}  // namespace oscint
