#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscint/degeneracy.hpp"

namespace oscint {

using Complex = std::complex<double>;
using Box = std::vector<std::pair<Rat, Rat>>;

/// exp(−1/(1 − s²)) on (−1, 1), zero elsewhere.
double bump_profile(double s);

enum class BumpKind { Smooth, Modulated };

/// f(t) = amplitude · e^{−iλ Q(t)} · ∏_k bump(rescaled t_k) on a box, with the
/// modulating factor present only for modulated bumps.
struct BumpSpec {
  struct Modulation {
    MultiPoly phase;
    double lambda = 0.0;
  };

  Box box;
  std::optional<Modulation> modulation;
  Complex amplitude{1.0, 0.0};

  static BumpSpec smooth(Box box);
  static BumpSpec modulated(Box box, MultiPoly phase, double lambda);

  BumpKind kind() const { return modulation ? BumpKind::Modulated : BumpKind::Smooth; }
  std::size_t dim() const { return box.size(); }
  Complex operator()(std::span<const double> t) const;
};

enum class QuadRule { Midpoint, GaussLegendre };

struct QuadConfig {
  std::size_t nodes_per_axis = 16;
  Box domain_box;
  QuadRule rule = QuadRule::GaussLegendre;
  double refine_tol = 1e-4;
  /// 0 selects the default cap for the dimension: 4096 (m ≤ 2), 512 (m = 3), 64 (m ≥ 4).
  std::size_t max_nodes_per_axis = 0;
  /// Successive estimates closer than this in absolute value also count as converged.
  double abs_floor = 1e-14;
  /// Worker threads; 0 reads OSCINT_THREADS, falling back to the hardware count.
  unsigned threads = 0;
};

std::size_t default_node_cap(std::size_t dim);

/// One-dimensional rule on [−1, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule1D gauss_legendre(std::size_t n);
Rule1D midpoint_rule(std::size_t n);

/// A box containing {x : π_j x ∈ B_j for all j}. Requires the stacked maps
/// to be injective; the bound comes from interval arithmetic on the exact
/// left inverse.
Box support_bounding_box(std::span<const LabeledMap> maps, std::span<const Box> boxes);

/// Tensor-grid value of ∫_box e^{iλP(x)} ∏ f_j(π_j x) dx at a fixed node count.
Complex integrate_on_grid(const MultiPoly& phase, double lambda, std::span<const LabeledMap> maps,
                          std::span<const BumpSpec> fs, const Box& domain, QuadRule rule, std::size_t nodes_per_axis,
                          unsigned threads = 0);

struct QuadResult {
  Complex value;
  std::size_t nodes_per_axis = 0;
  /// (nodes per axis, estimate) for every grid evaluated, coarse to fine.
  std::vector<std::pair<std::size_t, Complex>> history;
};

/// Doubles the node count until two successive estimates agree to
/// refine_tol (relative), throwing NodeCapExceeded past the cap.
QuadResult eval_integral(const MultiPoly& phase, double lambda, std::span<const LabeledMap> maps,
                         std::span<const BumpSpec> fs, const QuadConfig& cfg);

/// Modulated bumps e^{−iλQ_j}·bump that cancel the phase λP exactly, given a
/// certificate with Σ Q_j∘π_j = P. Throws InvalidCertificate otherwise.
std::vector<BumpSpec> adversarial_functions(const MultiPoly& phase, std::span<const LabeledMap> maps,
                                            const Certificate& certificate, std::span<const Box> boxes,
                                            double lambda);

struct SweepRow {
  double lambda = 0.0;
  Complex value;
  double abs = 0.0;
  std::size_t nodes = 0;
  bool failed = false;
  std::string error;
};

struct DecayFit {
  double rho = 0.0;
  double log_c = 0.0;
  double r2 = 0.0;
  double tail_from = 0.0;
  std::size_t points = 0;
};

struct DecaySweep {
  std::vector<SweepRow> rows;
  std::optional<DecayFit> fit;
};

DecaySweep sweep(const MultiPoly& phase, std::span<const LabeledMap> maps, std::span<const BumpSpec> fs,
                 std::span<const double> lambdas, const QuadConfig& cfg);

/// Same, rebuilding the adversarial functions for each λ.
DecaySweep sweep_adversarial(const MultiPoly& phase, std::span<const LabeledMap> maps, const Certificate& certificate,
                             std::span<const Box> boxes, std::span<const double> lambdas, const QuadConfig& cfg);

/// Least squares log|I| = log C − ρ log(1 + λ) over rows with λ ≥ tail_from.
DecayFit fit_decay(const DecaySweep& s, double tail_from);

/// (max |I| − min |I|) / max |I| over successful rows.
double relative_spread(const DecaySweep& s);

}  // namespace oscint
