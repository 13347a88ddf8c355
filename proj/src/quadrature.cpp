#include "oscint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <limits>
#include <numbers>
#include <thread>

namespace oscint {

namespace {

struct CompiledPoly {
  std::vector<double> coeffs;
  std::vector<Exponents> exps;
  std::size_t num_vars = 0;

  explicit CompiledPoly(const MultiPoly& p) : num_vars(p.num_vars()) {
    for (const auto& [e, c] : p.terms()) {
      coeffs.push_back(to_double(c));
      exps.push_back(e);
    }
  }

  double operator()(const double* x) const {
    double total = 0.0;
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      double term = coeffs[t];
      for (std::size_t i = 0; i < num_vars; ++i)
        for (unsigned k = 0; k < exps[t][i]; ++k) term *= x[i];
      total += term;
    }
    return total;
  }
};

struct CompiledBump {
  std::vector<double> center, half_width;
  std::optional<CompiledPoly> phase;
  double lambda = 0.0;
  Complex amplitude;
};

CompiledBump compile(const BumpSpec& f) {
  CompiledBump c;
  for (const auto& [lo, hi] : f.box) {
    const double a = to_double(lo), b = to_double(hi);
    c.center.push_back(0.5 * (a + b));
    c.half_width.push_back(0.5 * (b - a));
  }
  if (f.modulation) {
    c.phase.emplace(f.modulation->phase);
    c.lambda = f.modulation->lambda;
  }
  c.amplitude = f.amplitude;
  return c;
}

void validate_box(const Box& box, const char* what) {
  for (const auto& [lo, hi] : box)
    if (!(lo < hi)) throw PreconditionError(std::string(what) + ": empty or inverted interval");
}

unsigned worker_count(unsigned requested) {
  if (requested) return requested;
  if (const char* env = std::getenv("OSCINT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

double bump_profile(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

BumpSpec BumpSpec::smooth(Box box) {
  validate_box(box, "bump");
  BumpSpec f;
  f.box = std::move(box);
  return f;
}

BumpSpec BumpSpec::modulated(Box box, MultiPoly phase, double lambda) {
  if (phase.num_vars() != box.size()) throw DimensionMismatch("modulated bump: phase and box dimensions differ");
  BumpSpec f = smooth(std::move(box));
  f.modulation = Modulation{std::move(phase), lambda};
  return f;
}

Complex BumpSpec::operator()(std::span<const double> t) const {
  if (t.size() != box.size()) throw DimensionMismatch("bump evaluated at a point of the wrong dimension");
  double value = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double a = to_double(box[k].first), b = to_double(box[k].second);
    value *= bump_profile((2.0 * t[k] - (a + b)) / (b - a));
  }
  Complex out = amplitude * value;
  if (modulation && value != 0.0) out *= std::polar(1.0, -modulation->lambda * modulation->phase.evaluate(t));
  return out;
}

std::size_t default_node_cap(std::size_t dim) {
  if (dim <= 2) return 4096;
  if (dim == 3) return 512;
  return 64;
}

Rule1D gauss_legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, Rule1D> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  if (n == 0) throw PreconditionError("gauss_legendre: need at least one node");

  Rule1D rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      derivative = nd * (z * p1 - p2) / (z * z - 1.0);
      const double previous = z;
      z = previous - p1 / derivative;
      if (std::abs(z - previous) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * derivative * derivative);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  std::lock_guard lock(mutex);
  return cache.emplace(n, std::move(rule)).first->second;
}

Rule1D midpoint_rule(std::size_t n) {
  if (n == 0) throw PreconditionError("midpoint_rule: need at least one node");
  Rule1D rule;
  const double h = 2.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes.push_back(-1.0 + (static_cast<double>(i) + 0.5) * h);
    rule.weights.push_back(h);
  }
  return rule;
}

Box support_bounding_box(std::span<const LabeledMap> maps, std::span<const Box> boxes) {
  if (maps.empty() || maps.size() != boxes.size()) throw PreconditionError("support_bounding_box: need one box per map");
  const Index m = maps.front().matrix.cols();
  Index rows = 0;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    if (maps[j].matrix.cols() != m) throw DimensionMismatch("support_bounding_box: maps disagree on dimension");
    if (static_cast<Index>(boxes[j].size()) != maps[j].matrix.rows())
      throw DimensionMismatch("support_bounding_box: box of '" + maps[j].label + "' has the wrong dimension");
    rows += maps[j].matrix.rows();
  }
  RatMat stacked(rows, m);
  std::vector<std::pair<Rat, Rat>> ranges;
  Index r = 0;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    stacked.middleRows(r, maps[j].matrix.rows()) = maps[j].matrix;
    r += maps[j].matrix.rows();
    ranges.insert(ranges.end(), boxes[j].begin(), boxes[j].end());
  }
  if (exact_rank(stacked) != m)
    throw PreconditionError("support_bounding_box: the maps jointly have a kernel, so the support is unbounded");

  RatMat left_inverse;
  solve_exact(RatMat(stacked.transpose() * stacked), RatMat(stacked.transpose()), left_inverse);
  Box out;
  for (Index i = 0; i < m; ++i) {
    Rat lo = 0, hi = 0;
    for (Index k = 0; k < rows; ++k) {
      const Rat a = left_inverse(i, k) * ranges[static_cast<std::size_t>(k)].first;
      const Rat b = left_inverse(i, k) * ranges[static_cast<std::size_t>(k)].second;
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    out.emplace_back(lo, hi);
  }
  return out;
}

Complex integrate_on_grid(const MultiPoly& phase, double lambda, std::span<const LabeledMap> maps,
                          std::span<const BumpSpec> fs, const Box& domain, QuadRule rule, std::size_t nodes_per_axis,
                          unsigned threads) {
  const std::size_t m = phase.num_vars();
  if (domain.size() != m) throw DimensionMismatch("domain box dimension differs from the phase's variable count");
  if (fs.size() != maps.size()) throw PreconditionError("need exactly one function per map");
  for (std::size_t j = 0; j < maps.size(); ++j) {
    if (static_cast<std::size_t>(maps[j].matrix.cols()) != m)
      throw DimensionMismatch("map '" + maps[j].label + "' has the wrong column count");
    if (fs[j].dim() != static_cast<std::size_t>(maps[j].matrix.rows()))
      throw DimensionMismatch("box of function " + std::to_string(j) + " does not match map '" + maps[j].label + "'");
  }
  validate_box(domain, "domain box");
  if (m == 0) throw PreconditionError("integrate_on_grid: zero-dimensional domain");

  const Rule1D base = rule == QuadRule::GaussLegendre ? gauss_legendre(nodes_per_axis) : midpoint_rule(nodes_per_axis);
  const std::size_t n = base.nodes.size();
  std::vector<std::vector<double>> x(m), w(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double a = to_double(domain[i].first), b = to_double(domain[i].second);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < n; ++k) {
      x[i].push_back(mid + half * base.nodes[k]);
      w[i].push_back(half * base.weights[k]);
    }
  }

  const CompiledPoly compiled_phase(phase);
  std::vector<CompiledBump> bumps;
  std::vector<MatX<double>> mats;
  Complex amplitude{1.0, 0.0};
  for (std::size_t j = 0; j < maps.size(); ++j) {
    bumps.push_back(compile(fs[j]));
    mats.push_back(to_double(maps[j].matrix));
    amplitude *= bumps.back().amplitude;
  }

  auto slab_sum = [&](std::size_t k0) {
    std::vector<std::size_t> idx(m, 0);
    idx[0] = k0;
    std::vector<double> point(m), t;
    Complex total{0.0, 0.0};
    while (true) {
      double weight = 1.0;
      for (std::size_t i = 0; i < m; ++i) {
        point[i] = x[i][idx[i]];
        weight *= w[i][idx[i]];
      }
      double log_bump = 0.0;
      double total_phase = lambda * compiled_phase(point.data());
      bool inside = true;
      for (std::size_t j = 0; j < bumps.size() && inside; ++j) {
        const auto& mat = mats[j];
        const auto& bump = bumps[j];
        t.assign(static_cast<std::size_t>(mat.rows()), 0.0);
        for (Index r = 0; r < mat.rows(); ++r) {
          double v = 0.0;
          for (std::size_t c = 0; c < m; ++c) v += mat(r, static_cast<Index>(c)) * point[c];
          t[static_cast<std::size_t>(r)] = v;
          const double s = (v - bump.center[static_cast<std::size_t>(r)]) / bump.half_width[static_cast<std::size_t>(r)];
          if (s <= -1.0 || s >= 1.0) {
            inside = false;
            break;
          }
          log_bump -= 1.0 / (1.0 - s * s);
        }
        if (inside && bump.phase) total_phase -= bump.lambda * (*bump.phase)(t.data());
      }
      if (inside) total += std::polar(weight * std::exp(log_bump), total_phase);

      // Advance the odometer over axes m-1 .. 1; axis 0 is fixed per slab.
      std::size_t axis = m - 1;
      while (axis >= 1) {
        if (++idx[axis] < n) break;
        idx[axis] = 0;
        --axis;
      }
      if (axis == 0) return total;
    }
  };

  std::vector<Complex> slabs(n);
  const unsigned workers = std::min<unsigned>(worker_count(threads), static_cast<unsigned>(n));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) slabs[k] = slab_sum(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t k = t; k < n; k += workers) slabs[k] = slab_sum(k);
      });
  }
  Complex total{0.0, 0.0};
  for (const Complex& s : slabs) total += s;
  return amplitude * total;
}

QuadResult eval_integral(const MultiPoly& phase, double lambda, std::span<const LabeledMap> maps,
                         std::span<const BumpSpec> fs, const QuadConfig& cfg) {
  if (cfg.nodes_per_axis < 8) throw PreconditionError("quadrature: nodes_per_axis must be at least 8");
  if (!(cfg.refine_tol > 0.0)) throw PreconditionError("quadrature: refine_tol must be positive");
  const std::size_t cap = cfg.max_nodes_per_axis ? cfg.max_nodes_per_axis : default_node_cap(phase.num_vars());
  if (cfg.nodes_per_axis > cap) throw PreconditionError("quadrature: starting node count exceeds the cap");

  QuadResult result;
  std::size_t n = cfg.nodes_per_axis;
  Complex previous = integrate_on_grid(phase, lambda, maps, fs, cfg.domain_box, cfg.rule, n, cfg.threads);
  result.history.emplace_back(n, previous);
  while (true) {
    if (2 * n > cap) {
      const Complex before = result.history.size() > 1 ? result.history[result.history.size() - 2].second : previous;
      throw NodeCapExceeded("quadrature did not converge to " + std::to_string(cfg.refine_tol) + " within " +
                                std::to_string(cap) + " nodes per axis",
                            before.real(), before.imag(), previous.real(), previous.imag(), n);
    }
    n *= 2;
    const Complex current = integrate_on_grid(phase, lambda, maps, fs, cfg.domain_box, cfg.rule, n, cfg.threads);
    result.history.emplace_back(n, current);
    const double change = std::abs(current - previous);
    if (change <= cfg.refine_tol * std::abs(current) || change <= cfg.abs_floor) {
      result.value = current;
      result.nodes_per_axis = n;
      return result;
    }
    previous = current;
  }
}

std::vector<BumpSpec> adversarial_functions(const MultiPoly& phase, std::span<const LabeledMap> maps,
                                            const Certificate& certificate, std::span<const Box> boxes,
                                            double lambda) {
  if (boxes.size() != maps.size()) throw PreconditionError("adversarial_functions: need one box per map");
  if (!(expand_certificate(certificate, maps) == phase))
    throw InvalidCertificate("certificate does not reproduce the phase: sum of Q_j o pi_j != P");
  std::vector<BumpSpec> out;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    const MultiPoly& q = certificate[j].second;
    if (lambda == 0.0 || q.is_zero())
      out.push_back(BumpSpec::smooth(boxes[j]));
    else
      out.push_back(BumpSpec::modulated(boxes[j], q, lambda));
  }
  return out;
}

namespace {

void check_lambdas(std::span<const double> lambdas) {
  if (lambdas.size() < 4) throw PreconditionError("sweep: need at least 4 lambda values");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw PreconditionError("sweep: lambda values must be strictly increasing");
}

template <typename MakeFunctions>
DecaySweep run_sweep(const MultiPoly& phase, std::span<const LabeledMap> maps, std::span<const double> lambdas,
                     const QuadConfig& cfg, MakeFunctions&& make) {
  check_lambdas(lambdas);
  DecaySweep out;
  for (double lambda : lambdas) {
    SweepRow row;
    row.lambda = lambda;
    try {
      const std::vector<BumpSpec> fs = make(lambda);
      const QuadResult q = eval_integral(phase, lambda, maps, fs, cfg);
      row.value = q.value;
      row.nodes = q.nodes_per_axis;
    } catch (const NodeCapExceeded& e) {
      row.failed = true;
      row.value = Complex(e.last_re, e.last_im);
      row.nodes = e.nodes_per_axis;
      row.error = e.what();
    }
    row.abs = std::abs(row.value);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

DecaySweep sweep(const MultiPoly& phase, std::span<const LabeledMap> maps, std::span<const BumpSpec> fs,
                 std::span<const double> lambdas, const QuadConfig& cfg) {
  std::vector<BumpSpec> fixed(fs.begin(), fs.end());
  return run_sweep(phase, maps, lambdas, cfg, [&](double) { return fixed; });
}

DecaySweep sweep_adversarial(const MultiPoly& phase, std::span<const LabeledMap> maps, const Certificate& certificate,
                             std::span<const Box> boxes, std::span<const double> lambdas, const QuadConfig& cfg) {
  adversarial_functions(phase, maps, certificate, boxes, 0.0);
  return run_sweep(phase, maps, lambdas, cfg,
                   [&](double lambda) { return adversarial_functions(phase, maps, certificate, boxes, lambda); });
}

DecayFit fit_decay(const DecaySweep& s, double tail_from) {
  std::vector<double> xs, ys;
  for (const auto& row : s.rows) {
    if (row.failed || row.lambda < tail_from || !(row.abs > 0.0)) continue;
    xs.push_back(std::log1p(std::abs(row.lambda)));
    ys.push_back(std::log(row.abs));
  }
  if (xs.size() < 3)
    throw InsufficientTail("fit_decay: " + std::to_string(xs.size()) + " usable rows at lambda >= " +
                           std::to_string(tail_from) + ", need 3");

  Eigen::MatrixX2d design(static_cast<Index>(xs.size()), 2);
  Eigen::VectorXd rhs(static_cast<Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    design(static_cast<Index>(i), 0) = 1.0;
    design(static_cast<Index>(i), 1) = xs[i];
    rhs(static_cast<Index>(i)) = ys[i];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd fitted = design * coef;
  const double mean = rhs.mean();
  const double ss_res = (rhs - fitted).squaredNorm();
  const double ss_tot = (rhs.array() - mean).square().sum();

  DecayFit fit;
  fit.log_c = coef(0);
  fit.rho = -coef(1);
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res <= 1e-24 ? 1.0 : 0.0);
  fit.tail_from = tail_from;
  fit.points = xs.size();
  return fit;
}

double relative_spread(const DecaySweep& s) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& row : s.rows) {
    if (row.failed) continue;
    lo = std::min(lo, row.abs);
    hi = std::max(hi, row.abs);
  }
  if (hi == 0.0) return 0.0;
  return (hi - lo) / hi;
}

}  // namespace oscint
