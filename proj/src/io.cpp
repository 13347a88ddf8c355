#include "oscint/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace oscint::io {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + "." + key, "missing field");
  return *it;
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where, "expected an array");
  return j;
}

std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw InputError(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where, "expected a number");
  return j.get<double>();
}

}  // namespace

Rat rat_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_unsigned()) return Rat(BigInt(j.get<unsigned long long>()));
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InputError(where, e.what());
    }
  }
  throw InputError(where, "expected a rational as \"p/q\" string or an integer");
}

json rat_to_json(const Rat& r) { return to_string(r); }

RatMat matrix_from_json(const json& j, const std::string& where, Index expected_cols) {
  array(j, where);
  const Index rows = static_cast<Index>(j.size());
  Index cols = expected_cols;
  for (std::size_t i = 0; i < j.size(); ++i) {
    array(j[i], at(where, i));
    if (cols < 0) cols = static_cast<Index>(j[i].size());
    if (static_cast<Index>(j[i].size()) != cols)
      throw InputError(at(where, i), "expected " + std::to_string(cols) + " entries, got " + std::to_string(j[i].size()));
  }
  RatMat m(rows, std::max<Index>(cols, 0));
  for (std::size_t i = 0; i < j.size(); ++i)
    for (std::size_t k = 0; k < j[i].size(); ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) = rat_from_json(j[i][k], at(at(where, i), k));
  return m;
}

json matrix_to_json(const RatMat& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(rat_to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

json subspace_to_json(const Subspace& s) { return matrix_to_json(RatMat(s.basis().transpose())); }

Snarl snarl_from_json(const json& j) {
  const std::size_t m = count(field(j, "m", "snarl"), "snarl.m");
  const json& subspaces = array(field(j, "subspaces", "snarl"), "snarl.subspaces");
  std::vector<SnarlEntry> entries;
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    const std::string where = at("snarl.subspaces", i);
    const json& e = subspaces[i];
    const json& label = field(e, "label", where);
    if (!label.is_string()) throw InputError(where + ".label", "expected a string");
    Subspace s(static_cast<Index>(m));
    if (e.contains("basis")) {
      const RatMat rows = matrix_from_json(e["basis"], where + ".basis", static_cast<Index>(m));
      s = Subspace::span(RatMat(rows.transpose()));
      if (s.dim() != rows.rows()) throw InputError(where + ".basis", "basis vectors are linearly dependent");
    } else if (e.contains("kernel_of")) {
      s = kernel(matrix_from_json(e["kernel_of"], where + ".kernel_of", static_cast<Index>(m)));
    } else {
      throw InputError(where, "needs \"basis\" or \"kernel_of\"");
    }
    entries.push_back({label.get<std::string>(), std::move(s)});
  }
  try {
    return Snarl(static_cast<Index>(m), std::move(entries));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError("snarl", e.what());
  }
}

json snarl_to_json(const Snarl& s) {
  json subspaces = json::array();
  for (const auto& e : s.entries())
    subspaces.push_back({{"label", e.label}, {"basis", subspace_to_json(e.subspace)}, {"codim", e.subspace.codim()}});
  return {{"m", s.ambient_dim()}, {"subspaces", std::move(subspaces)}};
}

MultiPoly poly_from_json(const json& j, const std::string& where) {
  const std::size_t vars = count(field(j, "vars", where), where + ".vars");
  const json& terms = array(field(j, "terms", where), where + ".terms");
  MultiPoly p(vars);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string w = at(where + ".terms", i);
    const json& exps = array(field(terms[i], "exps", w), w + ".exps");
    if (exps.size() != vars) throw InputError(w + ".exps", "expected " + std::to_string(vars) + " exponents");
    Exponents e;
    for (std::size_t k = 0; k < exps.size(); ++k) e.push_back(static_cast<unsigned>(count(exps[k], at(w + ".exps", k))));
    p.add_term(e, rat_from_json(field(terms[i], "coeff", w), w + ".coeff"));
  }
  return p;
}

json poly_to_json(const MultiPoly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exps", e}, {"coeff", rat_to_json(c)}});
  return {{"vars", p.num_vars()}, {"terms", std::move(terms)}};
}

json real_poly_to_json(const RealPoly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exps", e}, {"coeff", c}});
  return {{"vars", p.num_vars()}, {"terms", std::move(terms)}};
}

std::vector<LabeledMap> maps_from_json(const json& j, const std::string& where) {
  const json& list = j.is_object() ? field(j, "maps", where) : j;
  const std::string w = j.is_object() ? where + ".maps" : where;
  array(list, w);
  if (list.empty()) throw InputError(w, "need at least one map");
  std::vector<LabeledMap> maps;
  Index cols = -1;
  if (j.is_object() && j.contains("m")) cols = static_cast<Index>(count(j["m"], where + ".m"));
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string wi = at(w, i);
    const json& label = field(list[i], "label", wi);
    if (!label.is_string()) throw InputError(wi + ".label", "expected a string");
    RatMat m = matrix_from_json(field(list[i], "matrix", wi), wi + ".matrix", cols);
    if (m.rows() == 0) throw InputError(wi + ".matrix", "map has no rows");
    cols = m.cols();
    maps.push_back({label.get<std::string>(), std::move(m)});
  }
  return maps;
}

json maps_to_json(const std::vector<LabeledMap>& maps) {
  json list = json::array();
  for (const auto& m : maps) list.push_back({{"label", m.label}, {"matrix", matrix_to_json(m.matrix)}});
  return {{"maps", std::move(list)}};
}

json certificate_to_json(const Certificate& c) {
  json out = json::array();
  for (const auto& [label, q] : c) out.push_back({{"label", label}, {"poly", poly_to_json(q)}});
  return out;
}

Certificate certificate_from_json(const json& j, const std::string& where) {
  array(j, where);
  Certificate c;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    const json& label = field(j[i], "label", w);
    if (!label.is_string()) throw InputError(w + ".label", "expected a string");
    c.emplace_back(label.get<std::string>(), poly_from_json(field(j[i], "poly", w), w + ".poly"));
  }
  return c;
}

namespace {

std::vector<std::string> labels_from_json(const json& j, const std::string& where) {
  array(j, where);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw InputError(at(where, i), "expected a label");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

Subspace subspace_from_rows(const json& j, const std::string& where, Index m) {
  const RatMat rows = matrix_from_json(j, where, m);
  if (rows.rows() == 0) return Subspace::zero(m);
  return Subspace::span(RatMat(rows.transpose()));
}

}  // namespace

json resolution_to_json(const Resolution& r) {
  json chain = json::array();
  for (const auto& s : r.chain) chain.push_back(snarl_to_json(s));
  json steps = json::array();
  for (const auto& step : r.steps) {
    steps.push_back({{"alpha0", step.witness.alpha0},
                     {"beta1", step.witness.beta1},
                     {"beta2", step.witness.beta2},
                     {"partition", {{"first", step.witness.partition_first}, {"second", step.witness.partition_second}}},
                     {"w_first", subspace_to_json(step.w_first)},
                     {"w_second", subspace_to_json(step.w_second)},
                     {"kappa_first", step.kappa_first},
                     {"kappa_second", step.kappa_second},
                     {"seeds", step.seeds_used}});
  }
  return {{"seed", r.seed},
          {"chain", std::move(chain)},
          {"steps", std::move(steps)},
          {"terminal_general_position", r.terminal_general_position}};
}

Resolution resolution_from_json(const json& j) {
  Resolution r;
  const json& seed = field(j, "seed", "resolution");
  if (!seed.is_number_integer()) throw InputError("resolution.seed", "expected an integer");
  r.seed = seed.get<std::uint64_t>();
  const json& chain = array(field(j, "chain", "resolution"), "resolution.chain");
  for (const auto& s : chain) r.chain.push_back(snarl_from_json(s));
  const json& steps = array(field(j, "steps", "resolution"), "resolution.steps");
  if (r.chain.size() != steps.size() + 1)
    throw InputError("resolution.steps", "chain must hold exactly one more snarl than there are steps");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string w = at("resolution.steps", k);
    const json& s = steps[k];
    const Index m = r.chain[k].ambient_dim();
    SplitWitness witness;
    witness.alpha0 = field(s, "alpha0", w).get<std::string>();
    witness.beta1 = field(s, "beta1", w).get<std::string>();
    witness.beta2 = field(s, "beta2", w).get<std::string>();
    const json& part = field(s, "partition", w);
    witness.partition_first = labels_from_json(field(part, "first", w + ".partition"), w + ".partition.first");
    witness.partition_second = labels_from_json(field(part, "second", w + ".partition"), w + ".partition.second");
    SplittingStep step{r.chain[k],
                       r.chain[k + 1],
                       std::move(witness),
                       subspace_from_rows(field(s, "w_first", w), w + ".w_first", m),
                       subspace_from_rows(field(s, "w_second", w), w + ".w_second", m),
                       static_cast<Index>(count(field(s, "kappa_first", w), w + ".kappa_first")),
                       static_cast<Index>(count(field(s, "kappa_second", w), w + ".kappa_second")),
                       field(s, "seeds", w).get<std::vector<std::uint64_t>>()};
    r.steps.push_back(std::move(step));
  }
  r.terminal_general_position = field(j, "terminal_general_position", "resolution").get<bool>();
  return r;
}

json report_to_json(const ResolutionReport& r) {
  json steps = json::array();
  for (const auto& c : r.steps)
    steps.push_back({{"index", c.index},
                     {"passed", c.passed()},
                     {"linked", c.linked},
                     {"transverse", c.transverse},
                     {"conservation", c.conservation},
                     {"certificate", c.certificate},
                     {"detail", c.detail}});
  return {{"passed", r.passed()},
          {"steps", std::move(steps)},
          {"terminal_one_dimensional", r.terminal_one_dimensional},
          {"terminal_general_position", r.terminal_general_position}};
}

json degeneracy_to_json(const DegeneracyReport& r) {
  return {{"is_degenerate", r.is_degenerate},
          {"certificate", r.certificate ? certificate_to_json(*r.certificate) : json(nullptr)},
          {"quotient_norm", r.quotient_norm},
          {"residual", real_poly_to_json(r.residual)}};
}

Box box_from_json(const json& j, const std::string& where) {
  array(j, where);
  Box b;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    if (!j[i].is_array() || j[i].size() != 2) throw InputError(w, "expected [lo, hi]");
    Rat lo = rat_from_json(j[i][0], w + "[0]"), hi = rat_from_json(j[i][1], w + "[1]");
    if (!(lo < hi)) throw InputError(w, "interval is empty");
    b.emplace_back(std::move(lo), std::move(hi));
  }
  return b;
}

json box_to_json(const Box& b) {
  json out = json::array();
  for (const auto& [lo, hi] : b) out.push_back({rat_to_json(lo), rat_to_json(hi)});
  return out;
}

RunSpec runspec_from_json(const json& j) {
  RunSpec spec;
  spec.phase = poly_from_json(field(j, "phase", "runspec"), "runspec.phase");
  spec.maps = maps_from_json(field(j, "maps", "runspec"), "runspec.maps");
  for (const auto& m : spec.maps)
    if (static_cast<std::size_t>(m.matrix.cols()) != spec.phase.num_vars())
      throw InputError("runspec.maps", "map '" + m.label + "' does not act on the phase's variables");

  const json& bumps = array(field(j, "bumps", "runspec"), "runspec.bumps");
  if (bumps.size() != spec.maps.size()) throw InputError("runspec.bumps", "need one bump per map");
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    const std::string w = at("runspec.bumps", i);
    if (bumps[i].contains("kind") && bumps[i]["kind"] != "smooth-bump")
      throw InputError(w + ".kind", "only \"smooth-bump\" is accepted in run specs; modulation comes from --adversarial");
    Box b = box_from_json(field(bumps[i], "box", w), w + ".box");
    if (static_cast<Index>(b.size()) != spec.maps[i].matrix.rows())
      throw InputError(w + ".box", "box dimension must equal the rows of map '" + spec.maps[i].label + "'");
    spec.boxes.push_back(std::move(b));
  }

  const json& lambdas = array(field(j, "lambdas", "runspec"), "runspec.lambdas");
  for (std::size_t i = 0; i < lambdas.size(); ++i) spec.lambdas.push_back(number(lambdas[i], at("runspec.lambdas", i)));
  if (spec.lambdas.size() < 4) throw InputError("runspec.lambdas", "need at least 4 lambda values");
  for (std::size_t i = 1; i < spec.lambdas.size(); ++i)
    if (!(spec.lambdas[i] > spec.lambdas[i - 1])) throw InputError("runspec.lambdas", "must be strictly increasing");

  const json q = j.contains("quadrature") ? j["quadrature"] : json::object();
  if (!q.is_object()) throw InputError("runspec.quadrature", "expected an object");
  QuadConfig& cfg = spec.quadrature;
  if (q.contains("nodes_per_axis")) cfg.nodes_per_axis = count(q["nodes_per_axis"], "runspec.quadrature.nodes_per_axis");
  if (cfg.nodes_per_axis < 8) throw InputError("runspec.quadrature.nodes_per_axis", "must be at least 8");
  if (q.contains("max_nodes_per_axis"))
    cfg.max_nodes_per_axis = count(q["max_nodes_per_axis"], "runspec.quadrature.max_nodes_per_axis");
  if (q.contains("refine_tol")) cfg.refine_tol = number(q["refine_tol"], "runspec.quadrature.refine_tol");
  if (!(cfg.refine_tol > 0.0)) throw InputError("runspec.quadrature.refine_tol", "must be positive");
  if (q.contains("rule")) {
    const std::string rule = q["rule"].is_string() ? q["rule"].get<std::string>() : "";
    if (rule == "gauss-legendre")
      cfg.rule = QuadRule::GaussLegendre;
    else if (rule == "midpoint")
      cfg.rule = QuadRule::Midpoint;
    else
      throw InputError("runspec.quadrature.rule", "expected \"gauss-legendre\" or \"midpoint\"");
  }
  if (q.contains("domain_box")) {
    cfg.domain_box = box_from_json(q["domain_box"], "runspec.quadrature.domain_box");
    if (cfg.domain_box.size() != spec.phase.num_vars())
      throw InputError("runspec.quadrature.domain_box", "dimension must equal the phase's variable count");
  } else {
    try {
      cfg.domain_box = support_bounding_box(spec.maps, spec.boxes);
    } catch (const Error& e) {
      throw InputError("runspec.quadrature.domain_box", std::string("missing and cannot be inferred: ") + e.what());
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw InputError("runspec.seed", "expected an integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  spec.tail_from = j.contains("tail_from") ? number(j["tail_from"], "runspec.tail_from") : spec.lambdas.front();
  if (j.contains("adversarial")) spec.adversarial = j["adversarial"].get<bool>();
  return spec;
}

json sweep_to_json(const DecaySweep& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row = {{"lambda", r.lambda}, {"re", r.value.real()}, {"im", r.value.imag()},
                {"abs", r.abs},       {"nodes", r.nodes},     {"failed", r.failed}};
    if (r.failed) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  json fit = nullptr;
  if (s.fit)
    fit = {{"rho", s.fit->rho},
           {"log_c", s.fit->log_c},
           {"r2", s.fit->r2},
           {"tail_from", s.fit->tail_from},
           {"points", s.fit->points}};
  return {{"rows", std::move(rows)}, {"fit", std::move(fit)}};
}

std::string sweep_to_csv(const DecaySweep& s) {
  std::ostringstream out;
  out << "lambda,re,im,abs,nodes\n" << std::setprecision(17);
  for (const auto& r : s.rows)
    out << r.lambda << ',' << r.value.real() << ',' << r.value.imag() << ',' << r.abs << ',' << r.nodes << '\n';
  return out.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path, e.what());
  }
}

}  // namespace oscint::io
