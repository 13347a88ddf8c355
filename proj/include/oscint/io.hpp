#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "oscint/quadrature.hpp"
#include "oscint/resolution.hpp"

namespace oscint::io {

using json = nlohmann::json;
using nlohmann::ordered_json;

// Rationals travel as "p/q" strings; bare JSON integers are accepted on input.
Rat rat_from_json(const json& j, const std::string& where);
json rat_to_json(const Rat& r);

RatMat matrix_from_json(const json& j, const std::string& where, Index expected_cols = -1);
json matrix_to_json(const RatMat& m);

/// Basis vectors as a list of m-vectors (JSON rows).
json subspace_to_json(const Subspace& s);

/// {"m": 4, "subspaces": [{"label": "pi0", "basis": [["0","1","0","0"], ...]}, ...]}
/// An entry may give "kernel_of": <matrix> instead of "basis".
Snarl snarl_from_json(const json& j);
json snarl_to_json(const Snarl& s);

/// {"vars": 4, "terms": [{"exps": [1,0,0,1], "coeff": "1"}, ...]}
MultiPoly poly_from_json(const json& j, const std::string& where = "poly");
json poly_to_json(const MultiPoly& p);
json real_poly_to_json(const RealPoly& p);

/// {"maps": [{"label": "pi0", "matrix": [[...], ...]}, ...]} or a bare list.
std::vector<LabeledMap> maps_from_json(const json& j, const std::string& where = "maps");
json maps_to_json(const std::vector<LabeledMap>& maps);

json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const json& j, const std::string& where = "certificate");

json resolution_to_json(const Resolution& r);
Resolution resolution_from_json(const json& j);
json report_to_json(const ResolutionReport& r);

json degeneracy_to_json(const DegeneracyReport& r);

Box box_from_json(const json& j, const std::string& where);
json box_to_json(const Box& b);

/// Bundle for a decay sweep.
struct RunSpec {
  MultiPoly phase;
  std::vector<LabeledMap> maps;
  std::vector<Box> boxes;
  std::vector<double> lambdas;
  QuadConfig quadrature;
  std::uint64_t seed = 0;
  double tail_from = 0.0;
  bool adversarial = false;
};

RunSpec runspec_from_json(const json& j);

json sweep_to_json(const DecaySweep& s);
std::string sweep_to_csv(const DecaySweep& s);

/// Reads and parses a JSON file; parse errors become InputError naming the line.
json read_json_file(const std::string& path);

}  // namespace oscint::io
