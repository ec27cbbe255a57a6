#pragma once

#include "berkhyb/laurent.hpp"
#include "berkhyb/log_linear.hpp"
#include "berkhyb/monge_ampere.hpp"
#include "berkhyb/mz_tree.hpp"
#include "berkhyb/piecewise_affine.hpp"
#include "berkhyb/rational.hpp"
#include "berkhyb/snc_model.hpp"
#include "berkhyb/tropical_metric.hpp"
#include "berkhyb/valuation.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace berkhyb {

using Json = nlohmann::ordered_json;

// Parse errors and missing files raise ConfigError naming the path and, for syntax
// errors, the byte offset.
Json read_json_file(const std::filesystem::path& path);

// Exact numbers are JSON integers or strings "p/q"; floating-point literals are refused.
Rational rational_from_json(const Json& j, const std::string& where);
Json to_json(const Rational& q);

// "p/q", an integer, or {"const": q, "log": {"a": q, ...}, "invlog": {"a": q, ...}}.
LogLinear loglinear_from_json(const Json& j, const std::string& where);
Json to_json(const LogLinear& x);

// Term list [{"exp": [..], "coef": "unit" | q | {"re": q, "im": q}}, ...]; coef defaults
// to "unit".
LaurentSeries laurent_terms_from_json(const Json& terms, const std::vector<std::string>& vars,
                                      const std::string& where);
// {"vars": [...], "terms": [...]}
LaurentSeries laurent_from_json(const Json& j, const std::string& where);
Json to_json(const LaurentSeries& f);

// {"models": [{"name", "components": [{"label", "mult"}], "strata": [[labels], ...],
//   "variables": {"z": {"E": -1}}, "pullbacks": [{"target", "matrix"}]}]}
ModelRegistry models_from_json(const Json& j);

TropicalFSMetric tfs_from_json(const Json& j);
IntersectionTable table_from_json(const Json& j);

// {"breaks": [x...], "pieces": [{"slope": q, "intercept": x}, ...]}
PiecewiseAffine1D pa1d_from_json(const Json& j, const std::string& where);
Json to_json(const PiecewiseAffine1D& f);

Json to_json(const AtomicMeasure& mu);
Json to_json(const QuasiMonomialPoint& v);

// {"origin": q, "branches": {"2": {...}, "inf": {...}, "default": {...}}}. p-adic slopes
// and breaks are given in the branch parameter eps and must be rational multiples of log p
// and 1/log p; the default branch lists slope coefficients of log p under "log_p" and
// breaks in eps * log p under "eta_breaks".
MZFunction mz_function_from_json(const Json& j);
Json to_json(const MZFunction& f);
// [[n, c], ...]
std::vector<MZEntry> mz_family_from_json(const Json& j, const std::string& where);

}  // namespace berkhyb
