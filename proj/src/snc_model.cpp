#include "berkhyb/snc_model.hpp"

#include "berkhyb/error.hpp"

#include <algorithm>
#include <set>

namespace berkhyb {

SncModel::SncModel(std::string name, std::vector<Component> components, std::vector<Stratum> strata,
                   std::map<std::string, std::map<std::string, std::int64_t>> variables,
                   std::vector<MonomialPullback> pullbacks)
    : name_(std::move(name)),
      components_(std::move(components)),
      strata_(std::move(strata)),
      variables_(std::move(variables)),
      pullbacks_(std::move(pullbacks)) {
  if (components_.empty()) throw ValidationError("model '" + name_ + "' has no components");
  std::set<std::string> labels;
  for (auto& c : components_) {
    if (c.mult <= 0)
      throw ValidationError("component '" + c.label + "' has non-positive multiplicity");
    if (c.label.empty() || c.label == "t")
      throw ValidationError("invalid component label '" + c.label + "'");
    if (!labels.insert(c.label).second)
      throw ValidationError("duplicate component label '" + c.label + "'");
  }
  std::set<std::vector<std::size_t>> declared;
  for (auto& s : strata_) {
    if (s.indices.empty()) throw ValidationError("empty stratum in model '" + name_ + "'");
    std::sort(s.indices.begin(), s.indices.end());
    if (std::adjacent_find(s.indices.begin(), s.indices.end()) != s.indices.end())
      throw ValidationError("repeated index in a stratum of model '" + name_ + "'");
    for (auto i : s.indices)
      if (i >= components_.size())
        throw ValidationError("stratum index out of range in model '" + name_ + "'");
    declared.insert(s.indices);
  }
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (!declared.count({i}))
      throw ValidationError("component '" + components_[i].label + "' has no singleton stratum");
  // Face closure: every nonempty proper subset of a declared J must be declared.
  for (auto& s : strata_) {
    std::size_t k = s.indices.size();
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); ++mask) {
      std::vector<std::size_t> sub;
      for (std::size_t b = 0; b < k; ++b)
        if (mask & (std::uint64_t{1} << b)) sub.push_back(s.indices[b]);
      if (!declared.count(sub))
        throw ValidationError("strata of model '" + name_ + "' are not face-closed");
    }
  }
  for (auto& [var, exps] : variables_) {
    if (var == "t" || labels.count(var))
      throw ValidationError("variable '" + var + "' shadows a component label or t");
    for (auto& [comp, e] : exps) {
      (void)e;
      if (!labels.count(comp))
        throw ConfigError("variable '" + var + "' refers to unknown component '" + comp + "'");
    }
  }
}

std::size_t SncModel::component_index(const std::string& label) const {
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (components_[i].label == label) return i;
  throw ConfigError("unknown component '" + label + "' in model '" + name_ + "'");
}

std::optional<std::size_t> SncModel::find_stratum(const std::vector<std::size_t>& indices) const {
  std::vector<std::size_t> key = indices;
  std::sort(key.begin(), key.end());
  for (std::size_t s = 0; s < strata_.size(); ++s)
    if (strata_[s].indices == key) return s;
  return std::nullopt;
}

std::size_t SncModel::singleton_stratum(std::size_t component) const {
  if (component >= components_.size())
    throw ConfigError("component index " + std::to_string(component) + " out of range");
  return *find_stratum({component});
}

std::vector<std::int64_t> SncModel::variable_exponents(const std::string& label) const {
  std::vector<std::int64_t> out(components_.size(), 0);
  if (label == "t") {
    for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i].mult;
    return out;
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].label == label) {
      out[i] = 1;
      return out;
    }
  }
  auto it = variables_.find(label);
  if (it == variables_.end())
    throw ConfigError("variable '" + label + "' is not identified on model '" + name_ + "'");
  for (auto& [comp, e] : it->second) out[component_index(comp)] += e;
  return out;
}

const MonomialPullback& SncModel::pullback_to(const std::string& target) const {
  for (auto& pb : pullbacks_)
    if (pb.target == target) return pb;
  throw ConfigError("model '" + name_ + "' has no pullback to '" + target + "'");
}

std::int64_t SncModel::euler_characteristic() const {
  std::int64_t chi = 0;
  for (auto& s : strata_) chi += (s.indices.size() % 2 == 1) ? 1 : -1;
  return chi;
}

void ModelRegistry::add(ModelPtr model) {
  if (!model) throw ConfigError("null model");
  if (!models_.emplace(model->name(), model).second)
    throw ConfigError("duplicate model name '" + model->name() + "'");
}

ModelPtr ModelRegistry::get(const std::string& name) const {
  auto it = models_.find(name);
  if (it == models_.end()) throw ConfigError("unknown model '" + name + "'");
  return it->second;
}

std::vector<std::string> ModelRegistry::names() const {
  std::vector<std::string> out;
  for (auto& [n, m] : models_) out.push_back(n);
  return out;
}

void ModelRegistry::validate_pullbacks() const {
  for (auto& [name, model] : models_)
    for (auto& pb : model->pullbacks()) validate_pullback(*model, *get(pb.target), pb);
}

void validate_pullback(const SncModel& source, const SncModel& target, const MonomialPullback& pb) {
  const auto& M = pb.matrix;
  std::string where = "pullback " + source.name() + " -> " + target.name();
  if (M.size() != target.num_components())
    throw ValidationError(where + ": matrix needs one row per target component");
  for (auto& row : M) {
    if (row.size() != source.num_components())
      throw ValidationError(where + ": matrix needs one column per source component");
    for (auto x : row)
      if (x < 0) throw ValidationError(where + ": negative matrix entry");
  }
  for (std::size_t k = 0; k < source.num_components(); ++k) {
    std::int64_t col = 0;
    for (std::size_t i = 0; i < target.num_components(); ++i) col += target.mult(i) * M[i][k];
    if (col != source.mult(k))
      throw ModelInconsistencyError(where + ": multiplicity of '" + source.components()[k].label +
                                    "' is " + std::to_string(source.mult(k)) +
                                    " but the pullback predicts " + std::to_string(col));
  }
}

MonomialPullback identity_pullback(const SncModel& model) {
  MonomialPullback pb;
  pb.target = model.name();
  std::size_t n = model.num_components();
  pb.matrix.assign(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) pb.matrix[i][i] = 1;
  return pb;
}

}  // namespace berkhyb
