#pragma once

#include "berkhyb/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace berkhyb {

struct Component {
  std::string label;
  std::int64_t mult = 1;
};

// A connected component Y of D_J. Indices are sorted and distinct.
struct Stratum {
  std::vector<std::size_t> indices;
  std::string label;
};

// Target local equation z_i pulls back to prod_k (z'_k)^{M_ik} times a unit.
// Rows index target components, columns index source components.
struct MonomialPullback {
  std::string target;
  std::vector<std::vector<std::int64_t>> matrix;
};

// Combinatorial description of an snc model: components with multiplicities, declared
// strata, named local coordinates, and monomial pullbacks to coarser models.
class SncModel {
 public:
  // Validates multiplicities, singleton strata, index ranges, face closure and variable
  // maps. Throws ValidationError / ConfigError.
  SncModel(std::string name, std::vector<Component> components, std::vector<Stratum> strata,
           std::map<std::string, std::map<std::string, std::int64_t>> variables = {},
           std::vector<MonomialPullback> pullbacks = {});

  const std::string& name() const { return name_; }
  const std::vector<Component>& components() const { return components_; }
  const std::vector<Stratum>& strata() const { return strata_; }
  const std::map<std::string, std::map<std::string, std::int64_t>>& variables() const {
    return variables_;
  }
  const std::vector<MonomialPullback>& pullbacks() const { return pullbacks_; }

  std::size_t num_components() const { return components_.size(); }
  std::int64_t mult(std::size_t i) const { return components_.at(i).mult; }
  std::size_t component_index(const std::string& label) const;

  // First declared stratum with exactly these indices.
  std::optional<std::size_t> find_stratum(const std::vector<std::size_t>& indices) const;
  std::size_t singleton_stratum(std::size_t component) const;

  // Exponent vector over all components of the local expression of a coordinate:
  // a component label maps to e_i, "t" to (a_1, ..., a_n), other labels through the
  // declared variable map. Unknown labels raise ConfigError.
  std::vector<std::int64_t> variable_exponents(const std::string& label) const;

  const MonomialPullback& pullback_to(const std::string& target) const;

  // Alternating count sum_J (-1)^{|J|-1} over declared strata.
  std::int64_t euler_characteristic() const;

 private:
  std::string name_;
  std::vector<Component> components_;
  std::vector<Stratum> strata_;
  std::map<std::string, std::map<std::string, std::int64_t>> variables_;
  std::vector<MonomialPullback> pullbacks_;
};

using ModelPtr = std::shared_ptr<const SncModel>;

// Models addressed by name so pullbacks can be resolved.
class ModelRegistry {
 public:
  void add(ModelPtr model);
  ModelPtr get(const std::string& name) const;
  bool contains(const std::string& name) const { return models_.count(name) > 0; }
  std::vector<std::string> names() const;

  // Checks every pullback of every model: target exists, matrix shape, non-negative
  // entries, and multiplicity compatibility a'_k = sum_i a_i M_ik.
  void validate_pullbacks() const;

 private:
  std::map<std::string, ModelPtr> models_;
};

void validate_pullback(const SncModel& source, const SncModel& target, const MonomialPullback& pb);

// Identity pullback of a model onto itself.
MonomialPullback identity_pullback(const SncModel& model);

}  // namespace berkhyb
