#include "chaininf/core/space.hpp"

#include <algorithm>
#include <unordered_set>

#include "chaininf/errors.hpp"

namespace chaininf {

Space::Space(std::vector<Variable> vars) : vars_(std::move(vars)) {
  std::unordered_set<std::string> seen;
  for (const auto& v : vars_) {
    if (v.labels.size() < 2) {
      throw DomainError("variable '" + v.name + "' needs at least two labels");
    }
    if (!seen.insert(v.name).second) {
      throw DomainError("duplicate variable name '" + v.name + "' in space");
    }
    size_ *= v.labels.size();
  }
}

Space Space::indexed(const std::string& name, std::size_t cardinality) {
  Variable v{name, {}};
  for (std::size_t i = 0; i < cardinality; ++i) v.labels.push_back(name + "_" + std::to_string(i));
  return Space{std::move(v)};
}

std::optional<std::size_t> Space::find(const std::string& name) const {
  auto it = std::find_if(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.name == name; });
  if (it == vars_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vars_.begin());
}

std::size_t Space::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw DomainError("unknown variable '" + name + "'");
}

std::vector<std::size_t> Space::strides() const {
  std::vector<std::size_t> s(vars_.size());
  std::size_t acc = 1;
  for (std::size_t i = vars_.size(); i-- > 0;) {
    s[i] = acc;
    acc *= vars_[i].cardinality();
  }
  return s;
}

std::vector<std::size_t> Space::unflatten(std::size_t flat) const {
  std::vector<std::size_t> coords(vars_.size());
  for (std::size_t i = vars_.size(); i-- > 0;) {
    coords[i] = flat % vars_[i].cardinality();
    flat /= vars_[i].cardinality();
  }
  return coords;
}

std::size_t Space::flatten(std::span<const std::size_t> coords) const {
  if (coords.size() != vars_.size()) throw DomainError("coordinate count does not match space rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (coords[i] >= vars_[i].cardinality()) throw DomainError("coordinate out of range");
    flat = flat * vars_[i].cardinality() + coords[i];
  }
  return flat;
}

std::string Space::label_of(std::size_t flat) const {
  if (vars_.empty()) return "0";
  const auto coords = unflatten(flat);
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ',';
    out += vars_[i].labels[coords[i]];
  }
  return out;
}

Space Space::select(std::span<const std::size_t> coords) const {
  std::vector<Variable> vs;
  vs.reserve(coords.size());
  for (auto c : coords) vs.push_back(var(c));
  return Space(std::move(vs));
}

Space concat(const Space& a, const Space& b) {
  std::vector<Variable> vars = a.vars();
  std::unordered_set<std::string> used;
  for (const auto& v : vars) used.insert(v.name);
  for (Variable v : b.vars()) {
    if (used.count(v.name)) {
      std::size_t k = 1;
      while (used.count(v.name + "_" + std::to_string(k))) ++k;
      v.name += "_" + std::to_string(k);
    }
    used.insert(v.name);
    vars.push_back(std::move(v));
  }
  return Space(std::move(vars));
}

Variable boolean_variable(const std::string& name) { return Variable{name, {"t", "f"}}; }

}  // namespace chaininf
