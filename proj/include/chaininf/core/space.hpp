#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chaininf {

/// A named discrete variable with an ordered label set of at least two elements.
struct Variable {
  std::string name;
  std::vector<std::string> labels;

  std::size_t cardinality() const noexcept { return labels.size(); }

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Ordered product of discrete variables. Flat indices are row-major over
/// the variable order (first variable varies slowest). The empty product is
/// the singleton space with exactly one element.
class Space {
 public:
  Space() = default;
  explicit Space(std::vector<Variable> vars);
  Space(std::initializer_list<Variable> vars) : Space(std::vector<Variable>(vars)) {}

  static Space singleton() { return Space{}; }
  /// One variable with labels "<name>_0", "<name>_1", ...
  static Space indexed(const std::string& name, std::size_t cardinality);

  std::size_t rank() const noexcept { return vars_.size(); }
  std::size_t size() const noexcept { return size_; }
  bool is_singleton() const noexcept { return vars_.empty(); }

  const std::vector<Variable>& vars() const noexcept { return vars_; }
  const Variable& var(std::size_t i) const { return vars_.at(i); }
  std::size_t cardinality(std::size_t i) const { return vars_.at(i).cardinality(); }

  std::optional<std::size_t> find(const std::string& name) const;
  /// Throws DomainError for unknown names.
  std::size_t index_of(const std::string& name) const;

  /// Row-major stride of each coordinate.
  std::vector<std::size_t> strides() const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const std::size_t> coords) const;

  /// Comma-joined labels of the element at `flat`, e.g. "t,f".
  std::string label_of(std::size_t flat) const;

  /// Sub-space made of the given coordinates, in the given order.
  Space select(std::span<const std::size_t> coords) const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  std::vector<Variable> vars_;
  std::size_t size_ = 1;
};

/// Product space a × b. Variables of `b` whose names already occur get an
/// incrementing suffix ("x" -> "x_1", "x_2", ...).
Space concat(const Space& a, const Space& b);

/// Variable with labels {t, f}.
Variable boolean_variable(const std::string& name);

}  // namespace chaininf
