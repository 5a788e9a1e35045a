#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "chaininf/core/space.hpp"
#include "chaininf/errors.hpp"

namespace chaininf {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Channels index rows by the domain and columns by the codomain, so rows are
/// contiguous states.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// How far a sum may drift from 1 (states, channel rows) or a value may leave
/// [0,1] (predicates) before a checked constructor rejects it.
template <typename Scalar>
constexpr Scalar normalization_tolerance() {
  if constexpr (std::numeric_limits<Scalar>::digits >= 53) {
    return Scalar(1e-9);
  } else {
    return Scalar(1e-4);
  }
}

namespace detail {

template <typename Derived>
void check_length(const Space& space, const Eigen::DenseBase<Derived>& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != space.size()) {
    throw DomainError(std::string(what) + ": length " + std::to_string(v.size()) +
                      " does not match space size " + std::to_string(space.size()));
  }
}

}  // namespace detail

/// A probability distribution over a Space.
template <typename Scalar = double>
class State {
 public:
  using Scalar_t = Scalar;

  State(Space space, Vector<Scalar> probs) : space_(std::move(space)), probs_(std::move(probs)) {
    detail::check_length(space_, probs_, "state");
    if ((probs_.array() < Scalar(0)).any()) throw DomainError("state has a negative entry");
    const Scalar sum = probs_.sum();
    if (!(std::abs(sum - Scalar(1)) <= normalization_tolerance<Scalar>())) {
      throw DomainError("state does not sum to 1 (sum = " + std::to_string(static_cast<double>(sum)) + ")");
    }
  }

  /// Point mass at flat index `at`.
  static State point(Space space, std::size_t at) {
    Vector<Scalar> v = Vector<Scalar>::Zero(static_cast<Eigen::Index>(space.size()));
    if (at >= space.size()) throw DomainError("point mass index out of range");
    v(static_cast<Eigen::Index>(at)) = Scalar(1);
    return State(std::move(space), std::move(v));
  }

  static State uniform(Space space) {
    const auto n = static_cast<Eigen::Index>(space.size());
    return State(std::move(space), Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
  }

  const Space& space() const noexcept { return space_; }
  const Vector<Scalar>& probs() const noexcept { return probs_; }
  Scalar operator()(std::size_t i) const { return probs_(static_cast<Eigen::Index>(i)); }
  std::size_t size() const noexcept { return space_.size(); }

 private:
  Space space_;
  Vector<Scalar> probs_;
};

/// A fuzzy predicate: one truth value in [0,1] per element of a Space.
template <typename Scalar = double>
class Predicate {
 public:
  using Scalar_t = Scalar;

  /// Values within the normalization tolerance outside [0,1] are clamped.
  Predicate(Space space, Vector<Scalar> values) : space_(std::move(space)), values_(std::move(values)) {
    detail::check_length(space_, values_, "predicate");
    const Scalar tol = normalization_tolerance<Scalar>();
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      Scalar& v = values_(i);
      if (!(v >= -tol && v <= Scalar(1) + tol)) {
        throw DomainError("predicate value " + std::to_string(static_cast<double>(v)) + " outside [0,1]");
      }
      v = std::clamp(v, Scalar(0), Scalar(1));
    }
  }

  static Predicate truth(Space space) {
    const auto n = static_cast<Eigen::Index>(space.size());
    return Predicate(std::move(space), Vector<Scalar>::Ones(n));
  }

  static Predicate falsity(Space space) {
    const auto n = static_cast<Eigen::Index>(space.size());
    return Predicate(std::move(space), Vector<Scalar>::Zero(n));
  }

  /// Sharp predicate true exactly at flat index `at`.
  static Predicate indicator(Space space, std::size_t at) {
    if (at >= space.size()) throw DomainError("indicator index out of range");
    Vector<Scalar> v = Vector<Scalar>::Zero(static_cast<Eigen::Index>(space.size()));
    v(static_cast<Eigen::Index>(at)) = Scalar(1);
    return Predicate(std::move(space), std::move(v));
  }

  const Space& space() const noexcept { return space_; }
  const Vector<Scalar>& values() const noexcept { return values_; }
  Scalar operator()(std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }
  std::size_t size() const noexcept { return space_.size(); }

  bool is_sharp() const {
    return ((values_.array() == Scalar(0)) || (values_.array() == Scalar(1))).all();
  }

 private:
  Space space_;
  Vector<Scalar> values_;
};

/// A row-stochastic matrix from `dom` to `cod`; row x is the state c(x).
template <typename Scalar = double>
class Channel {
 public:
  using Scalar_t = Scalar;

  Channel(Space dom, Space cod, Matrix<Scalar> matrix)
      : dom_(std::move(dom)), cod_(std::move(cod)), matrix_(std::move(matrix)) {
    if (static_cast<std::size_t>(matrix_.rows()) != dom_.size() ||
        static_cast<std::size_t>(matrix_.cols()) != cod_.size()) {
      throw DomainError("channel matrix is " + std::to_string(matrix_.rows()) + "x" +
                        std::to_string(matrix_.cols()) + ", expected " + std::to_string(dom_.size()) + "x" +
                        std::to_string(cod_.size()));
    }
    if ((matrix_.array() < Scalar(0)).any()) throw DomainError("channel has a negative entry");
    const Vector<Scalar> sums = matrix_.rowwise().sum();
    for (Eigen::Index r = 0; r < sums.size(); ++r) {
      if (!(std::abs(sums(r) - Scalar(1)) <= normalization_tolerance<Scalar>())) {
        throw DomainError("channel row " + std::to_string(r) + " does not sum to 1");
      }
    }
  }

  static Channel identity(const Space& space) {
    const auto n = static_cast<Eigen::Index>(space.size());
    return Channel(space, space, Matrix<Scalar>::Identity(n, n));
  }

  /// A state seen as a channel out of the singleton space.
  static Channel from_state(const State<Scalar>& s) {
    return Channel(Space::singleton(), s.space(), s.probs().transpose());
  }

  const Space& dom() const noexcept { return dom_; }
  const Space& cod() const noexcept { return cod_; }
  const Matrix<Scalar>& matrix() const noexcept { return matrix_; }

  /// The state c(x).
  State<Scalar> row(std::size_t x) const {
    return State<Scalar>(cod_, matrix_.row(static_cast<Eigen::Index>(x)).transpose());
  }

 private:
  Space dom_;
  Space cod_;
  Matrix<Scalar> matrix_;
};

using StateD = State<double>;
using PredicateD = Predicate<double>;
using ChannelD = Channel<double>;

}  // namespace chaininf
