#pragma once

#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "chaininf/core/types.hpp"

namespace chaininf {

namespace detail {

inline void require_same(const Space& a, const Space& b, const char* what) {
  if (!(a == b)) throw DomainError(std::string(what) + ": space mismatch");
}

/// For every flat index of `space`, the flat index of its restriction to
/// `coords` (row-major over `coords` in the given order).
inline std::vector<std::size_t> restriction_map(const Space& space, std::span<const std::size_t> coords) {
  const auto strides = space.strides();
  std::vector<std::size_t> sub_strides(coords.size());
  std::size_t acc = 1;
  for (std::size_t k = coords.size(); k-- > 0;) {
    sub_strides[k] = acc;
    acc *= space.cardinality(coords[k]);
  }
  std::vector<std::size_t> out(space.size());
  for (std::size_t flat = 0; flat < space.size(); ++flat) {
    std::size_t sub = 0;
    for (std::size_t k = 0; k < coords.size(); ++k) {
      const std::size_t c = coords[k];
      sub += (flat / strides[c]) % space.cardinality(c) * sub_strides[k];
    }
    out[flat] = sub;
  }
  return out;
}

/// Deterministic channel from `dom`: element x goes to the element of `cod`
/// at `target[x]`.
template <typename Scalar>
Channel<Scalar> deterministic(const Space& dom, const Space& cod, const std::vector<std::size_t>& target) {
  Matrix<Scalar> m = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(dom.size()), static_cast<Eigen::Index>(cod.size()));
  for (std::size_t x = 0; x < dom.size(); ++x) {
    m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(target[x])) = Scalar(1);
  }
  return Channel<Scalar>(dom, cod, std::move(m));
}

/// Kronecker product with row-major pair indexing: (i,k),(j,l) -> a(i,j) b(k,l).
template <typename A, typename B>
auto kronecker(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace detail

/// State transformation c >> w: push w forward along c.
template <typename Scalar>
State<Scalar> transform(const Channel<Scalar>& c, const State<Scalar>& w) {
  detail::require_same(c.dom(), w.space(), "state transformation");
  return State<Scalar>(c.cod(), c.matrix().transpose() * w.probs());
}

/// Predicate transformation c << q: pull q back along c.
template <typename Scalar>
Predicate<Scalar> pullback(const Channel<Scalar>& c, const Predicate<Scalar>& q) {
  detail::require_same(c.cod(), q.space(), "predicate transformation");
  return Predicate<Scalar>(c.dom(), c.matrix() * q.values());
}

/// Expected value of p in w.
template <typename Scalar>
Scalar validity(const State<Scalar>& w, const Predicate<Scalar>& p) {
  detail::require_same(w.space(), p.space(), "validity");
  return w.probs().dot(p.values());
}

/// Conditioning w|p. Throws InconsistentEvidence(source) when the validity is zero.
template <typename Scalar>
State<Scalar> update(const State<Scalar>& w, const Predicate<Scalar>& p, const std::string& source = {}) {
  const Scalar v = validity(w, p);
  if (!(v > Scalar(0))) throw InconsistentEvidence(source);
  return State<Scalar>(w.space(), w.probs().cwiseProduct(p.values()) / v);
}

/// Sequential composition d * c: first c, then d.
template <typename Scalar>
Channel<Scalar> compose(const Channel<Scalar>& d, const Channel<Scalar>& c) {
  detail::require_same(c.cod(), d.dom(), "sequential composition");
  return Channel<Scalar>(c.dom(), d.cod(), c.matrix() * d.matrix());
}

template <typename Scalar>
Channel<Scalar> tensor(const Channel<Scalar>& c, const Channel<Scalar>& d) {
  return Channel<Scalar>(concat(c.dom(), d.dom()), concat(c.cod(), d.cod()),
                         detail::kronecker(c.matrix(), d.matrix()));
}

template <typename Scalar>
State<Scalar> tensor(const State<Scalar>& w, const State<Scalar>& r) {
  return State<Scalar>(concat(w.space(), r.space()), detail::kronecker(w.probs(), r.probs()));
}

template <typename Scalar>
Predicate<Scalar> tensor(const Predicate<Scalar>& p, const Predicate<Scalar>& q) {
  return Predicate<Scalar>(concat(p.space(), q.space()), detail::kronecker(p.values(), q.values()));
}

/// Pointwise product p & q.
template <typename Scalar>
Predicate<Scalar> conjoin(const Predicate<Scalar>& p, const Predicate<Scalar>& q) {
  detail::require_same(p.space(), q.space(), "conjunction");
  return Predicate<Scalar>(p.space(), p.values().cwiseProduct(q.values()));
}

/// The copier x -> 1|x,x>.
template <typename Scalar = double>
Channel<Scalar> copy_channel(const Space& s) {
  const Space cod = concat(s, s);
  std::vector<std::size_t> target(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) target[x] = x * s.size() + x;
  return detail::deterministic<Scalar>(s, cod, target);
}

/// Deterministic channel onto the given coordinates (in the given order).
template <typename Scalar = double>
Channel<Scalar> projection_channel(const Space& s, std::span<const std::size_t> coords) {
  for (auto c : coords) {
    if (c >= s.rank()) throw DomainError("projection coordinate out of range");
  }
  return detail::deterministic<Scalar>(s, s.select(coords), detail::restriction_map(s, coords));
}

/// Sum out every variable not named in `keep`. The result follows the
/// variable order of w's space.
template <typename Scalar>
State<Scalar> marginalize(const State<Scalar>& w, const std::vector<std::string>& keep) {
  if (keep.empty()) throw DomainError("marginalize: nothing to keep");
  std::vector<bool> wanted(w.space().rank(), false);
  for (const auto& name : keep) wanted[w.space().index_of(name)] = true;
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < wanted.size(); ++i) {
    if (wanted[i]) coords.push_back(i);
  }
  const Space sub = w.space().select(coords);
  const auto map = detail::restriction_map(w.space(), coords);
  Vector<Scalar> out = Vector<Scalar>::Zero(static_cast<Eigen::Index>(sub.size()));
  for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(map[i])) += w(i);
  return State<Scalar>(sub, std::move(out));
}

/// Channel that relocates coordinates: output coordinate j carries input
/// coordinate perm[j].
template <typename Scalar = double>
Channel<Scalar> permute_channel(const Space& s, std::span<const std::size_t> perm) {
  if (perm.size() != s.rank()) throw DomainError("permutation length does not match space rank");
  std::vector<bool> hit(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || hit[p]) throw DomainError("not a permutation");
    hit[p] = true;
  }
  return projection_channel<Scalar>(s, perm);
}

inline std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) inv.at(perm[j]) = j;
  return inv;
}

/// Extend p to `target` by truth on every other coordinate; p occupies the
/// coordinates starting at `at`.
template <typename Scalar>
Predicate<Scalar> weaken(const Predicate<Scalar>& p, const Space& target, std::size_t at) {
  const std::size_t k = p.space().rank();
  if (at + k > target.rank()) throw DomainError("weaken: coordinate out of range");
  std::vector<std::size_t> coords(k);
  std::iota(coords.begin(), coords.end(), at);
  if (!(target.select(coords) == p.space())) throw DomainError("weaken: coordinate space mismatch");
  const auto map = detail::restriction_map(target, coords);
  Vector<Scalar> out(static_cast<Eigen::Index>(target.size()));
  for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(i)) = p(map[i]);
  return Predicate<Scalar>(target, std::move(out));
}

// Operator spellings of the common forms.

template <typename Scalar>
State<Scalar> operator>>(const Channel<Scalar>& c, const State<Scalar>& w) {
  return transform(c, w);
}

template <typename Scalar>
Predicate<Scalar> operator<<(const Channel<Scalar>& c, const Predicate<Scalar>& q) {
  return pullback(c, q);
}

template <typename Scalar>
Channel<Scalar> operator*(const Channel<Scalar>& d, const Channel<Scalar>& c) {
  return compose(d, c);
}

template <typename Scalar>
Predicate<Scalar> operator&(const Predicate<Scalar>& p, const Predicate<Scalar>& q) {
  return conjoin(p, q);
}

template <typename Scalar>
State<Scalar> operator/(const State<Scalar>& w, const Predicate<Scalar>& p) {
  return update(w, p);
}

}  // namespace chaininf
