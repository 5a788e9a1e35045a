#pragma once

#include <cstddef>

#include "chaininf/inference.hpp"
#include "chaininf/network.hpp"

namespace chaininf::oracle {

/// Default cap on joint-distribution entries.
inline constexpr std::size_t kEntryCap = std::size_t{1} << 22;

/// Number of entries of the full joint, saturating at SIZE_MAX.
std::size_t joint_size(const BayesNet& net);

/// The full joint distribution by the chain rule, over all nodes in the
/// deterministic topological order. Throws SizeError above `cap` entries.
StateD joint_state(const BayesNet& net, std::size_t cap = kEntryCap);

/// Reference answer to `q`: weight the joint by every evidence predicate,
/// renormalize, and sum out all but the observation node.
StateD brute_infer(const BayesNet& net, const Query& q, std::size_t cap = kEntryCap);

}  // namespace chaininf::oracle
