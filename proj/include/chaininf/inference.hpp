#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chaininf/network.hpp"
#include "chaininf/stretch.hpp"

namespace chaininf {

/// Posterior query: the distribution of `observe` given (possibly fuzzy)
/// evidence predicates on other nodes.
struct Query {
  std::string observe;
  std::map<std::string, PredicateD> evidence;

  Query() = default;
  explicit Query(std::string observe_node) : observe(std::move(observe_node)) {}

  /// Fuzzy evidence: one truth value per label of `node`.
  Query& given(const BayesNet& net, const std::string& node, const std::vector<double>& values);
  /// Sharp evidence: `node` has label `label`.
  Query& given_label(const BayesNet& net, const std::string& node, const std::string& label);

  /// Nodes the query mentions: the observation node first, then evidence nodes.
  std::vector<std::string> nodes() const;
};

struct InferConfig {
  std::size_t dry_runs = 1000;
  std::uint64_t seed = 0;
  bool prune = true;
  /// Largest chain width (entries of an intermediate state) we agree to build.
  std::uint64_t max_width = std::uint64_t{1} << 24;
};

/// Chain positions (see Chain::positions) of the query's nodes.
struct StageLocation {
  std::size_t observe = 0;
  std::map<std::string, std::size_t> evidence;
};

/// Check that the query's nodes exist in `net` and its predicates fit them.
void validate(const BayesNet& net, const Query& q);

StageLocation locate_stages(const Chain& chain, const Query& q);

/// State at position `obs_position`, with every evidence located strictly
/// before it folded in by updating.
StateD forward_pass(const Chain& chain, const Query& q, std::size_t obs_position);

/// Predicate at position `obs_position` collecting every evidence located at
/// or after it, pulled back along the chain.
PredicateD backward_pass(const Chain& chain, const Query& q, std::size_t obs_position);

struct InferResult {
  StateD posterior;
  std::vector<std::string> order;
  std::uint64_t width = 0;
  std::size_t stages = 0;
  std::size_t nodes = 0;
  std::chrono::duration<double> elapsed{};
};

/// Prune (optional), pick the narrowest of `cfg.dry_runs` random orders,
/// stretch, and run the forward/backward passes.
InferResult infer_detailed(const BayesNet& net, const Query& q, const InferConfig& cfg = {});

/// Posterior of `q.observe`, as a state on that node's space.
StateD infer(const BayesNet& net, const Query& q, const InferConfig& cfg = {});

}  // namespace chaininf
