#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "chaininf/prob.hpp"
#include "chaininf/random.hpp"

namespace chaininf {

/// One node of a Bayesian network: its labels, parents, and conditional
/// probability table. CPT rows are indexed row-major over the parents'
/// labels (first parent slowest); columns follow the node's labels.
struct NodeDef {
  std::string name;
  std::vector<std::string> labels;
  std::vector<std::string> parents;
  Matrix<double> cpt;

  std::size_t cardinality() const noexcept { return labels.size(); }
  bool is_root() const noexcept { return parents.empty(); }
};

/// Input tolerance on CPT row sums; rows within it are renormalized exactly.
inline constexpr double kCptRowTolerance = 1e-6;

/// A validated discrete Bayesian network. Nodes keep their insertion order.
class BayesNet {
 public:
  BayesNet() = default;

  /// Validates parent references, CPT shapes and row sums, and acyclicity.
  /// Rows are renormalized on ingest.
  explicit BayesNet(std::vector<NodeDef> nodes, std::string name = "unknown");

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  std::span<const NodeDef> nodes() const noexcept { return nodes_; }
  bool contains(const std::string& node) const { return index_.count(node) != 0; }
  /// Throws DomainError for unknown nodes.
  const NodeDef& node(const std::string& node) const;
  std::size_t index_of(const std::string& node) const;

  /// Children in insertion order.
  const std::vector<std::string>& children(const std::string& node) const;

  /// One-variable space of the node.
  Space space_of(const std::string& node) const;

  /// Free parameters as counted by bnlearn: rows x (cardinality - 1).
  std::size_t parameter_count() const;

 private:
  std::string name_ = "unknown";
  std::vector<NodeDef> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::string>> children_;
};

/// The node's CPT as a channel from the product of its parents' spaces (in
/// declared order) to its own space. Roots give a channel out of the
/// singleton space.
ChannelD cpt_to_channel(const BayesNet& net, const std::string& node);

/// The prior of a root node.
StateD root_prior(const BayesNet& net, const std::string& node);

/// Names of `relevant` together with all their ancestors.
std::set<std::string> ancestral_closure(const BayesNet& net, const std::vector<std::string>& relevant);

/// Drop every node none of whose descendants (itself included) is relevant.
BayesNet prune(const BayesNet& net, const std::vector<std::string>& relevant);

/// A topological order drawn by repeatedly picking, uniformly at random, one
/// of the nodes whose parents are all placed.
std::vector<std::string> topological_order(const BayesNet& net, Rng& rng);

/// Deterministic topological order: always the first ready node in
/// insertion order.
std::vector<std::string> topological_order(const BayesNet& net);

/// Throws GraphError unless `order` lists every node once, parents first.
void check_topological(const BayesNet& net, std::span<const std::string> order);

}  // namespace chaininf
