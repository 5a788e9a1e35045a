#include "chaininf/network.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace chaininf {

namespace {

// Kahn's algorithm; `pick` chooses which ready node (by position in the
// ready list) goes next. Ready nodes are kept in insertion order.
template <typename Pick>
std::vector<std::string> kahn(const BayesNet& net, Pick&& pick) {
  const auto nodes = net.nodes();
  std::vector<std::size_t> missing(nodes.size());
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    missing[i] = nodes[i].parents.size();
    if (missing[i] == 0) ready.push_back(i);
  }
  std::vector<std::string> order;
  order.reserve(nodes.size());
  while (!ready.empty()) {
    const std::size_t k = pick(ready.size());
    const std::size_t i = ready[k];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(k));
    order.push_back(nodes[i].name);
    for (const auto& child : net.children(nodes[i].name)) {
      const std::size_t c = net.index_of(child);
      if (--missing[c] == 0) {
        auto pos = std::lower_bound(ready.begin(), ready.end(), c);
        ready.insert(pos, c);
      }
    }
  }
  return order;
}

}  // namespace

BayesNet::BayesNet(std::vector<NodeDef> nodes, std::string name) : name_(std::move(name)), nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.labels.size() < 2) throw DomainError("node '" + n.name + "' needs at least two labels");
    if (!index_.emplace(n.name, i).second) throw DomainError("duplicate node '" + n.name + "'");
  }
  children_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto& n = nodes_[i];
    std::unordered_set<std::string> seen;
    std::size_t rows = 1;
    for (const auto& p : n.parents) {
      auto it = index_.find(p);
      if (it == index_.end()) throw GraphError("node '" + n.name + "' has unknown parent '" + p + "'");
      if (!seen.insert(p).second) throw GraphError("node '" + n.name + "' lists parent '" + p + "' twice");
      children_[it->second].push_back(n.name);
      rows *= nodes_[it->second].cardinality();
    }
    if (static_cast<std::size_t>(n.cpt.rows()) != rows || static_cast<std::size_t>(n.cpt.cols()) != n.cardinality()) {
      throw DomainError("CPT of '" + n.name + "' is " + std::to_string(n.cpt.rows()) + "x" +
                        std::to_string(n.cpt.cols()) + ", expected " + std::to_string(rows) + "x" +
                        std::to_string(n.cardinality()));
    }
    for (Eigen::Index r = 0; r < n.cpt.rows(); ++r) {
      if ((n.cpt.row(r).array() < 0.0).any()) throw DomainError("CPT of '" + n.name + "' has a negative entry");
      const double sum = n.cpt.row(r).sum();
      if (!(std::abs(sum - 1.0) <= kCptRowTolerance)) {
        throw DomainError("CPT row " + std::to_string(r) + " of '" + n.name + "' sums to " + std::to_string(sum));
      }
      n.cpt.row(r) /= sum;
    }
  }
  // Children lists in insertion order of the child.
  for (auto& cs : children_) {
    std::sort(cs.begin(), cs.end(), [&](const std::string& a, const std::string& b) { return index_.at(a) < index_.at(b); });
  }
  if (topological_order(*this).size() != nodes_.size()) throw GraphError("network graph has a cycle");
}

const NodeDef& BayesNet::node(const std::string& node) const { return nodes_[index_of(node)]; }

std::size_t BayesNet::index_of(const std::string& node) const {
  auto it = index_.find(node);
  if (it == index_.end()) throw DomainError("unknown node '" + node + "'");
  return it->second;
}

const std::vector<std::string>& BayesNet::children(const std::string& node) const {
  return children_[index_of(node)];
}

Space BayesNet::space_of(const std::string& node) const {
  const auto& n = this->node(node);
  return Space{Variable{n.name, n.labels}};
}

std::size_t BayesNet::parameter_count() const {
  std::size_t total = 0;
  for (const auto& n : nodes_) total += static_cast<std::size_t>(n.cpt.rows()) * (n.cardinality() - 1);
  return total;
}

ChannelD cpt_to_channel(const BayesNet& net, const std::string& node) {
  const auto& n = net.node(node);
  std::vector<Variable> parents;
  for (const auto& p : n.parents) parents.push_back(Variable{p, net.node(p).labels});
  return ChannelD(Space(std::move(parents)), net.space_of(node), n.cpt);
}

StateD root_prior(const BayesNet& net, const std::string& node) {
  const auto& n = net.node(node);
  if (!n.is_root()) throw DomainError("'" + node + "' is not a root node");
  return StateD(net.space_of(node), n.cpt.row(0).transpose());
}

std::set<std::string> ancestral_closure(const BayesNet& net, const std::vector<std::string>& relevant) {
  std::set<std::string> keep;
  std::vector<std::string> stack;
  for (const auto& r : relevant) {
    net.index_of(r);
    stack.push_back(r);
  }
  while (!stack.empty()) {
    std::string n = std::move(stack.back());
    stack.pop_back();
    if (!keep.insert(n).second) continue;
    for (const auto& p : net.node(n).parents) stack.push_back(p);
  }
  return keep;
}

BayesNet prune(const BayesNet& net, const std::vector<std::string>& relevant) {
  const auto keep = ancestral_closure(net, relevant);
  std::vector<NodeDef> nodes;
  for (const auto& n : net.nodes()) {
    if (keep.count(n.name)) nodes.push_back(n);
  }
  return BayesNet(std::move(nodes), net.name());
}

std::vector<std::string> topological_order(const BayesNet& net, Rng& rng) {
  return kahn(net, [&](std::size_t n) { return static_cast<std::size_t>(rng.uniform_index(n)); });
}

std::vector<std::string> topological_order(const BayesNet& net) {
  return kahn(net, [](std::size_t) { return std::size_t{0}; });
}

void check_topological(const BayesNet& net, std::span<const std::string> order) {
  if (order.size() != net.size()) throw GraphError("order does not list every node exactly once");
  std::unordered_set<std::string> placed;
  for (const auto& name : order) {
    if (!net.contains(name)) throw GraphError("order names unknown node '" + name + "'");
    if (placed.count(name)) throw GraphError("order lists '" + name + "' twice");
    for (const auto& p : net.node(name).parents) {
      if (!placed.count(p)) throw GraphError("order places '" + name + "' before its parent '" + p + "'");
    }
    placed.insert(name);
  }
}

}  // namespace chaininf
