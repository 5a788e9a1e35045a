#include "chaininf/oracle.hpp"

#include <limits>

namespace chaininf::oracle {

std::size_t joint_size(const BayesNet& net) {
  std::size_t size = 1;
  for (const auto& n : net.nodes()) {
    if (size > std::numeric_limits<std::size_t>::max() / n.cardinality()) return std::numeric_limits<std::size_t>::max();
    size *= n.cardinality();
  }
  return size;
}

StateD joint_state(const BayesNet& net, std::size_t cap) {
  const std::size_t size = joint_size(net);
  if (size > cap) {
    throw SizeError("joint distribution has " + std::to_string(size) + " entries, above the cap of " + std::to_string(cap));
  }
  const auto order = topological_order(net);
  std::vector<Variable> vars;
  for (const auto& name : order) vars.push_back(Variable{name, net.node(name).labels});
  const Space space(std::move(vars));
  const auto strides = space.strides();

  // Each CPT row index as a weighted sum of joint coordinates.
  struct Factor {
    const NodeDef* def;
    std::size_t self;
    std::vector<std::pair<std::size_t, std::size_t>> parent_coord_weight;
  };
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& def = net.node(order[i]);
    Factor f{&def, i, {}};
    std::size_t w = 1;
    for (std::size_t k = def.parents.size(); k-- > 0;) {
      f.parent_coord_weight.emplace_back(space.index_of(def.parents[k]), w);
      w *= net.node(def.parents[k]).cardinality();
    }
    factors.push_back(std::move(f));
  }

  Vector<double> probs(static_cast<Eigen::Index>(size));
  std::vector<std::size_t> coords(order.size(), 0);
  for (std::size_t flat = 0; flat < size; ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = order.size(); i-- > 0;) {
      coords[i] = rest % space.cardinality(i);
      rest /= space.cardinality(i);
    }
    double p = 1.0;
    for (const auto& f : factors) {
      std::size_t row = 0;
      for (const auto& [c, w] : f.parent_coord_weight) row += coords[c] * w;
      p *= f.def->cpt(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(coords[f.self]));
    }
    probs(static_cast<Eigen::Index>(flat)) = p;
  }
  return StateD(space, std::move(probs));
}

StateD brute_infer(const BayesNet& net, const Query& q, std::size_t cap) {
  validate(net, q);
  const StateD joint = joint_state(net, cap);
  const Space& space = joint.space();
  const std::size_t obs = space.index_of(q.observe);
  std::vector<std::pair<std::size_t, const PredicateD*>> ev;
  for (const auto& [node, p] : q.evidence) ev.emplace_back(space.index_of(node), &p);

  const auto strides = space.strides();
  const std::size_t obs_card = space.cardinality(obs);
  Vector<double> out = Vector<double>::Zero(static_cast<Eigen::Index>(obs_card));
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    double w = joint(flat);
    for (const auto& [coord, p] : ev) w *= (*p)((flat / strides[coord]) % space.cardinality(coord));
    out(static_cast<Eigen::Index>((flat / strides[obs]) % obs_card)) += w;
  }
  const double total = out.sum();
  if (!(total > 0.0)) {
    std::string names;
    for (const auto& [node, p] : q.evidence) names += (names.empty() ? "" : ", ") + node;
    throw InconsistentEvidence(names);
  }
  return StateD(Space{space.var(obs)}, out / total);
}

}  // namespace chaininf::oracle
