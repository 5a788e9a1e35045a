#include "chaininf/inference.hpp"

#include <algorithm>
#include <optional>

namespace chaininf {

namespace {

// Conjunction of the weakened evidence predicates located at `position`, or
// nullopt when there are none. `sources` collects the evidence names.
std::optional<PredicateD> evidence_at(const Chain& chain, const Query& q, const StageLocation& loc,
                                      std::size_t position, std::string& sources) {
  std::optional<PredicateD> acc;
  const Space& space = chain.space_at(position);
  const auto& wires = chain.wires_at(position);
  for (const auto& [node, where] : loc.evidence) {
    if (where != position) continue;
    const auto it = std::find(wires.begin(), wires.end(), node);
    const auto coord = static_cast<std::size_t>(it - wires.begin());
    PredicateD p = weaken(q.evidence.at(node), space, coord);
    acc = acc ? conjoin(*acc, p) : std::move(p);
    sources += (sources.empty() ? "" : ", ") + node;
  }
  return acc;
}

}  // namespace

Query& Query::given(const BayesNet& net, const std::string& node, const std::vector<double>& values) {
  const Space s = net.space_of(node);
  if (values.size() != s.size()) {
    throw DomainError("evidence for '" + node + "' has " + std::to_string(values.size()) + " values, expected " +
                      std::to_string(s.size()));
  }
  evidence.insert_or_assign(node, PredicateD(s, Eigen::Map<const Vector<double>>(values.data(), static_cast<Eigen::Index>(values.size()))));
  return *this;
}

Query& Query::given_label(const BayesNet& net, const std::string& node, const std::string& label) {
  const auto& labels = net.node(node).labels;
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw DomainError("node '" + node + "' has no label '" + label + "'");
  evidence.insert_or_assign(node, PredicateD::indicator(net.space_of(node), static_cast<std::size_t>(it - labels.begin())));
  return *this;
}

std::vector<std::string> Query::nodes() const {
  std::vector<std::string> out{observe};
  for (const auto& [node, p] : evidence) {
    if (node != observe) out.push_back(node);
  }
  return out;
}

void validate(const BayesNet& net, const Query& q) {
  net.index_of(q.observe);
  for (const auto& [node, p] : q.evidence) {
    if (!(p.space() == net.space_of(node))) throw DomainError("evidence for '" + node + "' is not on its space");
    if (!(p.values().array() > 0.0).any()) throw InconsistentEvidence(node);
  }
}

StageLocation locate_stages(const Chain& chain, const Query& q) {
  StageLocation loc;
  loc.observe = chain.position_of(q.observe);
  for (const auto& [node, p] : q.evidence) loc.evidence.emplace(node, chain.position_of(node));
  return loc;
}

StateD forward_pass(const Chain& chain, const Query& q, std::size_t obs_position) {
  const auto loc = locate_stages(chain, q);
  StateD w = chain.initial;
  for (std::size_t pos = 0; pos < obs_position; ++pos) {
    std::string sources;
    if (auto p = evidence_at(chain, q, loc, pos, sources)) w = update(w, *p, sources);
    w = chain.stages.at(pos).forward(w);
  }
  return w;
}

PredicateD backward_pass(const Chain& chain, const Query& q, std::size_t obs_position) {
  const auto loc = locate_stages(chain, q);
  const std::size_t last = chain.positions() - 1;
  std::string sources;
  PredicateD acc = PredicateD::truth(chain.space_at(last));
  for (std::size_t pos = last + 1; pos-- > obs_position;) {
    if (pos < last) acc = chain.stages[pos].backward(acc);
    if (auto p = evidence_at(chain, q, loc, pos, sources)) acc = conjoin(acc, *p);
  }
  return acc;
}

InferResult infer_detailed(const BayesNet& net, const Query& q, const InferConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  validate(net, q);
  if (cfg.dry_runs == 0) throw DomainError("dry_runs must be at least 1");

  const BayesNet pruned = cfg.prune ? prune(net, q.nodes()) : net;
  const auto pick = dry_run_select(pruned, cfg.dry_runs, cfg.seed);
  if (pick.width > cfg.max_width) {
    throw SizeError("narrowest chain has width " + std::to_string(pick.width) + ", above the limit of " +
                    std::to_string(cfg.max_width));
  }
  const Chain chain = stretch(pruned, pick.order);
  const auto loc = locate_stages(chain, q);

  const StateD forward = forward_pass(chain, q, loc.observe);
  const PredicateD backward = backward_pass(chain, q, loc.observe);

  std::string below;
  for (const auto& [node, pos] : loc.evidence) {
    if (pos >= loc.observe) below += (below.empty() ? "" : ", ") + node;
  }
  StateD posterior = marginalize(update(forward, backward, below), {q.observe});

  InferResult result{std::move(posterior), pick.order, chain.width, chain.stages.size(), pruned.size(), {}};
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

StateD infer(const BayesNet& net, const Query& q, const InferConfig& cfg) {
  return infer_detailed(net, q, cfg).posterior;
}

}  // namespace chaininf
