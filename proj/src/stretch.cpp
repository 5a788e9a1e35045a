#include "chaininf/stretch.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace chaininf {

namespace {

Space wire_space(const BayesNet& net, const std::vector<std::string>& wires) {
  std::vector<Variable> vars;
  vars.reserve(wires.size());
  for (const auto& w : wires) vars.push_back(Variable{w, net.node(w).labels});
  return Space(std::move(vars));
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

Stage::Stage(const BayesNet& net, const std::string& node, std::vector<std::string> wires_in,
             const std::set<std::string>& pass_through)
    : node_(node),
      wires_in_(std::move(wires_in)),
      dom_(wire_space(net, wires_in_)),
      cpt_(cpt_to_channel(net, node)) {
  const auto& def = net.node(node);
  if (std::find(wires_in_.begin(), wires_in_.end(), node) != wires_in_.end()) {
    throw GraphError("node '" + node + "' is already on the chain");
  }
  wires_out_.push_back(node);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < wires_in_.size(); ++i) {
    if (pass_through.count(wires_in_[i])) {
      kept.push_back(i);
      wires_out_.push_back(wires_in_[i]);
    }
  }
  cod_ = wire_space(net, wires_out_);

  // Input coordinate feeding each CPT parent.
  std::vector<std::size_t> parent_coord;
  for (const auto& p : def.parents) {
    auto it = std::find(wires_in_.begin(), wires_in_.end(), p);
    if (it == wires_in_.end()) throw GraphError("parent '" + p + "' of '" + node + "' is not live on the chain");
    parent_coord.push_back(static_cast<std::size_t>(it - wires_in_.begin()));
  }

  // Per input coordinate: contribution to the CPT row and to the output offset.
  const std::size_t rank = wires_in_.size();
  std::vector<std::size_t> row_weight(rank, 0);
  std::vector<std::size_t> out_weight(rank, 0);
  {
    std::size_t acc = 1;
    for (std::size_t k = parent_coord.size(); k-- > 0;) {
      row_weight[parent_coord[k]] += acc;
      acc *= dom_.cardinality(parent_coord[k]);
    }
    const auto out_strides = cod_.strides();
    for (std::size_t k = 0; k < kept.size(); ++k) out_weight[kept[k]] = out_strides[k + 1];
    node_stride_ = out_strides[0];
  }

  const std::size_t n = dom_.size();
  cpt_row_.resize(n);
  out_base_.resize(n);
  std::vector<std::size_t> coords(rank, 0);
  std::size_t row = 0;
  std::size_t base = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cpt_row_[i] = row;
    out_base_[i] = base;
    // Odometer step over the input coordinates, last one fastest.
    for (std::size_t k = rank; k-- > 0;) {
      ++coords[k];
      row += row_weight[k];
      base += out_weight[k];
      if (coords[k] < dom_.cardinality(k)) break;
      row -= row_weight[k] * coords[k];
      base -= out_weight[k] * coords[k];
      coords[k] = 0;
    }
  }
}

StateD Stage::forward(const StateD& w) const {
  detail::require_same(dom_, w.space(), "stage state transformation");
  const auto card = static_cast<Eigen::Index>(cpt_.cod().size());
  const auto& m = cpt_.matrix();
  Vector<double> out = Vector<double>::Zero(static_cast<Eigen::Index>(cod_.size()));
  const auto& p = w.probs();
  for (std::size_t i = 0; i < cpt_row_.size(); ++i) {
    const double mass = p(static_cast<Eigen::Index>(i));
    if (mass == 0.0) continue;
    const auto r = static_cast<Eigen::Index>(cpt_row_[i]);
    const std::size_t b = out_base_[i];
    for (Eigen::Index x = 0; x < card; ++x) {
      out(static_cast<Eigen::Index>(b + static_cast<std::size_t>(x) * node_stride_)) += mass * m(r, x);
    }
  }
  return StateD(cod_, std::move(out));
}

PredicateD Stage::backward(const PredicateD& q) const {
  detail::require_same(cod_, q.space(), "stage predicate transformation");
  const auto card = static_cast<Eigen::Index>(cpt_.cod().size());
  const auto& m = cpt_.matrix();
  const auto& v = q.values();
  Vector<double> out(static_cast<Eigen::Index>(dom_.size()));
  for (std::size_t i = 0; i < cpt_row_.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(cpt_row_[i]);
    const std::size_t b = out_base_[i];
    double acc = 0.0;
    for (Eigen::Index x = 0; x < card; ++x) {
      acc += m(r, x) * v(static_cast<Eigen::Index>(b + static_cast<std::size_t>(x) * node_stride_));
    }
    out(static_cast<Eigen::Index>(i)) = acc;
  }
  return PredicateD(dom_, std::move(out));
}

ChannelD Stage::channel(std::size_t max_entries) const {
  if (cod_.size() != 0 && dom_.size() > max_entries / cod_.size()) {
    throw SizeError("dense stage channel for '" + node_ + "' exceeds " + std::to_string(max_entries) + " entries");
  }
  const auto card = static_cast<Eigen::Index>(cpt_.cod().size());
  Matrix<double> dense = Matrix<double>::Zero(static_cast<Eigen::Index>(dom_.size()), static_cast<Eigen::Index>(cod_.size()));
  for (std::size_t i = 0; i < cpt_row_.size(); ++i) {
    for (Eigen::Index x = 0; x < card; ++x) {
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(out_base_[i] + static_cast<std::size_t>(x) * node_stride_)) =
          cpt_.matrix()(static_cast<Eigen::Index>(cpt_row_[i]), x);
    }
  }
  return ChannelD(dom_, cod_, std::move(dense));
}

const std::vector<std::string>& Chain::wires_at(std::size_t position) const {
  if (position == 0) return initial_wires;
  return stages.at(position - 1).wires_out();
}

const Space& Chain::space_at(std::size_t position) const {
  if (position == 0) return initial.space();
  return stages.at(position - 1).cod();
}

std::size_t Chain::position_of(const std::string& node) const {
  if (std::find(initial_wires.begin(), initial_wires.end(), node) != initial_wires.end()) return 0;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    if (stages[k].introduces() == node) return k + 1;
  }
  throw std::logic_error("node '" + node + "' does not occur on the chain");
}

StateD Chain::final_state() const {
  StateD w = initial;
  for (const auto& s : stages) w = s.forward(w);
  return w;
}

Chain stretch(const BayesNet& net, std::span<const std::string> order, const std::set<std::string>& keep) {
  check_topological(net, order);
  if (order.empty()) throw GraphError("cannot stretch an empty network");
  Chain chain{std::vector<std::string>(order.begin(), order.end()), {}, StateD::point(Space::singleton(), 0), {}, 0};

  std::unordered_map<std::string, std::size_t> remaining;
  for (const auto& n : net.nodes()) remaining[n.name] = net.children(n.name).size();

  std::size_t k = 0;
  while (k < order.size() && net.node(order[k]).is_root()) {
    chain.initial = tensor(chain.initial, root_prior(net, order[k]));
    chain.initial_wires.push_back(order[k]);
    ++k;
  }
  chain.width = chain.initial.size();

  std::vector<std::string> live = chain.initial_wires;
  for (; k < order.size(); ++k) {
    const std::string& node = order[k];
    for (const auto& p : net.node(node).parents) --remaining[p];
    std::set<std::string> pass;
    for (const auto& w : live) {
      if (remaining[w] > 0 || keep.count(w)) pass.insert(w);
    }
    chain.stages.emplace_back(net, node, live, pass);
    live = chain.stages.back().wires_out();
    chain.width = std::max<std::uint64_t>(chain.width, chain.stages.back().cod().size());
  }
  return chain;
}

std::uint64_t chain_width(const BayesNet& net, std::span<const std::string> order, const std::set<std::string>& keep) {
  check_topological(net, order);
  const std::size_t n = net.size();
  std::vector<std::size_t> remaining(n);
  std::vector<std::uint64_t> card(n);
  std::vector<bool> kept(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& def = net.nodes()[i];
    remaining[i] = net.children(def.name).size();
    card[i] = def.cardinality();
    kept[i] = keep.count(def.name) != 0;
  }
  std::vector<std::size_t> live;
  std::uint64_t size = 1;
  std::size_t k = 0;
  for (; k < order.size() && net.node(order[k]).is_root(); ++k) {
    const std::size_t i = net.index_of(order[k]);
    live.push_back(i);
    size = saturating_mul(size, card[i]);
  }
  std::uint64_t width = size;
  for (; k < order.size(); ++k) {
    const std::size_t v = net.index_of(order[k]);
    for (const auto& p : net.nodes()[v].parents) --remaining[net.index_of(p)];
    std::vector<std::size_t> next{v};
    size = card[v];
    for (auto w : live) {
      if (remaining[w] > 0 || kept[w]) {
        next.push_back(w);
        size = saturating_mul(size, card[w]);
      }
    }
    live = std::move(next);
    width = std::max(width, size);
  }
  return width;
}

DryRunResult dry_run_select(const BayesNet& net, std::size_t runs, std::uint64_t seed,
                            const std::set<std::string>& keep) {
  if (runs == 0) throw DomainError("dry_run_select needs at least one run");
  DryRunResult best;
  best.widths.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng(Rng::derive(seed, r));
    auto order = topological_order(net, rng);
    const auto w = chain_width(net, order, keep);
    best.widths.push_back(w);
    if (r == 0 || w < best.width) {
      best.order = std::move(order);
      best.width = w;
      best.run = r;
    }
  }
  return best;
}

std::string describe(const Chain& chain) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  std::ostringstream os;
  os << "order: " << join(chain.order) << '\n';
  os << "width: " << chain.width << '\n';
  os << "initial: [" << join(chain.initial_wires) << "] size " << chain.initial.size() << '\n';
  for (std::size_t k = 0; k < chain.stages.size(); ++k) {
    const auto& s = chain.stages[k];
    os << "stage " << (k + 1) << ": " << s.introduces();
    if (!s.cpt().dom().is_singleton()) {
      std::vector<std::string> ps;
      for (const auto& v : s.cpt().dom().vars()) ps.push_back(v.name);
      os << " <- " << join(ps);
    }
    os << " | " << s.dom().size() << " -> " << s.cod().size() << " | live [" << join(s.wires_out()) << "]\n";
  }
  return os.str();
}

std::string to_dot(const Chain& chain) {
  auto product = [](const Space& s) {
    std::string out;
    for (std::size_t i = 0; i < s.rank(); ++i) out += (i ? " x " : "") + std::to_string(s.cardinality(i));
    return out.empty() ? std::string("1") : out;
  };
  std::ostringstream os;
  os << "digraph chain {\n  rankdir=TB;\n  node [shape=box];\n";
  os << "  s0 [label=\"initial\\n";
  for (std::size_t i = 0; i < chain.initial_wires.size(); ++i) os << (i ? ", " : "") << chain.initial_wires[i];
  os << "\"];\n";
  for (std::size_t k = 0; k < chain.stages.size(); ++k) {
    const auto& s = chain.stages[k];
    os << "  s" << (k + 1) << " [label=\"" << s.introduces() << "\"];\n";
    os << "  s" << k << " -> s" << (k + 1) << " [label=\"" << product(s.dom()) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace chaininf
