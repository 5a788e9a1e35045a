#pragma once

#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "chaininf/bif.hpp"
#include "chaininf/inference.hpp"
#include "chaininf/network.hpp"
#include "chaininf/prob.hpp"

namespace chaininf::testing {

inline std::filesystem::path data_path(const std::string& file) {
  return std::filesystem::path(CHAININF_DATA_DIR) / file;
}

inline const BayesNet& asia() {
  static const BayesNet net = read_bif(data_path("asia.bif"));
  return net;
}

inline const BayesNet& child() {
  static const BayesNet net = read_bif(data_path("child.bif"));
  return net;
}

inline const BayesNet& insurance() {
  static const BayesNet net = read_bif(data_path("insurance.bif"));
  return net;
}

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  if (a.size() != b.size()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff();
}

inline Vector<double> vec(std::initializer_list<double> v) {
  Vector<double> out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

/// Random row-stochastic rows; with probability `zero_prob` an entry is
/// forced to zero (at least one entry per row stays positive).
inline Matrix<double> random_stochastic(Rng& rng, std::size_t rows, std::size_t cols, double zero_prob = 0.0) {
  Matrix<double> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.05 + rng.uniform01();
      if (rng.uniform01() < zero_prob) v = 0.0;
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      sum += v;
    }
    if (sum == 0.0) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(rng.uniform_index(cols))) = 1.0;
      sum = 1.0;
    }
    m.row(static_cast<Eigen::Index>(r)) /= sum;
  }
  return m;
}

inline Space random_space(Rng& rng, const std::string& prefix, std::size_t max_rank = 2, std::size_t max_card = 3) {
  const std::size_t rank = 1 + rng.uniform_index(max_rank);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t card = 2 + rng.uniform_index(max_card - 1);
    Variable v{prefix + std::to_string(i), {}};
    for (std::size_t k = 0; k < card; ++k) v.labels.push_back("v" + std::to_string(k));
    vars.push_back(std::move(v));
  }
  return Space(std::move(vars));
}

inline StateD random_state(Rng& rng, const Space& s) {
  Matrix<double> m = random_stochastic(rng, 1, s.size());
  return StateD(s, m.row(0).transpose());
}

inline PredicateD random_predicate(Rng& rng, const Space& s) {
  Vector<double> v(static_cast<Eigen::Index>(s.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform01();
  return PredicateD(s, v);
}

inline ChannelD random_channel(Rng& rng, const Space& dom, const Space& cod) {
  return ChannelD(dom, cod, random_stochastic(rng, dom.size(), cod.size()));
}

/// Random network: `n` nodes of cardinality 2..max_card, each node drawing up
/// to `max_parents` parents among earlier nodes; node names are shuffled
/// against the insertion order so that insertion order is not topological.
inline BayesNet random_net(Rng& rng, std::size_t n, std::size_t max_card = 3, std::size_t max_parents = 3,
                           double zero_prob = 0.0) {
  std::vector<std::size_t> cards(n);
  for (auto& c : cards) c = 2 + rng.uniform_index(max_card - 1);
  std::vector<NodeDef> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    NodeDef def;
    def.name = "n" + std::to_string(i);
    for (std::size_t k = 0; k < cards[i]; ++k) def.labels.push_back("s" + std::to_string(k));
    std::size_t rows = 1;
    for (std::size_t j = 0; j < i; ++j) {
      if (def.parents.size() < max_parents && rng.uniform01() < 0.4) {
        def.parents.push_back("n" + std::to_string(j));
        rows *= cards[j];
      }
    }
    // Parent order need not follow node order.
    for (std::size_t k = def.parents.size(); k > 1; --k) {
      std::swap(def.parents[k - 1], def.parents[rng.uniform_index(k)]);
    }
    def.cpt = random_stochastic(rng, rows, cards[i], zero_prob);
    nodes.push_back(std::move(def));
  }
  for (std::size_t k = nodes.size(); k > 1; --k) std::swap(nodes[k - 1], nodes[rng.uniform_index(k)]);
  return BayesNet(std::move(nodes), "random");
}

/// Random query with up to `max_evidence` evidence nodes, sharp or fuzzy.
inline Query random_query(Rng& rng, const BayesNet& net, std::size_t max_evidence = 3) {
  const auto nodes = net.nodes();
  Query q(nodes[rng.uniform_index(nodes.size())].name);
  const std::size_t k = rng.uniform_index(max_evidence + 1);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& def = nodes[rng.uniform_index(nodes.size())];
    if (rng.uniform01() < 0.5) {
      q.given_label(net, def.name, def.labels[rng.uniform_index(def.cardinality())]);
    } else {
      std::vector<double> values(def.cardinality());
      for (auto& v : values) v = rng.uniform01();
      values[rng.uniform_index(values.size())] = 0.2 + 0.8 * rng.uniform01();
      q.given(net, def.name, values);
    }
  }
  return q;
}

/// Node names surviving pruning, by the per-node test: drop n when no
/// relevant node lies in the descendant closure of n (n included), and
/// repeat on the reduced graph until nothing changes.
inline std::set<std::string> reference_prune_set(const BayesNet& net, const std::vector<std::string>& relevant) {
  std::set<std::string> alive;
  for (const auto& def : net.nodes()) alive.insert(def.name);
  const std::set<std::string> rel(relevant.begin(), relevant.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& def : net.nodes()) {
      if (!alive.count(def.name)) continue;
      std::set<std::string> seen{def.name};
      std::vector<std::string> stack{def.name};
      bool hit = false;
      while (!stack.empty() && !hit) {
        const std::string n = stack.back();
        stack.pop_back();
        hit = rel.count(n) != 0;
        for (const auto& c : net.children(n)) {
          if (alive.count(c) && seen.insert(c).second) stack.push_back(c);
        }
      }
      if (!hit) {
        alive.erase(def.name);
        changed = true;
      }
    }
  }
  return alive;
}

inline std::set<std::string> node_names(const BayesNet& net) {
  std::set<std::string> out;
  for (const auto& def : net.nodes()) out.insert(def.name);
  return out;
}

}  // namespace chaininf::testing
