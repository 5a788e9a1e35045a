#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "chaininf/network.hpp"

namespace chaininf {

/// One link of a stretched chain: introduces a node by applying its CPT to
/// the parent wires, while the other live wires pass through. Copying a
/// parent that still has later consumers and dropping wires that have none
/// left are fused into the same stage, so the stage is the channel
///   (cpt ⊗ id) ∗ (copies, projections, wire permutation)
/// from `dom()` (labelled by `wires_in()`) to `cod()` (labelled by
/// `wires_out()`, introduced node first).
///
/// The action is stored in factorized form (CPT plus per-input index tables)
/// so that transforming a state or predicate costs |dom| x #node rather than
/// |dom| x |cod|. `channel()` materializes the dense matrix.
class Stage {
 public:
  Stage(const BayesNet& net, const std::string& node, std::vector<std::string> wires_in,
        const std::set<std::string>& pass_through);

  const std::string& introduces() const noexcept { return node_; }
  const std::vector<std::string>& wires_in() const noexcept { return wires_in_; }
  const std::vector<std::string>& wires_out() const noexcept { return wires_out_; }
  const Space& dom() const noexcept { return dom_; }
  const Space& cod() const noexcept { return cod_; }
  /// The node's CPT channel (parents in declared order -> node).
  const ChannelD& cpt() const noexcept { return cpt_; }

  /// State transformation along the stage.
  StateD forward(const StateD& w) const;
  /// Predicate transformation along the stage.
  PredicateD backward(const PredicateD& q) const;

  /// Dense stage channel; throws SizeError when |dom| x |cod| exceeds `max_entries`.
  ChannelD channel(std::size_t max_entries = std::size_t{1} << 24) const;

 private:
  std::string node_;
  std::vector<std::string> wires_in_;
  std::vector<std::string> wires_out_;
  Space dom_;
  Space cod_;
  ChannelD cpt_;
  std::size_t node_stride_ = 1;
  std::vector<std::size_t> cpt_row_;   // per input index: CPT row read
  std::vector<std::size_t> out_base_;  // per input index: output offset of the passed-through wires
};

/// A Bayesian network stretched into a linear chain: an initial state (the
/// product of the roots that lead the order) followed by one stage per
/// remaining node.
struct Chain {
  std::vector<std::string> order;
  std::vector<std::string> initial_wires;
  StateD initial;
  std::vector<Stage> stages;
  /// Largest space along the chain, initial state included.
  std::uint64_t width = 0;

  /// Number of positions: position 0 is the initial state, position k > 0
  /// the output of stage k.
  std::size_t positions() const noexcept { return stages.size() + 1; }
  const std::vector<std::string>& wires_at(std::size_t position) const;
  const Space& space_at(std::size_t position) const;

  /// Position at which `node` first appears as an outcome.
  std::size_t position_of(const std::string& node) const;

  /// Plain forward run: the state at the end of the chain.
  StateD final_state() const;
};

/// Stretch `net` along the topological `order`. A wire stays live while it
/// has unprocessed children or is named in `keep`; otherwise it is summed out
/// by the next stage. Throws GraphError if `order` is not topological.
Chain stretch(const BayesNet& net, std::span<const std::string> order, const std::set<std::string>& keep = {});

/// Width the chain for `order` would have, by cardinality arithmetic alone.
/// Saturates at UINT64_MAX.
std::uint64_t chain_width(const BayesNet& net, std::span<const std::string> order,
                          const std::set<std::string>& keep = {});

struct DryRunResult {
  std::vector<std::string> order;
  std::uint64_t width = 0;
  /// Index of the winning run.
  std::size_t run = 0;
  /// Width of every run, in run order.
  std::vector<std::uint64_t> widths;
};

/// Draw `runs` random topological orders (run i seeded with
/// Rng::derive(seed, i)) and keep the first one of minimum width.
DryRunResult dry_run_select(const BayesNet& net, std::size_t runs, std::uint64_t seed,
                            const std::set<std::string>& keep = {});

/// Human-readable stage listing.
std::string describe(const Chain& chain);

/// Graphviz rendering of the chain.
std::string to_dot(const Chain& chain);

}  // namespace chaininf
