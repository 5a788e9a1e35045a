#include "chaininf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "chaininf/bif.hpp"
#include "chaininf/inference.hpp"
#include "chaininf/oracle.hpp"
#include "chaininf/stretch.hpp"

namespace chaininf::cli {

namespace {

using nlohmann::json;

/// Command-line arguments could not be turned into a query.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuerySpec {
  std::string file;
  std::string observe;
  std::vector<std::string> evidence;
  std::size_t dry_runs = 1000;
  std::uint64_t seed = 0;
  bool no_prune = false;
  bool json = false;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<double> parse_vector(const std::string& node, const std::string& text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw UsageError("evidence for '" + node + "' must look like [v1,v2,...]");
  }
  std::vector<double> values;
  std::stringstream ss(text.substr(1, text.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw UsageError("evidence for '" + node + "': '" + item + "' is not a number");
    }
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError("evidence for '" + node + "': " + item + " is outside [0,1]");
    values.push_back(v);
  }
  return values;
}

/// `NODE=label` (sharp) or `NODE=[v1,...]` (fuzzy).
void add_evidence(const BayesNet& net, Query& q, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) throw UsageError("evidence '" + item + "' is not of the form NODE=VALUE");
  const std::string node = trim(item.substr(0, eq));
  const std::string value = trim(item.substr(eq + 1));
  if (!net.contains(node)) throw UsageError("unknown node '" + node + "'");
  if (q.evidence.count(node)) throw UsageError("evidence for '" + node + "' given twice");
  if (!value.empty() && value.front() == '[') {
    const auto values = parse_vector(node, value);
    if (values.size() != net.node(node).cardinality()) {
      throw UsageError("evidence for '" + node + "' has " + std::to_string(values.size()) + " values, node has " +
                       std::to_string(net.node(node).cardinality()) + " labels");
    }
    q.given(net, node, values);
  } else {
    const auto& labels = net.node(node).labels;
    if (std::find(labels.begin(), labels.end(), value) == labels.end()) {
      throw UsageError("node '" + node + "' has no label '" + value + "'");
    }
    q.given_label(net, node, value);
  }
}

json order_json(const std::vector<std::string>& order) { return json(order); }

int cmd_infer(const QuerySpec& spec, std::ostream& out) {
  const BayesNet net = read_bif(spec.file);
  if (!net.contains(spec.observe)) throw UsageError("unknown node '" + spec.observe + "'");
  Query q(spec.observe);
  for (const auto& e : spec.evidence) add_evidence(net, q, e);
  InferConfig cfg;
  cfg.dry_runs = spec.dry_runs;
  cfg.seed = spec.seed;
  cfg.prune = !spec.no_prune;
  const auto r = infer_detailed(net, q, cfg);
  if (spec.json) {
    json dist = json::array();
    const auto& labels = r.posterior.space().var(0).labels;
    for (std::size_t i = 0; i < labels.size(); ++i) dist.push_back({{"label", labels[i]}, {"probability", r.posterior(i)}});
    json doc = {{"observe", spec.observe},
                {"distribution", dist},
                {"ket", to_ket(r.posterior)},
                {"order", order_json(r.order)},
                {"width", r.width},
                {"stages", r.stages},
                {"nodes", r.nodes},
                {"elapsed_ms", r.elapsed.count() * 1e3}};
    out << doc.dump(2) << '\n';
  } else {
    out << to_ket(r.posterior) << '\n';
  }
  return kOk;
}

struct StatsSpec {
  std::string file;
  std::size_t runs = 1000;
  std::uint64_t seed = 0;
  bool dump = false;
  std::string dot;
  bool json = false;
};

int cmd_stats(const StatsSpec& spec, std::ostream& out) {
  const BayesNet net = read_bif(spec.file);
  if (spec.runs == 0) throw UsageError("--runs must be at least 1");
  const auto pick = dry_run_select(net, spec.runs, spec.seed);
  const std::set<std::uint64_t> distinct(pick.widths.begin(), pick.widths.end());
  const auto [mn, mx] = std::minmax_element(pick.widths.begin(), pick.widths.end());
  if (spec.json) {
    json doc = {{"nodes", net.size()},
                {"parameters", net.parameter_count()},
                {"runs", spec.runs},
                {"seed", spec.seed},
                {"min_width", *mn},
                {"max_width", *mx},
                {"distinct_widths", std::vector<std::uint64_t>(distinct.begin(), distinct.end())},
                {"selected_run", pick.run},
                {"selected_order", pick.order}};
    out << doc.dump(2) << '\n';
  } else {
    out << "nodes: " << net.size() << '\n';
    out << "parameters: " << net.parameter_count() << '\n';
    out << "runs: " << spec.runs << '\n';
    out << "seed: " << spec.seed << '\n';
    out << "min width: " << *mn << '\n';
    out << "max width: " << *mx << '\n';
    out << "distinct widths (" << distinct.size() << "):";
    for (auto w : distinct) out << ' ' << w;
    out << '\n';
    out << "selected run: " << pick.run << '\n';
    out << "selected order:";
    for (const auto& n : pick.order) out << ' ' << n;
    out << '\n';
  }
  if (spec.dump || !spec.dot.empty()) {
    const Chain chain = stretch(net, pick.order);
    if (spec.dump) out << describe(chain);
    if (!spec.dot.empty()) {
      std::ofstream f(spec.dot);
      if (!f) throw UsageError("cannot write '" + spec.dot + "'");
      f << to_dot(chain);
    }
  }
  return kOk;
}

struct BenchSpec {
  std::string file;
  std::size_t queries = 20;
  std::uint64_t seed = 0;
  std::size_t dry_runs = 1000;
};

int cmd_bench(const BenchSpec& spec, std::ostream& out) {
  const BayesNet net = read_bif(spec.file);
  Rng rng(spec.seed);
  const auto nodes = net.nodes();
  if (nodes.empty() && spec.queries > 0) throw UsageError("network has no nodes");
  out << "query\tobserve\tevidence\twidth\ttime_ms\tdeviation\n";
  double worst = 0.0;
  std::size_t checked = 0;
  std::size_t inconsistent = 0;
  double total_ms = 0.0;
  for (std::size_t i = 0; i < spec.queries; ++i) {
    const auto& observe = nodes[rng.uniform_index(nodes.size())].name;
    Query q(observe);
    std::vector<std::string> pool;
    for (const auto& n : nodes) {
      if (n.name != observe) pool.push_back(n.name);
    }
    const std::size_t want = std::min<std::size_t>(1 + rng.uniform_index(5), pool.size());
    std::string described;
    for (std::size_t k = 0; k < want; ++k) {
      const std::size_t pick = k + rng.uniform_index(pool.size() - k);
      std::swap(pool[k], pool[pick]);
      const auto& def = net.node(pool[k]);
      const auto& label = def.labels[rng.uniform_index(def.cardinality())];
      q.given_label(net, pool[k], label);
      described += (k ? "," : "") + pool[k] + "=" + label;
    }
    InferConfig cfg;
    cfg.dry_runs = spec.dry_runs;
    cfg.seed = Rng::derive(spec.seed, i);

    std::optional<InferResult> result;
    const auto start = std::chrono::steady_clock::now();
    try {
      result = infer_detailed(net, q, cfg);
    } catch (const InconsistentEvidence&) {
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    total_ms += ms;

    std::string deviation = "n/a";
    const BayesNet pruned = prune(net, q.nodes());
    if (oracle::joint_size(pruned) <= oracle::kEntryCap) {
      std::optional<StateD> expected;
      try {
        expected = oracle::brute_infer(pruned, q);
      } catch (const InconsistentEvidence&) {
      }
      if (result.has_value() != expected.has_value()) {
        deviation = "MISMATCH";
        worst = std::numeric_limits<double>::infinity();
      } else if (result) {
        const double d = (result->posterior.probs() - expected->probs()).cwiseAbs().maxCoeff();
        worst = std::max(worst, d);
        std::ostringstream ds;
        ds << std::scientific << std::setprecision(2) << d;
        deviation = ds.str();
      } else {
        deviation = "inconsistent";
      }
      ++checked;
    } else if (!result) {
      deviation = "inconsistent";
    }
    if (!result) ++inconsistent;

    out << (i + 1) << '\t' << observe << '\t' << described << '\t' << (result ? std::to_string(result->width) : "-")
        << '\t' << std::fixed << std::setprecision(3) << ms << '\t' << deviation << '\n';
    out.unsetf(std::ios::floatfield);
  }
  out << "# queries: " << spec.queries << ", oracle-checked: " << checked << ", inconsistent: " << inconsistent
      << ", max deviation: " << std::scientific << std::setprecision(2) << worst << ", total ms: " << std::fixed
      << std::setprecision(1) << total_ms << '\n';
  out.unsetf(std::ios::floatfield);
  return kOk;
}

void add_query_options(CLI::App& cmd, QuerySpec& spec, bool with_evidence) {
  cmd.add_option("file", spec.file, "BIF network file")->required();
  cmd.add_option("--observe", spec.observe, "Observation node")->required();
  if (with_evidence) {
    cmd.add_option("--evidence", spec.evidence, "NODE=label or NODE=[v1,v2,...]; repeatable");
  }
  cmd.add_option("--dry-runs", spec.dry_runs, "Random dry stretch runs")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", spec.seed, "Seed for the dry runs");
  cmd.add_flag("--no-prune", spec.no_prune, "Keep nodes irrelevant to the query");
  cmd.add_flag("--json", spec.json, "Structured output");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact inference in discrete Bayesian networks by stretching them into channel chains"};
  app.name("chaininf");
  app.require_subcommand(1);

  QuerySpec infer_spec;
  auto* infer_cmd = app.add_subcommand("infer", "Posterior of a node given evidence");
  add_query_options(*infer_cmd, infer_spec, true);

  QuerySpec marginal_spec;
  auto* marginal_cmd = app.add_subcommand("marginal", "Prior marginal of a node");
  add_query_options(*marginal_cmd, marginal_spec, false);

  StatsSpec stats_spec;
  auto* stats_cmd = app.add_subcommand("stats", "Chain widths over random dry runs");
  stats_cmd->add_option("file", stats_spec.file, "BIF network file")->required();
  stats_cmd->add_option("--runs", stats_spec.runs, "Number of dry runs")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--seed", stats_spec.seed, "Seed for the dry runs");
  stats_cmd->add_flag("--dump", stats_spec.dump, "Print the selected chain stage by stage");
  stats_cmd->add_option("--dot", stats_spec.dot, "Write the selected chain as a Graphviz file");
  stats_cmd->add_flag("--json", stats_spec.json, "Structured output");

  BenchSpec bench_spec;
  auto* bench_cmd = app.add_subcommand("bench", "Time random queries and compare with brute force");
  bench_cmd->add_option("file", bench_spec.file, "BIF network file")->required();
  bench_cmd->add_option("-n,--queries", bench_spec.queries, "Number of random queries");
  bench_cmd->add_option("--seed", bench_spec.seed, "Seed for query generation and dry runs");
  bench_cmd->add_option("--dry-runs", bench_spec.dry_runs, "Random dry stretch runs per query")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*infer_cmd) return cmd_infer(infer_spec, out);
    if (*marginal_cmd) return cmd_infer(marginal_spec, out);
    if (*stats_cmd) return cmd_stats(stats_spec, out);
    if (*bench_cmd) return cmd_bench(bench_spec, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const InconsistentEvidence& e) {
    err << "error: " << e.what() << '\n';
    return kInconsistentEvidence;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
    return kSizeCap;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  }
  return kUsage;
}

}  // namespace chaininf::cli
