// hamlab command-line front end.
//
// Exit codes: 0 success, 2 failed oracle assertion, 3 cap / config / input
// error.

#include "hamlab/count.hpp"
#include "hamlab/error.hpp"
#include "hamlab/factor.hpp"
#include "hamlab/generate.hpp"
#include "hamlab/graph.hpp"
#include "hamlab/harness.hpp"
#include "hamlab/posa.hpp"
#include "hamlab/structure.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace hamlab;
using nlohmann::ordered_json;

namespace {

constexpr int kExitAssertion = 2;
constexpr int kExitConfig = 3;

void emit_graph(const Graph& g, const std::string& path) {
  if (path.empty() || path == "-")
    write_edge_list(std::cout, g);
  else
    write_edge_list_file(path, g);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
}

struct SampleArgs {
  std::string model = "gnp";
  int n = 0;
  double p = 0.5;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string trace;
  std::string stop = "tau2";
};

int run_sample(const SampleArgs& a) {
  if (a.model == "gnp") {
    emit_graph(sample_gnp(a.n, a.p, Seed{a.seed}), a.out);
  } else if (a.model == "gnm") {
    emit_graph(sample_gnm(a.n, a.m, Seed{a.seed}), a.out);
  } else {
    const ProcessTrace trace = random_process(a.n, Seed{a.seed});
    std::size_t t = trace.order.size();
    if (a.stop == "tau1") t = trace.tau_min_degree_1;
    else if (a.stop == "tau2") t = trace.tau_min_degree_2;
    else if (a.stop == "conn") t = trace.tau_connected;
    emit_graph(trace.graph_at(t), a.out);
    if (!a.trace.empty()) write_text(a.trace, trace_to_json(trace) + "\n");
  }
  return 0;
}

struct CountArgs {
  std::string in;
  std::string what = "hamilton";
  int allow_isolated = 0;
  bool json = false;
};

int run_count(const CountArgs& a) {
  const Graph g = read_edge_list_file(a.in);
  BigCount count;
  std::optional<FactorCensus> census;
  if (a.what == "hamilton") {
    count = count_hamilton_cycles(g);
  } else if (a.what == "matchings") {
    count = count_perfect_matchings(g);
  } else if (a.what == "permanent") {
    // Adjacency matrix of g, i.e. of the symmetric digraph on its edges.
    Matrix m{g.n(), std::vector<std::int64_t>(static_cast<std::size_t>(g.n()) * g.n(), 0)};
    for (const Edge& e : g.edges()) {
      m.entries[static_cast<std::size_t>(e.u) * g.n() + e.v] = 1;
      m.entries[static_cast<std::size_t>(e.v) * g.n() + e.u] = 1;
    }
    count = permanent(m);
  } else {
    census = count_two_factors(g, a.allow_isolated);
    count = census->total();
  }
  if (!a.json) {
    if (census)
      for (const auto& [s, c] : census->by_cycles) std::cout << "s=" << s << ' ' << c.to_string() << '\n';
    std::cout << count.to_string() << '\n';
    return 0;
  }
  ordered_json j;
  j["what"] = a.what;
  j["n"] = g.n();
  j["count"] = count.to_string();
  if (census) {
    ordered_json c = ordered_json::object();
    for (const auto& [s, v] : census->by_cycles) c[std::to_string(s)] = v.to_string();
    j["census"] = std::move(c);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct CertifyArgs {
  std::string in;
  double p = 0.0;
  std::string mode = "exact";
  std::uint64_t seed = 0;
  std::string consts;
};

int run_certify(const CertifyArgs& a) {
  const Graph g = read_edge_list_file(a.in);
  const ConstantsProfile consts = a.consts.empty() ? ConstantsProfile{} : ConstantsProfile::from_file(a.consts);
  const CheckMode mode = a.mode == "sampled" ? CheckMode::sampled : CheckMode::exact;
  const auto cert = certify_p_expander(g, a.p, consts, mode, Seed{a.seed});
  ordered_json j;
  j["is_expander"] = cert.is_expander;
  j["d_set"] = cert.d_set;
  ordered_json vs = ordered_json::array();
  for (const auto& v : cert.violations)
    vs.push_back({{"property", static_cast<int>(v.property)}, {"name", to_string(v.property)}, {"witness", v.witness}});
  j["violations"] = std::move(vs);
  j["mode"] = to_string(cert.mode);
  j["max_path_length"] = cert.max_path_length;
  j["max_set_size"] = cert.max_set_size;
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct ConvertArgs {
  std::string graph;
  std::string factor;
  std::string boosters;
  std::optional<int> budget;
  std::optional<int> target;
};

int run_convert(const ConvertArgs& a) {
  const Graph g = read_edge_list_file(a.graph);
  const Factor f = read_factor_file(a.factor, g.n());
  ExposureStream stream{g, {}, {}};
  if (!a.boosters.empty()) {
    std::ifstream in(a.boosters);
    if (!in) throw IoError("cannot open " + a.boosters);
    int n = 0;
    stream.boosters = read_edge_sequence(in, n);
    if (n != g.n()) throw ParseError("booster file has n = " + std::to_string(n) + ", graph has " + std::to_string(g.n()));
  }
  const double density = g.n() > 1 ? static_cast<double>(g.edge_count()) / static_cast<double>(pair_count(g.n())) : 0.0;
  RotationBudget budget = RotationBudget::for_graph(g.n(), density);
  if (a.budget) budget.max_rotations_per_merge = *a.budget;
  if (a.target) budget.target_endpoint_count = *a.target;
  const auto rep = convert_factor_to_hamilton(g, f, stream, budget);

  ordered_json j;
  j["hamilton"] = rep.hamilton ? ordered_json(*rep.hamilton) : ordered_json(nullptr);
  j["hamming"] = rep.hamming;
  j["boosters_used"] = rep.boosters_used;
  j["initial_components"] = rep.initial_components;
  ordered_json rounds = ordered_json::array();
  for (const auto& r : rep.rounds) {
    ordered_json rj;
    rj["components_before"] = r.components_before;
    rj["rotations_used"] = r.rotations_used;
    rj["closing_edge"] = r.closing_edge ? ordered_json::array({r.closing_edge->u, r.closing_edge->v}) : ordered_json(nullptr);
    rj["was_booster"] = r.was_booster;
    rj["action"] = r.action;
    rounds.push_back(std::move(rj));
  }
  j["rounds"] = std::move(rounds);
  if (!rep.diagnostics.empty()) j["diagnostics"] = rep.diagnostics;
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct ExperimentArgs {
  std::string name;
  std::string config;
  std::string out;
  std::string format;
  int threads = 0;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = ExperimentConfig::from_file(a.config);
  if (!a.name.empty()) cfg.name = a.name;
  if (a.threads > 0) cfg.threads = a.threads;
  const std::string out = a.out.empty() ? cfg.output_path : a.out;
  ResultFormat format = ResultFormat::csv;
  if (a.format == "json" || (a.format.empty() && out.size() >= 5 && out.substr(out.size() - 5) == ".json"))
    format = ResultFormat::json;
  const ExperimentResult res = run_experiment(cfg);
  if (out.empty() || out == "-") {
    if (format == ResultFormat::csv)
      std::cout << results_to_csv(res.rows);
    else
      std::cout << results_to_json(res).dump(2) << '\n';
  } else {
    write_results(res, out, format);
    std::cout << res.summary.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hamlab: exact Hamilton-cycle counting and random-graph experiments"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample a random graph as an edge list");
  sample->add_option("--model", sa.model)->check(CLI::IsMember({"gnp", "gnm", "process"}));
  sample->add_option("--n", sa.n)->required();
  sample->add_option("--p", sa.p);
  sample->add_option("--m", sa.m);
  sample->add_option("--seed", sa.seed);
  sample->add_option("--out", sa.out);
  sample->add_option("--emit-trace", sa.trace, "Process model: write the trace as JSON");
  sample->add_option("--stop", sa.stop, "Process model: prefix to write")->check(CLI::IsMember({"tau1", "tau2", "conn", "full"}));

  CountArgs ca;
  auto* count = app.add_subcommand("count", "Exact counts for an edge-list graph");
  count->add_option("--in", ca.in)->required();
  count->add_option("--what", ca.what)->check(CLI::IsMember({"hamilton", "matchings", "two-factors", "permanent"}));
  count->add_option("--allow-isolated", ca.allow_isolated);
  count->add_flag("--json", ca.json);

  CertifyArgs ce;
  auto* certify = app.add_subcommand("certify", "Check the p-expander properties");
  certify->add_option("--in", ce.in)->required();
  certify->add_option("--p", ce.p)->required();
  certify->add_option("--mode", ce.mode)->check(CLI::IsMember({"exact", "sampled"}));
  certify->add_option("--seed", ce.seed);
  certify->add_option("--consts", ce.consts);

  ConvertArgs co;
  auto* convert = app.add_subcommand("convert", "Turn an almost 2-factor into a Hamilton cycle");
  convert->add_option("--graph", co.graph)->required();
  convert->add_option("--factor", co.factor)->required();
  convert->add_option("--boosters", co.boosters);
  convert->add_option("--budget", co.budget, "Rotations per merge");
  convert->add_option("--target", co.target, "Target endpoint count");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run a seeded Monte Carlo experiment");
  experiment->add_option("--name", ea.name)
      ->check(CLI::IsMember({"expected", "concentration", "hitting", "factor-pipeline", "matchings"}));
  experiment->add_option("--config", ea.config)->required();
  experiment->add_option("--out", ea.out);
  experiment->add_option("--format", ea.format)->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--threads", ea.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sample) return run_sample(sa);
    if (*count) return run_count(ca);
    if (*certify) return run_certify(ce);
    if (*convert) return run_convert(co);
    if (*experiment) return run_experiment_cmd(ea);
  } catch (const AssertionFailure& e) {
    std::cerr << "assertion failed: " << e.what() << "\nstate:\n" << e.state() << '\n';
    return kExitAssertion;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
