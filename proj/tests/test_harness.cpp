#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamlab/error.hpp"
#include "hamlab/harness.hpp"
#include "hamlab/posa.hpp"
#include "support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hamlab;
using nlohmann::ordered_json;

namespace {

ExperimentConfig config(const std::string& name, std::vector<int> ns, std::vector<double> ps, int trials,
                        std::uint64_t seed = 7) {
  ExperimentConfig c;
  c.name = name;
  c.n_values = std::move(ns);
  c.p_values = std::move(ps);
  c.trials = trials;
  c.seed = Seed{seed};
  return c;
}

std::string aux(const TrialRow& r, const std::string& key) {
  for (const auto& [k, v] : r.aux)
    if (k == key) return v;
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# demo\nname = expected\nn_values = 8, 10\np_values=0.5\ntrials = 20\nseed = 99\nthreads = 2\n"
      "cap_hamilton_dp = 20\noutput = out.csv\n");
  const auto c = ExperimentConfig::parse(in);
  CHECK(c.name == "expected");
  CHECK(c.n_values == std::vector<int>{8, 10});
  CHECK(c.p_values == std::vector<double>{0.5});
  CHECK(c.trials == 20);
  CHECK(c.seed.value == 99);
  CHECK(c.threads == 2);
  CHECK(c.caps.hamilton_dp == 20);
  CHECK(c.output_path == "out.csv");
  CHECK_FALSE(c.to_json().contains("threads"));
  for (const char* bad : {"trials = 0\n", "bogus = 1\n", "n_values = 4, x\n", "p_values = 1.5\n", "nokey\n"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(ExperimentConfig::parse(b), ParseError);
  }
}

TEST_CASE("number formatting and intervals") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  // Wilson interval for 8/10 at 95%: (0.4902, 0.9433).
  const auto [lo, hi] = wilson_interval(8, 10);
  CHECK(lo == doctest::Approx(0.4901625).epsilon(1e-6));
  CHECK(hi == doctest::Approx(0.9433178).epsilon(1e-6));
  const auto [z0, z1] = wilson_interval(0, 50);
  CHECK(z0 == 0.0);
  CHECK(z1 > 0.0);
  CHECK(wilson_interval(5, 5).second == 1.0);
}

TEST_CASE("serialisation") {
  CHECK(results_to_csv({}) == "experiment,n,p,trial,seed,h,normalized\n");

  TrialRow big;
  big.experiment = "expected";
  big.n = 20;
  big.p = 1.0;
  big.h = BigCount::factorial(19).divided_exactly(2);
  big.aux = {{"edges", "190"}};
  const std::string csv = results_to_csv({big});
  CHECK(csv.find(",60822550204416000,") != std::string::npos);
  CHECK(csv.find("aux_edges") != std::string::npos);

  const auto res = experiment_expected_count(config("expected", {8}, {0.3, 0.6}, 15));
  const auto doc = results_to_json(res);
  CHECK(doc["rows"].size() == 30);
  const auto back = rows_from_json(ordered_json::parse(doc.dump()));
  CHECK(back == res.rows);
  CHECK(summarize(res.config, back) == res.summary);

  const auto dir = std::filesystem::temp_directory_path() / "hamlab_test_harness";
  std::filesystem::create_directories(dir);
  write_results(res, (dir / "r.json").string(), ResultFormat::json);
  CHECK(rows_from_json(ordered_json::parse(slurp(dir / "r.json"))) == res.rows);
  write_results(res, (dir / "r.csv").string(), ResultFormat::csv);
  CHECK(slurp(dir / "r.csv") == results_to_csv(res.rows));
  CHECK_THROWS_AS(write_results(res, (dir / "missing" / "x.csv").string(), ResultFormat::csv), IoError);
}

TEST_CASE("output is independent of thread count") {
  for (const char* name : {"expected", "hitting", "factor-pipeline"}) {
    CAPTURE(name);
    auto c = config(name, {7, 8}, {0.5}, 12, 3);
    const auto one = run_experiment(c);
    c.threads = 4;
    const auto four = run_experiment(c);
    CHECK(results_to_json(one).dump() == results_to_json(four).dump());
    CHECK(results_to_csv(one.rows) == results_to_csv(four.rows));
  }
  auto c = config("expected", {8}, {0.5}, 5, 3);
  const auto a = run_experiment(c);
  c.seed = Seed{4};
  CHECK(run_experiment(c).rows != a.rows);
}

TEST_CASE("expected-count experiment") {
  const auto full = experiment_expected_count(config("expected", {6, 9}, {1.0}, 10));
  for (const auto& r : full.rows) CHECK(r.h == BigCount::factorial(r.n - 1).divided_exactly(2));
  CHECK(full.summary["groups"][0]["standard_error"] == 0.0);
  CHECK(full.summary["groups"][0]["z_score"] == 0.0);
  CHECK(full.summary["groups"][1]["mean_h"] == 20160.0);

  const auto empty = experiment_expected_count(config("expected", {7}, {0.0}, 10));
  for (const auto& r : empty.rows) {
    CHECK(r.h.is_zero());
    CHECK_FALSE(r.normalized.has_value());
  }
  CHECK(empty.summary["groups"][0]["fraction_h_positive"] == 0.0);

  const auto mid = experiment_expected_count(config("expected", {9}, {0.5}, 400));
  const auto& g = mid.summary["groups"][0];
  CHECK(g["expected_h"].get<double>() == doctest::Approx(20160.0 / 512.0));
  CHECK(std::abs(g["z_score"].get<double>()) < 5.0);

  auto capped = config("expected", {30}, {0.5}, 1);
  CHECK_THROWS_AS(run_experiment(capped), CapacityError);
  CHECK_THROWS_AS(run_experiment(config("nonsense", {5}, {0.5}, 1)), ParseError);
}

TEST_CASE("concentration experiment") {
  const auto res = experiment_concentration(config("concentration", {8}, {1.0, 0.15}, 40));
  const auto& complete = res.summary["groups"][0];
  // ((n-1)!/2)^(1/n) e / n at n = 8.
  const double value = std::exp(std::log(2520.0) / 8 + 1.0) / 8.0;
  CHECK(complete["normalized_median"].get<double>() == doctest::Approx(value));
  CHECK(value < 1.0);
  CHECK(complete["fraction_normalized_le_1"] == 1.0);
  const auto& sparse = res.summary["groups"][1];
  CHECK(sparse["zero_h_trials"].get<std::uint64_t>() + sparse["normalized_count"].get<std::uint64_t>() == 40);
  CHECK(sparse["zero_h_trials"].get<std::uint64_t>() > 0);
  for (const auto& r : res.rows) CHECK(r.normalized.has_value() == !r.h.is_zero());
}

TEST_CASE("hitting-time experiment") {
  const auto tri = experiment_hitting_time(config("hitting", {3}, {}, 20));
  for (const auto& r : tri.rows) {
    CHECK(r.h.to_string() == "1");
    CHECK(aux(r, "agree") == "1");
  }
  const auto res = experiment_hitting_time(config("hitting", {9, 10}, {}, 60));
  for (const auto& r : res.rows) {
    CHECK(aux(r, "minimal") == "1");
    CHECK(aux(r, "agree") == "1");
    CHECK(r.p == doctest::Approx(std::stod(aux(r, "tau2")) / (r.n * (r.n - 1) / 2.0)));
  }
  CHECK(res.summary["groups"][1]["fraction_prober_agrees"] == 1.0);
}

TEST_CASE("factor pipeline") {
  const auto complete = experiment_factor_pipeline(config("factor-pipeline", {7}, {1.0}, 3));
  for (const auto& r : complete.rows) {
    CHECK(aux(r, "boosters") == "0");
    CHECK(aux(r, "max_boosters_used") == "0");
    CHECK(aux(r, "converted") == aux(r, "sampled"));
    CHECK(aux(r, "premise") == "1");
  }
  const auto res = experiment_factor_pipeline(config("factor-pipeline", {8, 9}, {0.5}, 8));
  for (const auto& r : res.rows) {
    const double lb = std::stod(aux(r, "lower_bound"));
    CHECK(lb <= r.h.to_double() * (1 + 1e-9));
  }

  SUBCASE("unreachable isolated vertex") {
    Graph g = Graph::complete(10);
    for (int v = 0; v < 9; ++v) g.remove_edge(v, 9);
    const Factor f(10, {{0, 1, 2, 3, 4, 5, 6, 7, 8}}, {9});
    const ExposureStream s{g, {Edge{0, 1}}, {9}};
    const auto rep = convert_factor_to_hamilton(g, f, s, RotationBudget::for_graph(10, 0.8));
    CHECK_FALSE(rep.hamilton.has_value());
    CAPTURE(rep.diagnostics);
    CHECK(rep.diagnostics.find("vertex 9 is unreachable") != std::string::npos);
  }
}

TEST_CASE("matchings experiment") {
  const auto k4 = experiment_matchings(config("matchings", {4}, {1.0}, 2));
  for (const auto& r : k4.rows) {
    CHECK(r.h.to_string() == "3");
    CHECK(aux(r, "m") == "3");
    CHECK(aux(r, "bound") == "3");
  }
  CHECK(k4.summary["groups"][0]["tight"] == 2);
  const auto res = experiment_matchings(config("matchings", {8}, {0.3}, 60));
  for (const auto& r : res.rows) {
    const BigCount m = BigCount::from_string(aux(r, "m"));
    if (m.to_string() == "0" || m.to_string() == "1") CHECK(r.h.is_zero());
    CHECK(r.h <= BigCount::from_string(aux(r, "bound")));
  }
  CHECK_THROWS_AS(experiment_matchings(config("matchings", {7}, {0.5}, 1)), ParseError);
}
