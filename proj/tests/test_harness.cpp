#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stratsim/harness.hpp"
#include "stratsim/io.hpp"

using namespace stratsim;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.instance.builder = "figure1";
  c.instance.n = 4;
  c.learner.name = "uniform_mix";
  c.adversary.name = "proper";
  c.horizon = 256;
  c.trials = 3;
  c.seed = 17;
  c.threads = 1;
  return c;
}

std::string dump(const TrialResult& r) { return trial_to_json(r, true).dump(); }

}  // namespace

TEST_SUITE("harness_cli") {
  TEST_CASE("one round with a correct learner costs nothing") {
    const auto inst = build_figure1(4);
    NaiveDeterministic nv(inst.cls);
    ProperAdversary adv(inst.figure1[0], 0);
    Rng lr(1);
    Rng ar(2);
    const auto r = run_protocol(inst, nv, adv, 1, lr, ar);
    CHECK(r.mistakes == 0);
    CHECK(r.regret == 0);
  }

  TEST_CASE("runs are bit-identical for a fixed seed") {
    auto c = base_config();
    c.emit_rounds = true;
    const auto a = run_trials(c);
    const auto b = run_trials(c);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) CHECK(dump(a.trials[i]) == dump(b.trials[i]));
    CHECK(trial_set_to_json(c, a).dump() == trial_set_to_json(c, b).dump());
  }

  TEST_CASE("thread count does not change results") {
    auto c = base_config();
    c.learner.name = "expert_mix";
    c.adversary.name = "general";
    c.trials = 6;
    const auto serial = run_trials(c);
    c.threads = 4;
    const auto parallel = run_trials(c);
    for (std::size_t i = 0; i < serial.trials.size(); ++i) CHECK(dump(serial.trials[i]) == dump(parallel.trials[i]));
  }

  TEST_CASE("seed isolation") {
    auto c = base_config();
    c.adversary.name = "general";
    const auto three = run_trials(c);
    c.trials = 6;
    const auto six = run_trials(c);
    for (std::size_t i = 0; i < 3; ++i) CHECK(dump(three.trials[i]) == dump(six.trials[i]));
    CHECK(six.trials[4].seed == 21);
  }

  TEST_CASE("single-trial summary") {
    auto c = base_config();
    c.trials = 1;
    const auto set = run_trials(c);
    CHECK(set.mistakes.mean == static_cast<double>(set.trials[0].mistakes));
    CHECK(set.mistakes.se == 0.0);
    CHECK(set.mistakes.min == set.mistakes.max);
  }

  TEST_CASE("summary statistics") {
    const auto s = summarize({1.0, 2.0, 3.0, 6.0});
    CHECK(s.mean == 3.0);
    CHECK(s.se == doctest::Approx(std::sqrt(14.0 / 3.0 / 4.0)));
    CHECK(s.min == 1.0);
    CHECK(s.max == 6.0);
  }

  TEST_CASE("realizable target has zero god-view loss and regret is shift invariant") {
    for (const std::string adv : {"proper", "general", "random_realizable"}) {
      auto c = base_config();
      c.adversary.name = adv;
      c.instance.n = 7;
      c.trials = 4;
      for (const auto& r : run_trials(c).trials) {
        REQUIRE(r.target.has_value());
        CHECK(r.per_hypothesis_loss[*r.target] == 0);
        CHECK(r.best_loss == 0);
        CHECK(r.regret == r.shifted_regret);
        CHECK(r.invariants.violations("protocol.shift_invariance") == 0);
      }
    }
  }

  TEST_CASE("transcripts replay exactly") {
    auto c = base_config();
    c.learner.name = "ftrl";
    c.adversary.name = "general";
    c.emit_rounds = true;
    c.trials = 2;
    const auto inst = build_instance(c.instance, c.horizon);
    for (auto r : run_trials(c, inst).trials) {
      CHECK(replay_transcript(inst, r.rounds));
      r.rounds[10].loss ^= 1;
      CHECK_FALSE(replay_transcript(inst, r.rounds));
    }
  }

  TEST_CASE("config json round trip") {
    auto c = base_config();
    c.learner.name = "ftrl";
    c.learner.eta = 0.25;
    c.adversary.name = "random_realizable";
    c.adversary.sequence_seed = 9;
    c.emit_rounds = true;
    const auto j = config_to_json(c);
    const auto back = config_from_json(j);
    CHECK(config_to_json(back) == j);

    const auto shorthand = config_from_json(Json::parse(R"({"learner": "exp3", "adversary": "proper", "T": 12})"));
    CHECK(shorthand.learner.name == "exp3");
    CHECK(shorthand.adversary.name == "proper");
    CHECK(shorthand.horizon == 12);
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"horizon": 5})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"schema_version": 2})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"T": -3})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"learner": {"name": "ftrl", "speed": 1}})")), ConfigError);
    auto c = base_config();
    c.horizon = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = base_config();
    c.learner.name = "mystery";
    CHECK_THROWS_AS(run_trials(c), ConfigError);
  }

  TEST_CASE("instance json round trip") {
    for (const auto& inst : {build_figure1(3), build_agnostic_composite(4, 64), build_random_graph(9, 3, 7, 2)}) {
      const auto j = instance_to_json(inst);
      const auto back = instance_from_json(j);
      CHECK(*back.graph == *inst.graph);
      CHECK(back.cls->members() == inst.cls->members());
      CHECK(back.figure1.size() == inst.figure1.size());
      CHECK(back.isolated == inst.isolated);
      CHECK(back.arm == inst.arm);
      CHECK(instance_to_json(back) == j);
    }
    auto j = instance_to_json(build_figure1(3));
    j["class"][0][0] = 0;
    CHECK_THROWS_AS(instance_from_json(j), ConfigError);
  }

  TEST_CASE("sweep csv") {
    auto c = base_config();
    c.trials = 2;
    const std::vector<double> values = {64, 128, 256};
    const auto rows = sweep(c, "T", values);
    std::ostringstream a;
    write_sweep_csv(a, "T", rows);
    std::ostringstream b;
    write_sweep_csv(b, "T", sweep(c, "T", values));
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "T,mean_mistakes,se_mistakes,mean_regret,se_regret,bound_value,schema_version");
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      const double p = uniform_mix_probability(4, static_cast<std::size_t>(r.value));
      CHECK(r.bound == doctest::Approx(p * r.value + (1 - p) / p * std::log(4.0)));
    }

    CHECK_THROWS_AS(sweep(c, "T", {128, 64}), ConfigError);
    CHECK_THROWS_AS(sweep(c, "T", {0}), ConfigError);
    CHECK_THROWS_AS(sweep(c, "q", {1}), ConfigError);
    auto rg = c;
    rg.instance.builder = "random_graph";
    CHECK_THROWS_AS(sweep(rg, "n", {4}), ConfigError);
  }

  TEST_CASE("bound column formulas") {
    auto c = base_config();
    const auto inst = build_instance(c.instance, c.horizon);

    c.learner.name = "expert_mix";
    const double p = expert_mix_probability(1, 5, 256);
    CHECK(bound_value(c, inst) == doctest::Approx(p * 256 + 2 * (1 - p) / p * std::log(10.0)));

    c.learner.name = "ftrl";
    const double eta = std::sqrt(std::log(4.0) / 256);
    CHECK(bound_value(c, inst) == doctest::Approx(std::log(4.0) / eta + eta * 256 + 16 * 4 * std::log(4.0 * 256)));
  }

  TEST_CASE("verify passes and detects the injected fault") {
    const auto ok = verify_invariants({});
    CHECK(ok.total_violations() == 0);
    CHECK(ok.checks("estimator.unbiased") == 1000);

    VerifyOptions faulty;
    faulty.inject_stability_fault = true;
    const auto bad = verify_invariants(faulty);
    CHECK(bad.violations("ftrl.stability_probe") > 0);

    std::ostringstream report;
    write_report(report, bad);
    CHECK(report.str().find("FAIL ftrl.stability_probe") != std::string::npos);
    CHECK(report.str().find("PASS estimator.unbiased") != std::string::npos);
  }
}
