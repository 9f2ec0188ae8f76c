#include <doctest.h>

#include <cmath>
#include <memory>

#include "stratsim/adversary.hpp"
#include "stratsim/harness.hpp"
#include "stratsim/instance.hpp"
#include "stratsim/littlestone.hpp"

using namespace stratsim;

namespace {

ClassifierDistribution point_mass(const Hypothesis& h) {
  ClassifierDistribution d;
  d.add(h, 1.0);
  return d;
}

}  // namespace

TEST_SUITE("adversaries") {
  TEST_CASE("figure1 instance invariants") {
    for (std::size_t n : {2, 4, 9}) {
      const auto inst = build_figure1(n);
      CHECK(inst.cls->size() == n);
      CHECK(ldim(*inst.cls) == 1);
      CHECK(max_degree(*inst.graph) == n + 1);
      REQUIRE(inst.figure1.size() == 1);
      for (std::size_t k = 0; k < n; ++k) {
        CHECK((*inst.cls)[k].positives().size() == 1);
        CHECK((*inst.cls)[k](inst.figure1[0].p(k)) == Label::Positive);
      }
    }
    CHECK_THROWS_AS(build_figure1(1), std::invalid_argument);
  }

  TEST_CASE("set classification") {
    const auto inst = build_figure1(4);
    const auto& lay = inst.figure1[0];
    const auto vc = inst.graph->vertex_count();
    CHECK(classify_sets(Hypothesis::constant(vc, Label::Positive), lay) == SetMembership{true, true, false});
    CHECK(classify_sets(Hypothesis::constant(vc, Label::Negative), lay) == SetMembership{false, false, true});
    for (const auto& h : inst.cls->members()) CHECK(classify_sets(h, lay).good());

    const std::vector<VertexId> two = {lay.p(1), lay.p(3)};
    const auto h = Hypothesis::from_positives(vc, two);
    CHECK(classify_sets(h, lay).good());
    CHECK(smallest_positive_p(h, lay) == 1);
    CHECK_FALSE(smallest_positive_p(Hypothesis::constant(vc, Label::Negative), lay).has_value());
  }

  TEST_CASE("general adversary cases") {
    const auto inst = build_figure1(6);
    const auto& lay = inst.figure1[0];
    const auto vc = inst.graph->vertex_count();
    GeneralAdversary adv(inst.graph, lay, 4, 0.03, 4);

    const auto plus = Hypothesis::constant(vc, Label::Positive);
    CHECK(adv.respond(point_mass(plus)) == Agent{lay.left(), Label::Negative});
    CHECK(adv.last_case() == GeneralAdversary::Case::LeftNegative);

    const std::vector<VertexId> sink = {lay.sink()};
    CHECK(adv.respond(point_mass(Hypothesis::from_positives(vc, sink))) == Agent{lay.sink(), Label::Negative});
    CHECK(adv.last_case() == GeneralAdversary::Case::SinkNegative);

    const auto minus = Hypothesis::constant(vc, Label::Negative);
    CHECK(adv.respond(point_mass(minus)) == Agent{lay.right(), Label::Positive});
    CHECK(adv.last_case() == GeneralAdversary::Case::RightPositive);

    ClassifierDistribution uniform;
    for (const auto& h : inst.cls->members()) uniform.add(h, 1.0 / 6.0);
    for (double gamma : {1e-6, 0.03, 0.5, 1.0}) {
      GeneralAdversary g(inst.graph, lay, 4, gamma, 4);
      CHECK(g.respond(uniform) == Agent{lay.u(4), Label::Negative});
      CHECK(g.last_case() == GeneralAdversary::Case::Hidden);
    }

    // Mass below gamma on A falls through to the hidden index.
    ClassifierDistribution mostly_good = uniform;
    ClassifierDistribution mix;
    for (const auto& a : mostly_good.atoms()) mix.add(*a.classifier, a.mass * 0.99);
    mix.add(plus, 0.01);
    CHECK(adv.respond(mix) == Agent{lay.u(4), Label::Negative});
    mix.clear();
    for (const auto& a : mostly_good.atoms()) mix.add(*a.classifier, a.mass * 0.96);
    mix.add(plus, 0.04);
    CHECK(adv.respond(mix) == Agent{lay.left(), Label::Negative});

    Rng rng(1);
    CHECK_THROWS_AS(adv.next(ClassifierDistribution{}, 0, rng), std::invalid_argument);
  }

  TEST_CASE("every general-adversary agent is realized by the hidden member") {
    const auto inst = build_figure1(5);
    const auto& lay = inst.figure1[0];
    for (std::size_t hidden = 0; hidden < 5; ++hidden) {
      const auto& h = (*inst.cls)[hidden];
      for (const auto& agent : {Agent{lay.left(), Label::Negative}, Agent{lay.sink(), Label::Negative},
                                Agent{lay.right(), Label::Positive}, Agent{lay.u(hidden), Label::Negative}}) {
        CHECK(strategic_loss(*inst.graph, h, agent.x, agent.y) == 0);
      }
    }
  }

  TEST_CASE("proper adversary") {
    const auto inst = build_figure1(5);
    const auto& lay = inst.figure1[0];
    ProperAdversary adv(lay, 2);
    Rng rng(1);
    const auto a = adv.next(ClassifierDistribution{}, 0, rng);
    CHECK(a == Agent{lay.u(2), Label::Negative});
    CHECK(strategic_loss(*inst.graph, (*inst.cls)[2], a.x, a.y) == 0);
    for (std::size_t j = 0; j < 5; ++j) {
      if (j == 2) continue;
      CHECK(strategic_loss(*inst.graph, (*inst.cls)[j], a.x, a.y) == 1);
      CHECK(best_response(*inst.graph, (*inst.cls)[j], a.x).landed == lay.p(j));
    }
  }

  TEST_CASE("d-copies instance") {
    const auto one = build_d_copies(4, 1);
    const auto f = build_figure1(4);
    CHECK(*one.graph == *f.graph);
    CHECK(one.cls->members() == f.cls->members());

    for (std::size_t d : {2, 3}) {
      const auto inst = build_d_copies(3, d);
      CHECK(inst.cls->size() == static_cast<std::size_t>(std::pow(3, d)));
      CHECK(inst.figure1.size() == d);
      CHECK(inst.figure1[1].offset == Figure1Layout::vertex_count(3));
    }
  }

  TEST_CASE("block adversary schedule") {
    const auto inst = build_d_copies(3, 2);
    BlockAdversary adv(inst.graph, inst.figure1, {2, 1}, 100, 1.0);
    CHECK(adv.block_of(0) == 0);
    CHECK(adv.block_of(49) == 0);
    CHECK(adv.block_of(50) == 1);
    CHECK(adv.block_of(99) == 1);
    CHECK(*adv.target() == 2 * 3 + 1);
  }

  TEST_CASE("composite arm selection") {
    CHECK(composite_arm(1000, 100) == CompositeArm::Realizable);
    CHECK(composite_arm(4, 1000000) == CompositeArm::Stochastic);

    const std::size_t n = 6;
    const auto inst = build_agnostic_composite(n, 100);
    const auto f = figure1_class(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& labels = (*inst.cls)[i].labels();
      CHECK(labels.head(static_cast<Eigen::Index>(f.vertex_count())) == f[i].labels());
    }
    CHECK(inst.isolated.size() == ceil_log2(n));
  }

  TEST_CASE("stochastic instance") {
    const auto inst = build_stochastic(8);
    CHECK(inst.graph->edge_count() == 0);
    CHECK(inst.isolated.size() == 3);
    CHECK(ldim(*inst.cls) == 3);
    CHECK(build_stochastic(5).cls->size() == 5);
    CHECK(ldim(*build_stochastic(5).cls) == 2);

    StochasticAdversary adv(inst.isolated);
    Rng rng = make_stream(3, 0, StreamRole::Adversary);
    long sum = 0;
    const int rounds = 10000;
    for (int t = 0; t < rounds; ++t) sum += to_int(adv.next(ClassifierDistribution{}, t, rng).y);
    CHECK(std::abs(static_cast<double>(sum) / rounds) <= 3.0 / std::sqrt(rounds));

    for (const auto& h : inst.cls->members()) {
      for (VertexId x = 0; x < inst.graph->vertex_count(); ++x) {
        for (Label y : {Label::Negative, Label::Positive}) {
          CHECK(strategic_loss(*inst.graph, h, x, y) == (h(x) != y ? 1 : 0));
        }
      }
    }
  }

  TEST_CASE("best fixed member in hindsight loses at most T/2 on the stochastic instance") {
    ExperimentConfig cfg;
    cfg.instance.builder = "stochastic";
    cfg.instance.n = 8;
    cfg.learner.name = "exp3";
    cfg.adversary.name = "stochastic";
    cfg.horizon = 501;
    cfg.trials = 10;
    cfg.threads = 1;
    for (const auto& r : run_trials(cfg).trials) CHECK(2 * r.best_loss <= 501);
  }

  TEST_CASE("lower-bound constants") {
    CHECK(lower_bound_gamma(1024) == 1.0 / 32.0);
    CHECK(lower_bound_gamma(1024, 2.0) == 1.0 / 16.0);
    CHECK(lower_bound_tau(64, 1024) == 5);
    CHECK(lower_bound_tau(4, 1024) == 2);
    CHECK(lower_bound_tau(64, 1) == 0);
  }

  TEST_CASE("adversary audits hold on adaptive runs") {
    for (const std::string learner : {"uniform_mix", "expert_mix", "ftrl", "exp3", "explore_positive"}) {
      ExperimentConfig cfg;
      cfg.instance.builder = "figure1";
      cfg.instance.n = 8;
      cfg.learner.name = learner;
      cfg.adversary.name = "general";
      cfg.horizon = 300;
      cfg.trials = 4;
      cfg.threads = 1;
      const auto set = run_trials(cfg);
      CAPTURE(learner);
      CHECK(set.invariants.checks("general_adversary.case_mass") + set.invariants.checks("general_adversary.hidden_trap") >
            0);
      CHECK(set.invariants.total_violations() == 0);
      for (const auto& r : set.trials) {
        REQUIRE(r.target.has_value());
        CHECK(r.per_hypothesis_loss[*r.target] == 0);
      }
    }
  }
}
