#include <doctest.h>

#include <memory>

#include "stratsim/instance.hpp"
#include "stratsim/littlestone.hpp"

using namespace stratsim;

namespace {

std::vector<VertexId> iota_points(std::size_t k) {
  std::vector<VertexId> pts(k);
  for (std::size_t i = 0; i < k; ++i) pts[i] = static_cast<VertexId>(i);
  return pts;
}

SoaState fresh_soa(HypothesisClass c) {
  return SoaState(std::make_shared<LittlestoneOracle>(std::make_shared<const HypothesisClass>(std::move(c))));
}

// Plain recursion with no pruning or memo, used as an oracle.
int brute_ldim(const HypothesisClass& c, const std::vector<std::size_t>& version) {
  int best = 0;
  for (VertexId x = 0; x < c.vertex_count(); ++x) {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (auto i : version) (c[i](x) == Label::Positive ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty()) continue;
    best = std::max(best, 1 + std::min(brute_ldim(c, pos), brute_ldim(c, neg)));
  }
  return best;
}

int brute_ldim(const HypothesisClass& c) {
  std::vector<std::size_t> all(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) all[i] = i;
  return brute_ldim(c, all);
}

}  // namespace

TEST_SUITE("hypothesis_space") {
  TEST_CASE("ldim examples") {
    const auto pts = iota_points(4);
    const HypothesisClass single(4, {Hypothesis::from_positives(4, std::span(pts).first(2))});
    CHECK(ldim(single) == 0);
    for (std::size_t k = 1; k <= 4; ++k) {
      CHECK(ldim(all_labelings(k, std::span(pts).first(k))) == static_cast<int>(k));
    }
    for (std::size_t n : {2, 4, 8}) CHECK(ldim(figure1_class(n)) == 1);
  }

  TEST_CASE("ldim of product copies") {
    for (std::size_t n : {2, 3}) {
      for (std::size_t d = 1; d <= 3; ++d) {
        const auto c = product_copies(figure1_class(n), d);
        CHECK(c.size() == static_cast<std::size_t>(std::pow(n, d)));
        CHECK(ldim(c) == static_cast<int>(d));
      }
    }
  }

  TEST_CASE("ldim agrees with unpruned recursion on random classes") {
    Rng rng = make_stream(11, 0, StreamRole::Instance);
    for (int rep = 0; rep < 40; ++rep) {
      const std::size_t v = 2 + uniform_index(rng, 5);
      const std::size_t m = 1 + uniform_index(rng, 10);
      const auto inst = build_random_graph(v, 2, std::min<std::size_t>(m, (std::size_t{1} << v) - 1), rng());
      CHECK(ldim(*inst.cls) == brute_ldim(*inst.cls));
    }
  }

  TEST_CASE("soa prediction examples") {
    const auto pts = iota_points(3);
    const auto s = fresh_soa(singletons_over(3, pts));
    CHECK(s.predict(0) == Label::Negative);

    const HypothesisClass one(3, {Hypothesis::from_positives(3, std::span(pts).subspan(1, 1))});
    const auto single = fresh_soa(one);
    CHECK(single.predict(1) == Label::Positive);
    CHECK(single.predict(0) == Label::Negative);

    const auto fed = s.fed(0, Label::Positive);
    CHECK(fed.predict(1) == Label::Negative);
    CHECK(fed.predict(0) == Label::Positive);
  }

  TEST_CASE("soa hypothesis examples") {
    const auto pts = iota_points(3);
    const HypothesisClass one(3, {Hypothesis::from_positives(3, std::span(pts).first(2))});
    CHECK(fresh_soa(one).hypothesis() == one[0]);

    CHECK(fresh_soa(singletons_over(3, pts)).hypothesis() == Hypothesis::constant(3, Label::Negative));
    for (std::size_t n : {2, 3, 6}) {
      const auto c = figure1_class(n);
      CHECK(fresh_soa(c).hypothesis() == Hypothesis::constant(c.vertex_count(), Label::Negative));
    }
  }

  TEST_CASE("soa update examples") {
    const auto pts = iota_points(3);
    const auto s = fresh_soa(singletons_over(3, pts));
    const auto neg = s.fed(0, Label::Negative);
    CHECK(neg.version() == VersionSpace{1, 2});
    CHECK(neg.history() == std::vector<Example>{{0, Label::Negative}});
    CHECK(s.version().size() == 3);

    const auto pos = s.fed(0, Label::Positive);
    CHECK(pos.version() == VersionSpace{0});
    CHECK(pos.predict(0) == Label::Positive);

    CHECK_FALSE(pos.consistent_with(1, Label::Positive));
    CHECK_THROWS_AS(pos.fed(1, Label::Positive), std::invalid_argument);
  }

  TEST_CASE("class builders") {
    for (std::size_t n : {2, 5}) {
      const auto c = figure1_class(n);
      const Figure1Layout lay{n, 0};
      CHECK(c.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(c[i].positives().size() == 1);
        CHECK(c[i].positives()[0] == lay.p(i));
      }
    }

    const auto c1 = figure1_class(3);
    const auto c2 = first_labelings(2, iota_points(2), 3);
    const auto u = union_extend(c1, c2);
    CHECK(u.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(u[i] == concat(c1[i], c2[i]));
    CHECK_THROWS_AS(union_extend(c1, figure1_class(4)), std::invalid_argument);

    const auto pts = iota_points(2);
    const auto all = all_labelings(2, pts);
    CHECK(all.size() == 4);
    CHECK(all[0] == Hypothesis::constant(2, Label::Negative));
    CHECK(all[1](0) == Label::Negative);
    CHECK(all[1](1) == Label::Positive);
    CHECK(all[3] == Hypothesis::constant(2, Label::Positive));

    CHECK_THROWS_AS(HypothesisClass(3, {}), std::invalid_argument);
    CHECK_THROWS_AS(HypothesisClass(3, {Hypothesis::constant(3, Label::Negative), Hypothesis::constant(3, Label::Negative)}),
                    std::invalid_argument);
  }

  TEST_CASE("soa makes at most Ldim mistakes on realizable sequences") {
    Rng rng = make_stream(5, 0, StreamRole::Instance);
    for (int rep = 0; rep < 30; ++rep) {
      const auto inst = build_random_graph(8, 3, 12, rng());
      auto oracle = std::make_shared<LittlestoneOracle>(inst.cls);
      const int d = oracle->dimension(full_version(*inst.cls));
      const auto& target = (*inst.cls)[uniform_index(rng, inst.cls->size())];
      SoaState s(oracle);
      int mistakes = 0;
      for (int t = 0; t < 40; ++t) {
        const auto x = static_cast<VertexId>(uniform_index(rng, 8));
        if (s.predict(x) != target(x)) ++mistakes;
        s = s.fed(x, target(x));
      }
      CHECK(mistakes <= d);
    }
  }
}
