#include "bsq/gpomdp.hpp"

#include <cmath>

#include "doctest.h"
#include "test_models.hpp"

using namespace bsq;

namespace {

// Eq-style closed form for the broken-pair filter: posterior that a component
// is broken after being observed broken d more times than not.
double posterior_after(int d, double acc) {
  double a = std::pow(acc, d), b = std::pow(1 - acc, d);
  return a / (a + b);
}

Formula broken_robot() { return Formula::cmp(Term::var(0), CmpOp::Ne, Term::literal(0)); }

}  // namespace

TEST_SUITE("gpomdp") {

TEST_CASE("belief_query on the uniform prior") {
  auto m = testutil::broken_pair();
  CHECK(belief_query(m, m.initial_belief, broken_robot()) == doctest::Approx(0.5));

  // all mass on one state
  Belief b = Belief::point(4, 0);  // s_TT
  CHECK(belief_query(m, b, broken_robot()) == doctest::Approx(1.0));

  Formula bad = Formula::cmp(Term::var(7), CmpOp::Eq, Term::literal(1));
  CHECK_THROWS_AS(belief_query(m, m.initial_belief, bad), Error);
}

TEST_CASE("belief_update posterior after one o_TT") {
  auto m = testutil::broken_pair();
  Belief b = belief_update(m, m.initial_belief, 0, 0);  // observe (broken, broken)
  CHECK(b.at(0) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(b.at(1) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(b.at(2) == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(b.at(3) == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(belief_query(m, b, broken_robot()) == doctest::Approx(0.60).epsilon(1e-12));
  CHECK(b.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform likelihood leaves the belief unchanged") {
  auto m = testutil::broken_pair();
  // make the observation model uninformative
  for (auto& p : m.obs_p) p = 0.25;
  Belief b = belief_update(m, m.initial_belief, 0, 2);
  for (std::uint32_t s = 0; s < 4; ++s) CHECK(b.at(s) == doctest::Approx(0.25));
}

TEST_CASE("zero-likelihood observation raises") {
  auto m = testutil::broken_pair();
  // state 0 can no longer produce observation 3
  m.obs_p[0 * 4 + 3] = 0.0;
  m.obs_p[0 * 4 + 0] += 0.10;
  Belief b = Belief::point(4, 0);
  CHECK_THROWS_AS(belief_update(m, b, 0, 3), ImpossibleObservation);
}

TEST_CASE("belief_update_seq matches the closed form") {
  auto m = testutil::broken_pair();

  CHECK(belief_update_seq(m, m.initial_belief, {}) == m.initial_belief);

  for (int k = 1; k <= 6; ++k) {
    std::vector<std::pair<int, int>> trace(k, {0, 0});  // k repetitions of o_TT
    Belief b = belief_update_seq(m, m.initial_belief, trace);
    CHECK(belief_query(m, b, broken_robot()) ==
          doctest::Approx(posterior_after(k, 0.6)).epsilon(1e-12));
  }

  // o_TT then o_FF cancels out for the robot
  std::vector<std::pair<int, int>> updown{{0, 0}, {0, 3}};
  Belief b = belief_update_seq(m, m.initial_belief, updown);
  CHECK(belief_query(m, b, broken_robot()) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("belief_update_seq equals iterated belief_update bit for bit") {
  auto m = testutil::broken_pair();
  std::vector<std::pair<int, int>> trace{{0, 0}, {0, 2}, {0, 1}, {0, 0}, {0, 3}};
  Belief lhs = belief_update_seq(m, m.initial_belief, trace);
  Belief rhs = m.initial_belief;
  for (auto [a, o] : trace) rhs = belief_update(m, rhs, a, o);
  CHECK(lhs == rhs);
}

TEST_CASE("observation_likelihood") {
  auto m = testutil::broken_pair();
  auto lik = observation_likelihood(m, m.initial_belief, 0);
  REQUIRE(lik.size() == 4);
  double sum = 0.0;
  for (double p : lik) {
    CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  auto point = observation_likelihood(m, Belief::point(4, 0), 0);
  CHECK(point[0] == doctest::Approx(0.45).epsilon(1e-12));

  auto c = testutil::corridor();
  auto det = observation_likelihood(c, c.initial_belief, 0);
  CHECK(det[0] == doctest::Approx(1.0));
}

TEST_CASE("step_simulate respects sinks and row distributions") {
  auto c = testutil::corridor();
  Rng rng(3);
  // goal state is a sink under every action
  for (int i = 0; i < 50; ++i) {
    auto [s2, o] = step_simulate(c, 3, i % 2, rng);
    CHECK(s2 == 3);
  }
  // deterministic row
  auto [s2, o] = step_simulate(c, 0, 0, rng);
  CHECK(s2 == 1);

  // empirical frequency for a (0.7, 0.3) row
  GPomdp coin = c;
  coin.goal.assign(4, 0);
  coin.trans[0][0] = {{1, 0.7}, {2, 0.3}};
  int hits = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto [nxt, ob] = step_simulate(coin, 0, 0, rng);
    if (nxt == 1) ++hits;
  }
  CHECK(double(hits) / n == doctest::Approx(0.7).epsilon(0.03));
}

TEST_CASE("rollout reaches the corridor goal at t=3") {
  auto c = testutil::corridor();
  PolicyFn go = [](const Belief&) { return std::pair<int, int>{0, 0}; };
  Rng rng(1);
  auto rec = rollout(c, go, 8, rng);
  REQUIRE(rec.goal_time.has_value());
  CHECK(*rec.goal_time == 3);
  CHECK(rec.cost() == 3);
  CHECK(rec.leaf_key.size() == 3);  // truncated at goal entry
}

TEST_CASE("rollout that never reaches the goal costs H") {
  auto c = testutil::corridor();
  PolicyFn stay = [](const Belief&) { return std::pair<int, int>{1, 1}; };
  Rng rng(1);
  auto rec = rollout(c, stay, 8, rng);
  CHECK_FALSE(rec.goal_time.has_value());
  CHECK(rec.cost() == 8);
  CHECK(rec.steps.size() == 8);
}

TEST_CASE("rollout is deterministic under a fixed seed") {
  auto m = testutil::broken_pair();
  PolicyFn wait = [](const Belief&) { return std::pair<int, int>{0, 0}; };
  Rng r1(99), r2(99);
  auto a = rollout(m, wait, 10, r1, {.record_beliefs = true});
  auto b = rollout(m, wait, 10, r2, {.record_beliefs = true});
  CHECK(a.leaf_key == b.leaf_key);
  CHECK(a.cost() == b.cost());
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i)
    CHECK(a.steps[i].belief_before == b.steps[i].belief_before);
}

TEST_CASE("rollout rejects invalid actions and horizons") {
  auto c = testutil::corridor();
  PolicyFn broken = [](const Belief&) { return std::pair<int, int>{0, 42}; };
  Rng rng(1);
  CHECK_THROWS_AS(rollout(c, broken, 5, rng), Error);
  PolicyFn go = [](const Belief&) { return std::pair<int, int>{0, 0}; };
  CHECK_THROWS_AS(rollout(c, go, 0, rng), Error);
}

TEST_CASE("validate rejects broken models") {
  auto c = testutil::corridor();
  c.trans[0][0] = {{1, 0.5}};  // row no longer sums to 1
  CHECK_THROWS_AS(c.validate(), ModelError);

  auto c2 = testutil::corridor();
  c2.trans[0][3] = {{2, 1.0}};  // goal must be a sink
  CHECK_THROWS_AS(c2.validate(), ModelError);
}

}  // TEST_SUITE
