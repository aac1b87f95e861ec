#include <doctest.h>

#include <random>

#include "ordmatch/analysis.hpp"
#include "ordmatch/errors.hpp"
#include "ordmatch/instances.hpp"
#include "oracles.hpp"

using namespace ordmatch;

namespace {

const Protocol kAll[] = {Protocol::pp, Protocol::naive_pp, Protocol::online_ps_var, Protocol::online_ps};

DecisionPoint duel_point(int actor, int first, int second, int duel, long stamp, int item) {
  DecisionPoint p;
  p.stamp = Rational(stamp);
  p.item = item;
  p.duel_index = duel;
  p.first = first;
  p.second = second;
  p.actor = actor;
  return p;
}

}  // namespace

TEST_CASE("patterns match on the fields they set") {
  const auto p = duel_point(2, 0, 2, 1, 1, 0);
  CHECK(DecisionPattern{}.matches(p));
  DecisionPattern a;
  a.actor = 2;
  a.vs = 0;
  a.stamp = Rational(1);
  a.item = 0;
  a.duel_index = 1;
  a.kind = DecisionKind::duel_abort;
  CHECK(a.matches(p));
  auto b = a;
  b.vs = 1;
  CHECK_FALSE(b.matches(p));
  b = a;
  b.stamp = Rational(2);
  CHECK_FALSE(b.matches(p));
  b = a;
  b.kind = DecisionKind::withdraw;
  CHECK_FALSE(b.matches(p));
  b = a;
  b.would_be_winner = 0;
  CHECK_FALSE(b.matches(p));

  DecisionPoint w;
  w.actor = 2;
  w.kind = DecisionKind::withdraw;
  DecisionPattern by_vs;
  by_vs.vs = 0;
  CHECK_FALSE(by_vs.matches(w));
}

TEST_CASE("available actions per model") {
  const auto p = duel_point(1, 0, 1, 0, 1, 0);
  CHECK(available_actions(AdversaryModel::honest, p).empty());
  CHECK(available_actions(AdversaryModel::fail_stop, p) == std::vector<Action>{Action::proceed, Action::abort});
  auto c = p;
  c.kind = DecisionKind::choose_winner;
  CHECK(available_actions(AdversaryModel::fail_stop, c).empty());
  CHECK(available_actions(AdversaryModel::byzantine, c) ==
        std::vector<Action>{Action::first_wins, Action::second_wins});
}

TEST_CASE("names round trip") {
  for (auto m : {AdversaryModel::honest, AdversaryModel::fail_stop, AdversaryModel::byzantine}) {
    CHECK(parse_model(to_string(m)) == m);
  }
  for (auto a : {Action::proceed, Action::abort, Action::first_wins, Action::second_wins}) {
    CHECK(parse_action(to_string(a)) == a);
  }
  for (auto k : {DecisionKind::withdraw, DecisionKind::duel_abort, DecisionKind::choose_winner}) {
    CHECK(parse_kind(to_string(k)) == k);
  }
  for (auto t : {DecisionTiming::before_open, DecisionTiming::after_reveal}) CHECK(parse_timing(to_string(t)) == t);
  for (auto pr : kAll) CHECK(parse_protocol(to_string(pr)) == pr);
  CHECK_THROWS_AS(parse_model("sneaky"), InvalidInput);
  CHECK_THROWS_AS(parse_protocol("ps"), InvalidInput);
}

TEST_CASE("strategy validation") {
  CHECK_NOTHROW(AdversaryStrategy::honest().validate(3));
  CHECK_THROWS_AS(AdversaryStrategy(AdversaryModel::fail_stop, PlayerSet::single(3)).validate(3), StrategyError);
  DecisionPattern honest_actor;
  honest_actor.actor = 0;
  CHECK_THROWS_AS(scripted_failstop(PlayerSet::single(1), {honest_actor}), StrategyError);
  {
    AdversaryStrategy s(AdversaryModel::fail_stop, PlayerSet::single(1));
    DecisionPattern far;
    far.vs = 7;
    s.add_pattern(far);
    CHECK_THROWS_AS(s.validate(3), StrategyError);
  }
  {
    AdversaryStrategy s(AdversaryModel::fail_stop, PlayerSet::single(1));
    DecisionPattern choose;
    choose.action = Action::first_wins;
    s.add_pattern(choose);
    CHECK_THROWS_AS(s.validate(3), StrategyError);
  }
  {
    AdversaryStrategy s(AdversaryModel::fail_stop, PlayerSet::single(1));
    s.declare(1, {0, 1, 2});
    CHECK_THROWS_AS(s.validate(3), StrategyError);
  }
  {
    AdversaryStrategy s(AdversaryModel::byzantine, PlayerSet::single(1));
    s.declare(0, {0, 1, 2});
    CHECK_THROWS_AS(s.validate(3), StrategyError);
    AdversaryStrategy t(AdversaryModel::byzantine, PlayerSet::single(1));
    t.declare(1, {0, 0, 2});
    CHECK_THROWS_AS(t.validate(3), StrategyError);
  }
  {
    AdversaryStrategy s(AdversaryModel::fail_stop, PlayerSet::single(1));
    s.set_table({{duel_point(0, 0, 1, 0, 1, 0), Action::abort}});
    CHECK_THROWS_AS(s.validate(3), StrategyError);
  }
  {
    // a rule choosing an unavailable action is rejected when consulted
    AdversaryStrategy s(AdversaryModel::byzantine, PlayerSet::single(1));
    DecisionPattern choose;
    choose.action = Action::first_wins;
    s.add_pattern(choose);
    CHECK_THROWS_AS(s.decide(duel_point(1, 0, 1, 0, 1, 0)), StrategyError);
  }
}

TEST_CASE("declared profile applies only Byzantine misreports") {
  const auto truth = instances::misreport();
  AdversaryStrategy s(AdversaryModel::byzantine, PlayerSet::single(1));
  s.declare(1, instances::misreport_lie());
  const auto seen = s.declared_profile(truth);
  CHECK(seen.order(1) == instances::misreport_lie());
  CHECK(seen.order(0) == truth.order(0));
  Budget budget;
  for (auto pr : kAll) {
    CHECK(exact_distribution(pr, truth, s, budget) ==
          exact_distribution(pr, truth.with_order(1, instances::misreport_lie()), AdversaryStrategy::honest(), budget));
  }
}

TEST_CASE("empty schedules play honestly") {
  std::mt19937_64 rng(13);
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k < 6; ++k) {
      const auto p = oracle::random_profile(rng, n);
      PlayerSet corrupted(rng() & PlayerSet::full(n).bits());
      for (auto pr : kAll) {
        Budget b;
        const auto honest = exact_distribution(pr, p, AdversaryStrategy::honest(), b);
        CHECK(exact_distribution(pr, p, scripted_failstop(corrupted, {}), b) == honest);
        CHECK(exact_distribution(pr, p, scripted_failstop(corrupted, {}, DecisionTiming::after_reveal), b) ==
              honest);
        CHECK(exact_distribution(pr, p, AdversaryStrategy(AdversaryModel::byzantine, corrupted), b) == honest);
      }
    }
  }
}

TEST_CASE("strategy enumeration counts") {
  Budget budget;
  const auto p2 = PreferenceProfile({{0, 1}, {0, 1}});
  CHECK(enumerate_failstop_strategies(Protocol::pp, p2, PlayerSet{}, budget).count() == 1);
  const auto one = enumerate_failstop_strategies(Protocol::pp, p2, PlayerSet::single(1), budget);
  // withdraw, and the round-one duel against player 1
  CHECK(one.decision_points() == 2);
  CHECK(one.count() == 4);

  const auto p3 = PreferenceProfile({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  const auto e = enumerate_failstop_strategies(Protocol::pp, p3, PlayerSet{}.with(1).with(2), budget);
  // 2 withdrawals, 5 round-one points, 4 round-two points
  CHECK(e.decision_points() == 11);
  CHECK(e.count() == 2048);
  int withdraws = 0;
  int round1 = 0;
  int round2 = 0;
  for (const auto& pt : e.points()) {
    if (pt.kind == DecisionKind::withdraw) ++withdraws;
    if (pt.kind == DecisionKind::duel_abort && pt.stamp == Rational(1)) ++round1;
    if (pt.kind == DecisionKind::duel_abort && pt.stamp == Rational(2)) ++round2;
  }
  CHECK(withdraws == 2);
  CHECK(round1 == 5);
  CHECK(round2 == 4);
  CHECK_THROWS_AS(enumerate_failstop_strategies(Protocol::pp, p3, PlayerSet{}.with(1).with(2), budget, 10),
                  ResourceError);
  CHECK_THROWS_AS(e.at(e.count()), InvalidInput);
}

TEST_CASE("execution trees agree with the solver for every enumerated strategy") {
  const auto p3 = PreferenceProfile({{0, 1, 2}, {0, 1, 2}, {0, 2, 1}});
  for (auto pr : kAll) {
    Budget budget;
    const PlayerSet corrupted = PlayerSet{}.with(1).with(2);
    const auto e = enumerate_failstop_strategies(pr, p3, corrupted, budget);
    const auto tree = enumerate_protocol(pr, p3, AdversaryStrategy(AdversaryModel::fail_stop, corrupted), nullptr, budget);
    CHECK_NOTHROW(tree.validate());
    const auto worst =
        worst_case_prefixes(pr, p3, AdversaryStrategy(AdversaryModel::fail_stop, corrupted), 0, p3.order(0), budget);
    const std::uint64_t step = e.count() > 512 ? e.count() / 512 : 1;
    for (std::uint64_t k = 0; k < e.count(); k += step) {
      const auto s = e.at(k);
      const auto d = exact_distribution(pr, p3, s, budget);
      CHECK(tree.distribution(s) == d);
      // the backward-induction minimum lower-bounds every concrete strategy
      const auto prefix = prefix_sums(d.row(0), p3.order(0));
      for (std::size_t l = 0; l < prefix.size(); ++l) CHECK(worst[l] <= prefix[l]);
    }
  }
}

TEST_CASE("withdrawal and scripted attacks on the long examples") {
  const auto w = instances::fourteen_player_withdraw();
  CHECK(w.corrupted() == PlayerSet::single(3));
  const auto run = sample_protocol(Protocol::online_ps_var, instances::fourteen_player(), w, 5);
  bool eliminated = false;
  for (const auto& e : run.log) {
    if (e.kind == EventKind::elimination && e.player == 3) {
      eliminated = true;
      CHECK(e.stamp == Rational(0));
    }
  }
  CHECK(eliminated);

  const auto attack = instances::nine_player_attack();
  CHECK(attack.corrupted() == PlayerSet{}.with(7).with(8));
  const auto s = sample_protocol(Protocol::naive_pp, instances::nine_player(), attack, 2);
  for (const auto& e : s.log) {
    if (e.kind == EventKind::decision) {
      CHECK(e.stamp == Rational(1));
      CHECK(e.action == Action::abort);
    }
  }
}

TEST_CASE("budget exhaustion is reported") {
  Budget tiny(5);
  CHECK_THROWS_AS(exact_distribution(Protocol::pp, instances::nine_player(), AdversaryStrategy::honest(), tiny),
                  ResourceError);
  try {
    Budget again(5);
    expected_matrix(Protocol::online_ps_var, instances::nine_player(), AdversaryStrategy::honest(), again);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.count() > 5);
  }
}
