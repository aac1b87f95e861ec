#include <doctest.h>

#include <random>

#include "ordmatch/analysis.hpp"
#include "ordmatch/errors.hpp"
#include "ordmatch/instances.hpp"
#include "ordmatch/mechanisms.hpp"
#include "oracles.hpp"

using namespace ordmatch;

namespace {

Rational q(long a, long b) { return Rational(Integer(a), Integer(b)); }

ItemVector v(std::initializer_list<Rational> xs) { return ItemVector(xs); }

}  // namespace

TEST_CASE("maximin: the honest strategy changes nothing") {
  const auto p = instances::four_player();
  Budget b;
  for (auto pr : {Protocol::pp, Protocol::online_ps_var}) {
    const auto verdict = check_maximin(pr, p, 0, AdversaryStrategy::honest(), b);
    CHECK(verdict.secure);
    CHECK(verdict.honest_row == verdict.attacked_row);
    CHECK_FALSE(verdict.violation);
  }
}

TEST_CASE("maximin: nine-player example under PP") {
  const auto p = instances::nine_player();
  Budget b;
  const auto scripted = check_maximin(Protocol::pp, p, 0, instances::nine_player_attack(), b);
  CHECK(scripted.honest_row == v({q(1, 5), q(11, 75), 0, q(497, 1800), 0, 0, 0, 0, q(679, 1800)}));
  CHECK(scripted.attacked_row == v({q(1, 5), q(4, 25), q(2, 5), q(3, 25), 0, 0, q(3, 25), 0, 0}));
  CHECK(scripted.secure);

  const AdversaryStrategy shape(AdversaryModel::fail_stop, PlayerSet{}.with(7).with(8));
  const auto all = check_maximin_all(Protocol::pp, p, 0, shape, b);
  CHECK(all.secure);
  const Rational r = q(1121, 1800);
  CHECK(all.attacked_prefix == v({q(1, 5), q(26, 75), q(26, 75), r, r, r, r, r, 1}));
}

TEST_CASE("maximin: nine-player example under the naive variant") {
  const auto p = instances::nine_player();
  Budget b;
  const auto scripted = check_maximin(Protocol::naive_pp, p, 0, instances::nine_player_attack(), b);
  CHECK_FALSE(scripted.secure);
  REQUIRE(scripted.violation);
  CHECK(scripted.attacked_prefix[3] == q(22, 25));

  const AdversaryStrategy shape(AdversaryModel::fail_stop, PlayerSet{}.with(7).with(8));
  const auto all = check_maximin_all(Protocol::naive_pp, p, 0, shape, b);
  CHECK_FALSE(all.secure);
  CHECK(all.attacked_prefix ==
        v({q(1, 5), q(26, 75), q(26, 75), q(22, 25), q(22, 25), q(22, 25), q(127, 135), 1, 1}));
  CHECK(all.violation->p_sum < all.violation->q_sum);
}

TEST_CASE("maximin: worst case lower-bounds every scripted attack") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 6; ++k) {
    const auto p = oracle::clustered_profile(rng, 4);
    const PlayerSet corrupted = PlayerSet{}.with(1).with(3);
    const AdversaryStrategy shape(AdversaryModel::fail_stop, corrupted);
    for (auto pr : {Protocol::pp, Protocol::online_ps_var}) {
      Budget b;
      const auto worst = worst_case_prefixes(pr, p, shape, 0, p.order(0), b);
      for (int s = 0; s < 8; ++s) {
        std::vector<DecisionPattern> schedule;
        if (s & 1) {
          DecisionPattern d;
          d.actor = 1;
          schedule.push_back(d);
        }
        if (s & 2) {
          DecisionPattern d;
          d.actor = 3;
          d.stamp = Rational(1);
          schedule.push_back(d);
        }
        if (s & 4) {
          DecisionPattern d;
          d.kind = DecisionKind::withdraw;
          d.actor = 3;
          schedule.push_back(d);
        }
        const auto row = expected_row(pr, p, scripted_failstop(corrupted, schedule), 0, b);
        const auto prefix = prefix_sums(row, p.order(0));
        for (std::size_t l = 0; l < prefix.size(); ++l) CHECK(worst[l] <= prefix[l]);
      }
    }
  }
}

TEST_CASE("uniform worst case on tiny instances") {
  Budget b;
  const std::vector<Order> identity{{0, 1, 2}};
  CHECK(uniform_worst_prefixes(Protocol::online_ps_var, 3, 0, {0, 1, 2}, b, identity) ==
        v({q(1, 3), q(2, 3), 1}));
  CHECK(uniform_worst_prefixes(Protocol::pp, 3, 0, {0, 1, 2}, b, identity) == v({q(1, 3), q(2, 3), 1}));
  CHECK(uniform_worst_prefixes(Protocol::online_ps_var, 2, 0, {0, 1}, b) == v({q(1, 2), 1}));
  CHECK(worst_case_prefix_prob(Protocol::online_ps_var, 2, 0, {0, 1}, 1, b) == q(1, 2));
  CHECK(worst_case_prefix_prob(Protocol::pp, 2, 1, {1, 0}, 2, b) == Rational(1));
}

TEST_CASE("truthfulness: probabilistic serial on the misreport profile") {
  const auto p = instances::misreport();
  const auto ps = check_truthfulness_gain(ps_rows(), p, 1, instances::misreport_lie());
  CHECK(ps.truthful_row == v({q(1, 2), 0, q(1, 4), q(1, 4)}));
  CHECK(ps.lying_row == v({q(1, 3), q(1, 3), q(1, 12), q(1, 4)}));
  CHECK_FALSE(ps.strict_gain);
  CHECK_FALSE(ps.truth_dominates);
  CHECK(ps.first_gain_prefix == 2);
}

TEST_CASE("truthfulness: online consumption protocols on the misreport profile") {
  const auto p = instances::misreport();
  Budget b;
  const auto var = check_truthfulness_gain(protocol_rows(Protocol::online_ps_var, b), p, 1, instances::misreport_lie());
  CHECK(var.truthful_prefix[1] == q(1, 2));
  CHECK(var.lying_prefix[1] == q(3, 5));
  CHECK(var.first_gain_prefix == 2);
  const auto fixed = check_truthfulness_gain(protocol_rows(Protocol::online_ps, b), p, 1, instances::misreport_lie());
  CHECK(fixed.lying_prefix[1] == q(5, 9));
  // random priority is strategy-proof
  const auto rp = check_truthfulness_gain(rp_rows(), p, 1, instances::misreport_lie());
  CHECK(rp.truth_dominates);
  CHECK(rp.first_gain_prefix == 0);
}

TEST_CASE("claimed ownership grows linearly for an honest starter") {
  const auto p = instances::four_player();
  Budget b;
  for (auto t : {Rational(0), q(1, 4), q(1, 2), q(3, 4), Rational(1)}) {
    CHECK(claimed_ownership_prob(Protocol::online_ps_var, p, AdversaryStrategy::honest(), 0, t, b) == t);
  }
  const auto times = event_times(Protocol::online_ps_var, p, AdversaryStrategy::honest(), b);
  CHECK(times.count(Rational(0)) == 1);
  CHECK(times.count(Rational(1)) == 1);
  CHECK(times.count(q(1, 2)) == 1);
}

TEST_CASE("ownership law on random small profiles") {
  std::mt19937_64 rng(77);
  for (int n = 2; n <= 4; ++n) {
    for (int k = 0; k < 5; ++k) {
      const auto p = k % 2 ? oracle::random_profile(rng, n) : oracle::clustered_profile(rng, n);
      Budget b;
      const auto check = check_ownership_law(p, 0, b);
      CHECK(check.holds);
      CHECK(check.checked > 0);
    }
  }
}

TEST_CASE("expected row reports explored states") {
  Budget b;
  std::size_t states = 0;
  expected_row(Protocol::pp, instances::nine_player(), AdversaryStrategy::honest(), 0, b, &states);
  CHECK(states > 0);
}
