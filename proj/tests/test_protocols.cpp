#include <doctest.h>

#include <random>

#include "ordmatch/analysis.hpp"
#include "ordmatch/checkers.hpp"
#include "ordmatch/errors.hpp"
#include "ordmatch/instances.hpp"
#include "ordmatch/mechanisms.hpp"
#include "oracles.hpp"

using namespace ordmatch;

namespace {

Rational q(long a, long b) { return Rational(Integer(a), Integer(b)); }

const Protocol kAll[] = {Protocol::pp, Protocol::naive_pp, Protocol::online_ps_var, Protocol::online_ps};

oracle::Dist as_oracle(const OutcomeDistribution& d) {
  oracle::Dist out;
  for (const auto& [a, w] : d.support()) out[a.items()] = w;
  return out;
}

oracle::Dist reference(Protocol pr, const PreferenceProfile& p) {
  switch (pr) {
    case Protocol::pp: return oracle::honest_pp(p, false);
    case Protocol::naive_pp: return oracle::honest_pp(p, true);
    case Protocol::online_ps_var: return oracle::honest_consumption(p, true);
    case Protocol::online_ps: return oracle::honest_consumption(p, false);
  }
  return {};
}

}  // namespace

TEST_CASE("honest runs match the reference simulations") {
  std::mt19937_64 rng(99);
  for (int n = 1; n <= 5; ++n) {
    const int trials = n <= 4 ? 10 : 4;
    for (int k = 0; k < trials; ++k) {
      const auto p = k % 2 ? oracle::random_profile(rng, n) : oracle::clustered_profile(rng, n);
      for (auto pr : kAll) {
        Budget b;
        const auto d = exact_distribution(pr, p, AdversaryStrategy::honest(), b);
        CHECK_NOTHROW(d.validate());
        CHECK(as_oracle(d) == reference(pr, p));
        CHECK(expected_matrix(pr, p, AdversaryStrategy::honest(), b) == induced_matrix(d));
        for (int i = 0; i < n; ++i) {
          CHECK(expected_row(pr, p, AdversaryStrategy::honest(), i, b) == d.row(i));
        }
      }
    }
  }
}

TEST_CASE("four-player profile: every protocol gives the same matrix") {
  const auto p = instances::four_player();
  const BistochasticMatrix expect({{q(1, 2), 0, q(3, 8), q(1, 8)},
                                   {q(1, 2), 0, q(1, 8), q(3, 8)},
                                   {0, q(1, 2), q(3, 8), q(1, 8)},
                                   {0, q(1, 2), q(1, 8), q(3, 8)}});
  for (auto pr : kAll) {
    Budget b;
    const auto d = exact_distribution(pr, p, AdversaryStrategy::honest(), b);
    CHECK(induced_matrix(d) == expect);
    CHECK(d.support().size() == 6);
    CHECK(d.support().at(Assignment({0, 3, 2, 1})) == q(1, 4));
  }
  CHECK(rp_matrix(p) == expect);
  CHECK(expect != instances::four_player_ps());
}

TEST_CASE("competition classes and a PP step on the nine-player profile") {
  const auto p = instances::nine_player();
  const auto start = PPState::initial(9);
  const auto c1 = competition_classes(start, p, false);
  REQUIRE(c1.size() == 2);
  CHECK(c1.at(0) == std::vector<PlayerId>{0, 1, 2, 3, 4});
  CHECK(c1.at(4) == std::vector<PlayerId>{5, 6, 7, 8});

  PPState s = start;
  s.round = 2;
  s.survivors = PlayerSet::full(9).minus(PlayerSet{}.with(0).with(5));
  s.remaining = ItemSet::full(9).minus(ItemSet{}.with(0).with(4));
  s.item_of[0] = 0;
  s.item_of[5] = 4;
  for (bool naive : {false, true}) {
    const auto c2 = competition_classes(s, p, naive);
    REQUIRE(c2.size() == 2);
    CHECK(c2.at(1) == std::vector<PlayerId>{1, 2, 3, 4, 6});
    CHECK(c2.at(2) == std::vector<PlayerId>{7, 8});
  }

  TournamentOutcome m2{6, PlayerSet{}.with(1).with(2).with(3).with(4), PlayerSet{}, Rational(1)};
  TournamentOutcome m3{8, PlayerSet::single(7), PlayerSet{}, Rational(1)};
  const auto next = pp_step(s, p, {{1, m2}, {2, m3}});
  CHECK(next.round == 3);
  CHECK(next.item_of[6] == 1);
  CHECK(next.item_of[8] == 2);
  CHECK(next.survivors == PlayerSet{}.with(1).with(2).with(3).with(4).with(7));
  CHECK(next.remaining == ItemSet{}.with(3).with(5).with(6).with(7).with(8));

  TournamentOutcome stray{0, PlayerSet{}, PlayerSet{}, Rational(1)};
  CHECK_THROWS_AS(pp_step(s, p, {{5, stray}}), ConsistencyError);
  // round three: PP drops players whose third choice is gone, the naive variant regroups
  const auto pp3 = competition_classes(next, p, false);
  const auto naive3 = competition_classes(next, p, true);
  CHECK(pp3.size() <= naive3.size() + 1);
  for (const auto& [item, members] : naive3) CHECK(next.remaining.contains(item));
}

TEST_CASE("leftover gives unassigned players their favourite free item") {
  const auto p = instances::four_player();
  std::vector<ItemId> items{0, -1, -1, 1};
  EventSink log;
  apply_leftover(items, p, Rational(5), &log);
  CHECK(items == std::vector<ItemId>{0, 3, 2, 1});
  REQUIRE(log.size() == 2);
  CHECK(log[0].kind == EventKind::leftover);
  CHECK(log[0].player == 1);
}

TEST_CASE("sampling is deterministic and replays from its log") {
  const auto p = instances::nine_player();
  for (auto pr : kAll) {
    for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
      const auto a = sample_protocol(pr, p, AdversaryStrategy::honest(), seed);
      const auto b = sample_protocol(pr, p, AdversaryStrategy::honest(), seed);
      CHECK(a.assignment == b.assignment);
      CHECK(a.log.size() == b.log.size());
      CHECK(replay_assignment(a.log, 9) == a.assignment);
    }
  }
  CHECK(run_pp(p, 3, AdversaryStrategy::honest()).assignment ==
        sample_protocol(Protocol::pp, p, AdversaryStrategy::honest(), 3).assignment);
}

TEST_CASE("sampled assignments lie in the exact support") {
  const auto p = instances::four_player();
  const auto attack = scripted_failstop(PlayerSet::single(2), {DecisionPattern{}});
  for (auto pr : kAll) {
    Budget b;
    const auto d = exact_distribution(pr, p, attack, b);
    std::map<Assignment, int> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto run = sample_protocol(pr, p, attack, seed);
      CHECK(d.support().count(run.assignment) == 1);
      ++seen[run.assignment];
    }
    CHECK(seen.size() == d.support().size());
  }
}

TEST_CASE("law monitor arithmetic") {
  LawMonitor m;
  CHECK_NOTHROW(m.check_join(0, Rational(0), Rational(1)));
  CHECK_NOTHROW(m.check_join(0, q(1, 2), Rational(2)));
  CHECK_THROWS_AS(m.check_join(0, q(1, 2), Rational(1)), LawViolation);
  CHECK_THROWS_AS(m.check_join(0, Rational(1), Rational(1)), LawViolation);
  CHECK_NOTHROW(m.check_survivor_rates(q(1, 3), {q(3, 2), q(3, 2)}));
  CHECK_THROWS_AS(m.check_survivor_rates(q(1, 3), {Rational(1), q(3, 2)}), LawViolation);
  CHECK(m.join_checks() == 4);
  CHECK(m.survivor_checks() == 2);
}

TEST_CASE("consumption with redistributed rates keeps the join and survivor laws") {
  std::mt19937_64 rng(55);
  for (int n = 2; n <= 4; ++n) {
    for (int k = 0; k < 8; ++k) {
      const auto p = k % 2 ? oracle::random_profile(rng, n) : oracle::clustered_profile(rng, n);
      LawMonitor monitor;
      MachineOptions opts;
      opts.monitor = &monitor;
      opts.expand_duels = true;
      const ConsumptionMachine machine(p, AdversaryStrategy::honest(), true, opts);
      Budget b;
      Solver<ConsumptionMachine, DistributionTraits> solver(machine, DistributionTraits{}, nullptr, b);
      CHECK_NOTHROW(solver.solve());
      CHECK(monitor.join_checks() >= static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("losers' rates: redistributed under the variant, fixed otherwise") {
  const PreferenceProfile p({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  auto rate_updates = [&](Protocol pr) {
    std::vector<Rational> out;
    for (const auto& e : sample_protocol(pr, p, AdversaryStrategy::honest(), 4).log) {
      if (e.kind == EventKind::rate_update) out.push_back(e.value);
    }
    return out;
  };
  const auto var = rate_updates(Protocol::online_ps_var);
  REQUIRE(var.size() >= 2);
  CHECK(var[0] == q(3, 2));
  CHECK(var[1] == q(3, 2));
  CHECK(rate_updates(Protocol::online_ps).empty());
}

TEST_CASE("PP outcomes are stable and treat equals equally") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 5; ++n) {
    for (int k = 0; k < 6; ++k) {
      const auto p = oracle::clustered_profile(rng, n);
      Budget b;
      const auto d = exact_distribution(Protocol::pp, p, AdversaryStrategy::honest(), b);
      for (const auto& [a, w] : d.support()) CHECK(is_stable(a, p));
      CHECK(check_equal_treatment(induced_matrix(d), p, TreatmentStrength::strong).holds);
    }
  }
}

TEST_CASE("interrupted consumption stops the clock") {
  const auto p = instances::four_player();
  MachineOptions opts;
  opts.interrupt_at = q(1, 4);
  const ConsumptionMachine machine(p, AdversaryStrategy::honest(), true, opts);
  auto s = machine.initial();
  machine.settle(s, nullptr);
  CHECK(machine.terminal(s));
  CHECK(s.interrupted);
  CHECK(s.time == q(1, 4));
  for (int i = 0; i < 4; ++i) CHECK(machine.claimed(s, i) == q(1, 4));
}

TEST_CASE("PP with scripted aborts matches the reference rounds") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const auto p = trial % 2 ? oracle::random_profile(rng, n) : oracle::clustered_profile(rng, n);
    std::vector<bool> corrupted(static_cast<std::size_t>(n), false);
    PlayerSet cset;
    for (int i = 1; i < n; ++i) {
      if (rng() % 2) {
        corrupted[static_cast<std::size_t>(i)] = true;
        cset.insert(i);
      }
    }
    std::map<std::tuple<int, int, int, int>, bool> table;
    std::vector<DecisionPattern> schedule;
    for (int r = 1; r <= n; ++r) {
      for (int a : cset.members()) {
        for (int v = 0; v < n; ++v) {
          for (int d = 0; d < n - 1; ++d) {
            if (rng() % 3 != 0) continue;
            table[{r, a, v, d}] = true;
            DecisionPattern pat;
            pat.stamp = Rational(r);
            pat.actor = a;
            pat.vs = v;
            pat.duel_index = d;
            pat.kind = DecisionKind::duel_abort;
            schedule.push_back(pat);
          }
        }
      }
    }
    const auto rule = [&](int r, int a, int v, int d) { return table.count({r, a, v, d}) > 0; };
    for (bool naive : {false, true}) {
      Budget b;
      const auto d = exact_distribution(naive ? Protocol::naive_pp : Protocol::pp, p,
                                        scripted_failstop(cset, schedule), b);
      CHECK(as_oracle(d) == oracle::pp_with_aborts(p, naive, corrupted, rule));
    }
  }
}
