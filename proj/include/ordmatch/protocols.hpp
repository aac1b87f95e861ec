#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordmatch/adversary.hpp"
#include "ordmatch/game.hpp"
#include "ordmatch/lottery.hpp"
#include "ordmatch/profile.hpp"

namespace ordmatch {

enum class Protocol { pp, naive_pp, online_ps_var, online_ps };

std::string to_string(Protocol p);
/// Accepts the CLI names: pp, naivepp, opsvar, ops.
Protocol parse_protocol(const std::string& s);

/// Round-based state: round r (1-based), survivors S, remaining items R and
/// the partial assignment (-1 = unassigned).
struct PPState {
  int round = 1;
  PlayerSet survivors;
  ItemSet remaining;
  std::vector<ItemId> item_of;

  static PPState initial(int n);
};

/// Competition classes of the round, keyed by contested item. PP groups the
/// survivors by their r-th favourite (dropping those whose r-th favourite is
/// gone); the naive variant groups them by favourite remaining item.
std::map<ItemId, std::vector<PlayerId>> competition_classes(const PPState& state,
                                                            const PreferenceProfile& profile,
                                                            bool naive);

/// One round given the lottery outcomes of every class with two or more
/// members (singletons may be omitted). Classes are applied in ascending item
/// order. Throws ConsistencyError for outcomes that match no class.
PPState pp_step(const PPState& state, const PreferenceProfile& profile,
                const std::map<ItemId, TournamentOutcome>& outcomes, bool naive = false);

/// Unassigned players, ascending, each take their favourite unassigned item.
void apply_leftover(std::vector<ItemId>& item_of, const PreferenceProfile& profile,
                    const Rational& stamp, EventSink* sink);

/// Live checks of the consumption laws. Counts every check; throws
/// LawViolation on the first failure.
class LawMonitor {
 public:
  /// A player starting an item at time t must have t < 1 and rate 1/(1-t).
  void check_join(PlayerId i, const Rational& t, const Rational& rate);
  /// After a tournament with several candidates: t < 1, survivors share one rate.
  void check_survivor_rates(const Rational& t, const std::vector<Rational>& rates);

  std::size_t join_checks() const { return join_checks_; }
  std::size_t survivor_checks() const { return survivor_checks_; }

 private:
  std::size_t join_checks_ = 0;
  std::size_t survivor_checks_ = 0;
};

struct MachineOptions {
  /// When set: the run stops once this player holds an item, and state keys
  /// forget which items the other assigned players hold.
  PlayerId focus = -1;
  /// Walk every duel even when no participant can deviate.
  bool expand_duels = false;
  /// Consumption protocols only: stop the clock at this time.
  std::optional<Rational> interrupt_at;
  LawMonitor* monitor = nullptr;
};

/// Preference Priority and its naive variant as a resumable machine.
class PPMachine {
 public:
  struct State {
    PPState core;
    PlayerSet pending;
    bool round_open = false;
    int cursor = 0;
    bool finished = false;
    std::optional<TournamentRun> tour;
    ItemId tour_item = -1;
  };

  PPMachine(const PreferenceProfile& truth, const AdversaryStrategy& strategy, bool naive,
            MachineOptions options = {});

  State initial() const;
  void settle(State& s, EventSink* sink) const;
  bool terminal(const State& s) const;
  TournamentRun::Waiting waiting(const State& s) const;
  std::vector<Rational> chance_probs(const State& s) const;
  void apply_chance(State& s, int branch, EventSink* sink) const;
  DecisionPoint decision_point(const State& s) const;
  void apply_decision(State& s, Action a, EventSink* sink) const;
  void key(const State& s, std::string& out) const;
  AdversaryModel model() const { return model_; }
  ItemId item_of(const State& s, PlayerId i) const;
  Assignment assignment(const State& s) const;
  const PreferenceProfile& profile() const { return profile_; }

 private:
  ItemId class_item(const State& s, PlayerId i) const;
  LotteryContext context(const State& s) const;
  void finish_tournament(State& s, EventSink* sink) const;

  PreferenceProfile profile_;
  bool naive_;
  MachineOptions options_;
  AdversaryModel model_;
  PlayerSet corrupted_;
  DecisionTiming timing_;
  std::vector<PlayerId> withdrawers_;
};

/// OnlinePSVar (with rate redistribution) and OnlinePS (fixed rates).
class ConsumptionMachine {
 public:
  enum class Phase : std::uint8_t { idle, eating, assigned, eliminated };
  struct Eater {
    Phase phase = Phase::idle;
    ItemId item = -1;
    Rational rate{1};
    Rational consumed;
  };
  struct State {
    Rational time;
    std::vector<Eater> players;
    std::vector<Rational> remaining;
    ItemSet exhausted;
    int cursor = 0;
    bool finished = false;
    bool interrupted = false;
    std::optional<TournamentRun> tour;
    ItemId tour_item = -1;
  };

  ConsumptionMachine(const PreferenceProfile& truth, const AdversaryStrategy& strategy,
                     bool varying_rates, MachineOptions options = {});

  State initial() const;
  void settle(State& s, EventSink* sink) const;
  bool terminal(const State& s) const;
  TournamentRun::Waiting waiting(const State& s) const;
  std::vector<Rational> chance_probs(const State& s) const;
  void apply_chance(State& s, int branch, EventSink* sink) const;
  DecisionPoint decision_point(const State& s) const;
  void apply_decision(State& s, Action a, EventSink* sink) const;
  void key(const State& s, std::string& out) const;
  AdversaryModel model() const { return model_; }
  ItemId item_of(const State& s, PlayerId i) const;
  Assignment assignment(const State& s) const;
  /// 1 once assigned, else the fraction of its current item consumed so far.
  Rational claimed(const State& s, PlayerId i) const;
  const PreferenceProfile& profile() const { return profile_; }

 private:
  LotteryContext context(const State& s) const;
  void start_tournament(State& s, ItemId j, EventSink* sink) const;
  void finish_tournament(State& s, EventSink* sink) const;
  void leftover(State& s, EventSink* sink) const;

  PreferenceProfile profile_;
  bool var_;
  MachineOptions options_;
  AdversaryModel model_;
  PlayerSet corrupted_;
  DecisionTiming timing_;
  std::vector<PlayerId> withdrawers_;
};

/// Calls `f` with the machine for `protocol`.
template <class F>
decltype(auto) with_machine(Protocol protocol, const PreferenceProfile& truth,
                            const AdversaryStrategy& strategy, const MachineOptions& options, F&& f) {
  switch (protocol) {
    case Protocol::pp:
    case Protocol::naive_pp:
      return f(PPMachine(truth, strategy, protocol == Protocol::naive_pp, options));
    case Protocol::online_ps_var:
    case Protocol::online_ps:
    default:
      break;
  }
  return f(ConsumptionMachine(truth, strategy, protocol == Protocol::online_ps_var, options));
}

/// One sampled run under a fixed seed; identical seeds replay identically.
SampleRun sample_protocol(Protocol protocol, const PreferenceProfile& profile,
                          const AdversaryStrategy& adversary, std::uint64_t seed);

/// Full chance/adversary tree. With `adversary` set its rule resolves the
/// decision nodes; otherwise every available action is expanded under
/// `shape`'s model and corrupted set.
ExecutionTree enumerate_protocol(Protocol protocol, const PreferenceProfile& profile,
                                 const AdversaryStrategy& shape, const AdversaryStrategy* adversary,
                                 Budget& budget);

SampleRun run_pp(const PreferenceProfile& profile, std::uint64_t seed, const AdversaryStrategy& adversary);
SampleRun run_naive_pp(const PreferenceProfile& profile, std::uint64_t seed,
                       const AdversaryStrategy& adversary);
SampleRun run_online_ps_var(const PreferenceProfile& profile, std::uint64_t seed,
                            const AdversaryStrategy& adversary);
SampleRun run_online_ps(const PreferenceProfile& profile, std::uint64_t seed,
                        const AdversaryStrategy& adversary);

}  // namespace ordmatch
