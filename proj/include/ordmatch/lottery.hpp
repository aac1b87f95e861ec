#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordmatch/adversary.hpp"
#include "ordmatch/events.hpp"
#include "ordmatch/index_set.hpp"
#include "ordmatch/rational.hpp"

namespace ordmatch {

using EventSink = std::vector<ProtocolEvent>;

struct DuelSpec {
  PlayerId first = 0;
  PlayerId second = 1;
  Integer k1 = 1;
  Integer k2 = 1;
};

struct DuelOutcome {
  PlayerId winner = -1;
  PlayerSet survivors;
  PlayerSet detected;
  Rational probability;
};

struct TournamentSpec {
  std::vector<PlayerId> candidates;
  std::vector<Integer> weights;
};

struct TournamentOutcome {
  PlayerId winner = -1;
  PlayerSet survivors;
  PlayerSet detected;
  Rational probability;
};

/// Who may act inside a lottery and where it sits in the protocol.
struct LotteryContext {
  AdversaryModel model = AdversaryModel::honest;
  PlayerSet corrupted;
  DecisionTiming timing = DecisionTiming::before_open;
  Rational stamp;
  ItemId item = -1;

  static LotteryContext of(const AdversaryStrategy& s, Rational stamp, ItemId item) {
    return {s.model(), s.corrupted(), s.timing(), std::move(stamp), item};
  }
  bool can_act(PlayerId i) const { return model != AdversaryModel::honest && corrupted.contains(i); }
};

/// One augmented tournament as a resumable state machine. Candidates meet in
/// a left-deep bracket in the given order: the current champion (carrying the
/// total weight of everyone before) duels the next candidate. In a duel with
/// weights (a, b) each side draws a uniform element of Z_{a+b}; the champion
/// wins iff the sum lands in [0, a).
///
/// Between calls the run is either done or waiting on exactly one chance or
/// decision node. With no participant able to act and `expand_duels` off, the
/// whole tournament collapses into a single chance node over the winner.
class TournamentRun {
 public:
  enum class Waiting { none, chance, decision };

  TournamentRun(TournamentSpec spec, const LotteryContext& ctx, bool expand_duels = false);

  bool done() const { return waiting_ == Waiting::none; }
  Waiting waiting() const { return waiting_; }

  /// Branch probabilities of the pending chance node. In collapsed mode one
  /// entry per candidate; otherwise {champion wins, newcomer wins}.
  std::vector<Rational> chance_probs() const;
  void apply_chance(const LotteryContext& ctx, int branch, EventSink* sink);

  DecisionPoint decision_point(const LotteryContext& ctx) const;
  void apply_decision(const LotteryContext& ctx, Action action, EventSink* sink);

  PlayerId winner() const { return champion_; }
  PlayerSet detected() const { return detected_; }
  PlayerSet survivors() const;
  const TournamentSpec& spec() const { return spec_; }
  int duel_index() const { return next_ - 1; }

  void append_key(std::string& out) const;

 private:
  enum class Await { none, reveal, ring, first, second, choose, direct };
  void advance(const LotteryContext& ctx, EventSink* sink);
  void finish_duel(PlayerId winner, PlayerId loser, bool loser_detected, bool winner_aborted,
                   const LotteryContext& ctx, EventSink* sink);
  PlayerId newcomer() const { return spec_.candidates[static_cast<std::size_t>(next_)]; }

  TournamentSpec spec_;
  std::size_t next_ = 1;
  PlayerId champion_ = -1;
  bool champion_aborted_ = false;
  Integer prefix_;
  PlayerSet detected_;
  bool first_abort_ = false;
  bool second_abort_ = false;
  bool first_decided_ = false;
  bool second_decided_ = false;
  int would_be_ = -1;  // 0 champion, 1 newcomer
  Await await_ = Await::none;
  Waiting waiting_ = Waiting::none;
};

/// All outcome branches of one duel under a deterministic strategy.
std::vector<DuelOutcome> enumerate_duel(const DuelSpec& spec, const AdversaryStrategy& adversary,
                                        const TranscriptPrefix& transcript);

/// All outcome branches of one tournament under a deterministic strategy;
/// identical outcomes are merged.
std::vector<TournamentOutcome> enumerate_tournament(const TournamentSpec& spec,
                                                    const AdversaryStrategy& adversary,
                                                    const TranscriptPrefix& transcript);

/// Exact honest marginal of candidate i, by walking every duel.
Rational honest_win_probability(const TournamentSpec& spec, PlayerId i);

/// Throws InvalidInput for empty, duplicated or zero-total specs.
void validate_tournament(const TournamentSpec& spec);

}  // namespace ordmatch
