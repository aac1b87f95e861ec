#include "ordmatch/lottery.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "ordmatch/errors.hpp"

namespace ordmatch {

void validate_tournament(const TournamentSpec& spec) {
  if (spec.candidates.empty()) throw InvalidInput("tournament without candidates");
  if (spec.candidates.size() != spec.weights.size()) {
    throw InvalidInput("tournament needs one weight per candidate");
  }
  PlayerSet seen;
  Integer total = 0;
  for (std::size_t k = 0; k < spec.candidates.size(); ++k) {
    const PlayerId c = spec.candidates[k];
    if (c < 0 || c >= kMaxPlayers) throw InvalidInput("candidate index out of range");
    if (seen.contains(c)) throw InvalidInput("candidate listed twice");
    seen.insert(c);
    if (sgn(spec.weights[k]) < 0) throw InvalidInput("negative tournament weight");
    total += spec.weights[k];
  }
  if (total == 0) throw InvalidInput("tournament weights sum to zero");
}

TournamentRun::TournamentRun(TournamentSpec spec, const LotteryContext& ctx, bool expand_duels)
    : spec_(std::move(spec)) {
  validate_tournament(spec_);
  champion_ = spec_.candidates.front();
  prefix_ = spec_.weights.front();
  if (spec_.candidates.size() == 1) return;
  const bool anyone_acts = std::any_of(spec_.candidates.begin(), spec_.candidates.end(),
                                       [&](PlayerId c) { return ctx.can_act(c); });
  if (!expand_duels && !anyone_acts) {
    await_ = Await::direct;
    waiting_ = Waiting::chance;
    return;
  }
  advance(ctx, nullptr);
}

PlayerSet TournamentRun::survivors() const {
  PlayerSet s;
  for (PlayerId c : spec_.candidates) s.insert(c);
  return s.without(champion_).minus(detected_);
}

std::vector<Rational> TournamentRun::chance_probs() const {
  if (await_ == Await::direct) {
    Integer total = 0;
    for (const auto& w : spec_.weights) total += w;
    std::vector<Rational> out;
    for (const auto& w : spec_.weights) out.emplace_back(w, total);
    return out;
  }
  if (await_ != Await::reveal && await_ != Await::ring) {
    throw ConsistencyError("tournament is not waiting on a chance node");
  }
  const Integer& b = spec_.weights[next_];
  const Integer k = prefix_ + b;
  if (k == 0) return {Rational(1), Rational(0)};
  return {Rational(prefix_, k), Rational(b, k)};
}

void TournamentRun::apply_chance(const LotteryContext& ctx, int branch, EventSink* sink) {
  switch (await_) {
    case Await::direct: {
      if (branch < 0 || static_cast<std::size_t>(branch) >= spec_.candidates.size()) {
        throw ConsistencyError("chance branch out of range");
      }
      champion_ = spec_.candidates[static_cast<std::size_t>(branch)];
      next_ = spec_.candidates.size();
      await_ = Await::none;
      waiting_ = Waiting::none;
      return;
    }
    case Await::reveal:
      would_be_ = branch;
      advance(ctx, sink);
      return;
    case Await::ring: {
      const PlayerId c1 = champion_;
      const PlayerId c2 = newcomer();
      if (branch == 0) {
        finish_duel(c1, c2, false, false, ctx, sink);
      } else {
        finish_duel(c2, c1, false, false, ctx, sink);
      }
      return;
    }
    default:
      throw ConsistencyError("tournament is not waiting on a chance node");
  }
}

DecisionPoint TournamentRun::decision_point(const LotteryContext& ctx) const {
  DecisionPoint p;
  p.stamp = ctx.stamp;
  p.item = ctx.item;
  p.duel_index = static_cast<int>(next_) - 1;
  p.first = champion_;
  p.second = newcomer();
  if (would_be_ >= 0) p.would_be_winner = would_be_ == 0 ? p.first : p.second;
  switch (await_) {
    case Await::first:
      p.actor = p.first;
      p.kind = DecisionKind::duel_abort;
      break;
    case Await::second:
      p.actor = p.second;
      p.kind = DecisionKind::duel_abort;
      break;
    case Await::choose:
      p.actor = p.first;
      p.kind = DecisionKind::choose_winner;
      break;
    default:
      throw ConsistencyError("tournament is not waiting on a decision");
  }
  return p;
}

void TournamentRun::apply_decision(const LotteryContext& ctx, Action action, EventSink* sink) {
  const PlayerId c1 = champion_;
  const PlayerId c2 = newcomer();
  if (sink) {
    ProtocolEvent e;
    e.kind = EventKind::decision;
    e.stamp = ctx.stamp;
    e.item = ctx.item;
    e.player = await_ == Await::second ? c2 : c1;
    e.players = {c1, c2};
    e.action = action;
    sink->push_back(std::move(e));
  }
  switch (await_) {
    case Await::choose:
      if (action == Action::first_wins) {
        finish_duel(c1, c2, false, false, ctx, sink);
      } else if (action == Action::second_wins) {
        finish_duel(c2, c1, false, false, ctx, sink);
      } else if (action == Action::proceed) {
        first_decided_ = second_decided_ = true;
        advance(ctx, sink);
      } else {
        throw StrategyError("a winner choice cannot be an abort");
      }
      return;
    case Await::first:
    case Await::second: {
      if (action != Action::proceed && action != Action::abort) {
        throw StrategyError("duel participants may only abort or continue");
      }
      const bool abort = action == Action::abort;
      if (await_ == Await::first) {
        first_abort_ = abort;
        first_decided_ = true;
      } else {
        second_abort_ = abort;
        second_decided_ = true;
      }
      advance(ctx, sink);
      return;
    }
    default:
      throw ConsistencyError("tournament is not waiting on a decision");
  }
}

void TournamentRun::finish_duel(PlayerId winner, PlayerId loser, bool loser_detected,
                                bool winner_aborted, const LotteryContext& ctx, EventSink* sink) {
  if (sink) {
    ProtocolEvent e;
    e.kind = EventKind::duel;
    e.stamp = ctx.stamp;
    e.item = ctx.item;
    e.player = winner;
    e.players = {champion_, newcomer()};
    e.weights = {prefix_, spec_.weights[next_]};
    sink->push_back(std::move(e));
  }
  champion_ = winner;
  if (loser_detected) detected_.insert(loser);
  champion_aborted_ = winner_aborted;
  prefix_ += spec_.weights[next_];
  ++next_;
  first_abort_ = second_abort_ = false;
  first_decided_ = second_decided_ = false;
  would_be_ = -1;
  advance(ctx, sink);
}

void TournamentRun::advance(const LotteryContext& ctx, EventSink* sink) {
  if (next_ >= spec_.candidates.size()) {
    await_ = Await::none;
    waiting_ = Waiting::none;
    return;
  }
  const PlayerId c1 = champion_;
  const PlayerId c2 = newcomer();
  const bool act1 = ctx.can_act(c1) && !champion_aborted_;
  const bool act2 = ctx.can_act(c2);
  if (ctx.model == AdversaryModel::byzantine && act1 && act2 && !first_decided_) {
    await_ = Await::choose;
    waiting_ = Waiting::decision;
    return;
  }
  if (!first_decided_ && !act1) {
    first_abort_ = champion_aborted_;
    first_decided_ = true;
  }
  if (!second_decided_ && !act2) second_decided_ = true;
  if (ctx.timing == DecisionTiming::after_reveal && would_be_ < 0 &&
      (!first_decided_ || !second_decided_)) {
    await_ = Await::reveal;
    waiting_ = Waiting::chance;
    return;
  }
  if (!first_decided_) {
    await_ = Await::first;
    waiting_ = Waiting::decision;
    return;
  }
  if (!second_decided_) {
    await_ = Await::second;
    waiting_ = Waiting::decision;
    return;
  }
  if (first_abort_ && second_abort_) {
    // both stopped: the lower index wins by default and keeps its aborted status
    const PlayerId w = std::min(c1, c2);
    finish_duel(w, w == c1 ? c2 : c1, true, true, ctx, sink);
  } else if (first_abort_) {
    finish_duel(c2, c1, true, false, ctx, sink);
  } else if (second_abort_) {
    finish_duel(c1, c2, true, false, ctx, sink);
  } else if (would_be_ >= 0) {
    if (would_be_ == 0) {
      finish_duel(c1, c2, false, false, ctx, sink);
    } else {
      finish_duel(c2, c1, false, false, ctx, sink);
    }
  } else {
    await_ = Await::ring;
    waiting_ = Waiting::chance;
  }
}

void TournamentRun::append_key(std::string& out) const {
  auto put = [&out](auto v) { out.append(reinterpret_cast<const char*>(&v), sizeof(v)); };
  put(static_cast<std::uint8_t>(spec_.candidates.size()));
  for (std::size_t k = 0; k < spec_.candidates.size(); ++k) {
    put(static_cast<std::int8_t>(spec_.candidates[k]));
    Rational(spec_.weights[k], 1).append_key(out);
  }
  put(static_cast<std::uint8_t>(next_));
  put(static_cast<std::int8_t>(champion_));
  put(detected_.bits());
  const std::uint8_t flags = static_cast<std::uint8_t>(
      (champion_aborted_ ? 1 : 0) | (first_abort_ ? 2 : 0) | (second_abort_ ? 4 : 0) |
      (first_decided_ ? 8 : 0) | (second_decided_ ? 16 : 0));
  put(flags);
  put(static_cast<std::int8_t>(would_be_));
  put(static_cast<std::uint8_t>(await_));
}

namespace {

struct OutcomeKey {
  PlayerId winner;
  std::uint64_t survivors;
  std::uint64_t detected;
  auto operator<=>(const OutcomeKey&) const = default;
};

void walk(const TournamentRun& run, const LotteryContext& ctx, const AdversaryStrategy& adversary,
          const Rational& prob, std::map<OutcomeKey, Rational>& acc) {
  if (run.done()) {
    acc[OutcomeKey{run.winner(), run.survivors().bits(), run.detected().bits()}] += prob;
    return;
  }
  if (run.waiting() == TournamentRun::Waiting::chance) {
    const auto probs = run.chance_probs();
    for (std::size_t b = 0; b < probs.size(); ++b) {
      if (probs[b].is_zero()) continue;
      TournamentRun next = run;
      next.apply_chance(ctx, static_cast<int>(b), nullptr);
      walk(next, ctx, adversary, prob * probs[b], acc);
    }
    return;
  }
  const DecisionPoint p = run.decision_point(ctx);
  TournamentRun next = run;
  next.apply_decision(ctx, adversary.decide(p).value_or(Action::proceed), nullptr);
  walk(next, ctx, adversary, prob, acc);
}

std::map<OutcomeKey, Rational> outcomes(const TournamentSpec& spec, const AdversaryStrategy& adversary,
                                        const TranscriptPrefix& transcript, bool expand) {
  adversary.validate(kMaxPlayers);
  const LotteryContext ctx = LotteryContext::of(adversary, transcript.stamp, transcript.item);
  TournamentRun run(spec, ctx, expand);
  std::map<OutcomeKey, Rational> acc;
  walk(run, ctx, adversary, Rational(1), acc);
  return acc;
}

}  // namespace

std::vector<DuelOutcome> enumerate_duel(const DuelSpec& spec, const AdversaryStrategy& adversary,
                                        const TranscriptPrefix& transcript) {
  if (spec.first == spec.second) throw InvalidInput("a duel needs two distinct players");
  TournamentSpec t{{spec.first, spec.second}, {spec.k1, spec.k2}};
  std::vector<DuelOutcome> out;
  for (const auto& [k, p] : outcomes(t, adversary, transcript, true)) {
    out.push_back(DuelOutcome{k.winner, PlayerSet(k.survivors), PlayerSet(k.detected), p});
  }
  return out;
}

std::vector<TournamentOutcome> enumerate_tournament(const TournamentSpec& spec,
                                                    const AdversaryStrategy& adversary,
                                                    const TranscriptPrefix& transcript) {
  std::vector<TournamentOutcome> out;
  for (const auto& [k, p] : outcomes(spec, adversary, transcript, true)) {
    out.push_back(TournamentOutcome{k.winner, PlayerSet(k.survivors), PlayerSet(k.detected), p});
  }
  return out;
}

Rational honest_win_probability(const TournamentSpec& spec, PlayerId i) {
  validate_tournament(spec);
  if (std::find(spec.candidates.begin(), spec.candidates.end(), i) == spec.candidates.end()) {
    throw InvalidInput("player " + std::to_string(i + 1) + " is not a candidate");
  }
  Rational p;
  for (const auto& o : enumerate_tournament(spec, AdversaryStrategy::honest(), {})) {
    if (o.winner == i) p += o.probability;
  }
  return p;
}

}  // namespace ordmatch
