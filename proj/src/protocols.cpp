#include "ordmatch/protocols.hpp"

#include <algorithm>

#include "ordmatch/errors.hpp"

namespace ordmatch {

namespace {

template <class T>
void put(std::string& out, T v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(v));
}

ProtocolEvent make_event(EventKind kind, const Rational& stamp, ItemId item, PlayerId player) {
  ProtocolEvent e;
  e.kind = kind;
  e.stamp = stamp;
  e.item = item;
  e.player = player;
  return e;
}

std::vector<PlayerId> withdrawers_of(const AdversaryStrategy& s) {
  return s.model() == AdversaryModel::honest ? std::vector<PlayerId>{} : s.corrupted().members();
}

DecisionPoint withdraw_point(PlayerId actor) {
  DecisionPoint p;
  p.stamp = 0;
  p.actor = actor;
  p.kind = DecisionKind::withdraw;
  return p;
}

}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::pp: return "pp";
    case Protocol::naive_pp: return "naivepp";
    case Protocol::online_ps_var: return "opsvar";
    case Protocol::online_ps: return "ops";
  }
  return "?";
}

Protocol parse_protocol(const std::string& s) {
  if (s == "pp") return Protocol::pp;
  if (s == "naivepp") return Protocol::naive_pp;
  if (s == "opsvar") return Protocol::online_ps_var;
  if (s == "ops") return Protocol::online_ps;
  throw InvalidInput("unknown protocol: " + s);
}

PPState PPState::initial(int n) {
  PPState s;
  s.survivors = PlayerSet::full(n);
  s.remaining = ItemSet::full(n);
  s.item_of.assign(static_cast<std::size_t>(n), -1);
  return s;
}

std::map<ItemId, std::vector<PlayerId>> competition_classes(const PPState& state,
                                                            const PreferenceProfile& profile,
                                                            bool naive) {
  std::map<ItemId, std::vector<PlayerId>> classes;
  if (state.round < 1 || state.round > profile.size()) return classes;
  for (PlayerId i : state.survivors.members()) {
    const ItemId j = naive ? profile.favorite_in(i, state.remaining) : profile.at(i, state.round - 1);
    if (j >= 0 && state.remaining.contains(j)) classes[j].push_back(i);
  }
  return classes;
}

PPState pp_step(const PPState& state, const PreferenceProfile& profile,
                const std::map<ItemId, TournamentOutcome>& outcomes, bool naive) {
  if (static_cast<int>(state.item_of.size()) != profile.size()) {
    throw InvalidInput("state size does not match the profile");
  }
  const auto classes = competition_classes(state, profile, naive);
  for (const auto& [j, o] : outcomes) {
    if (!classes.contains(j)) {
      throw ConsistencyError("lottery outcome for item " + std::to_string(j + 1) +
                             ", which no class contests");
    }
  }
  PPState next = state;
  for (const auto& [j, members] : classes) {
    PlayerId winner = members.front();
    PlayerSet detected;
    auto it = outcomes.find(j);
    if (members.size() > 1) {
      if (it == outcomes.end()) {
        throw ConsistencyError("no lottery outcome for contested item " + std::to_string(j + 1));
      }
      winner = it->second.winner;
      detected = it->second.detected;
    }
    if (std::find(members.begin(), members.end(), winner) == members.end()) {
      throw ConsistencyError("lottery winner is not in the class of item " + std::to_string(j + 1));
    }
    next.item_of[static_cast<std::size_t>(winner)] = j;
    next.remaining.erase(j);
    next.survivors.erase(winner);
    next.survivors = next.survivors.minus(detected);
  }
  ++next.round;
  return next;
}

void apply_leftover(std::vector<ItemId>& item_of, const PreferenceProfile& profile,
                    const Rational& stamp, EventSink* sink) {
  ItemSet free = ItemSet::full(profile.size());
  for (ItemId a : item_of) {
    if (a >= 0) free.erase(a);
  }
  for (PlayerId i = 0; i < profile.size(); ++i) {
    auto& slot = item_of[static_cast<std::size_t>(i)];
    if (slot >= 0) continue;
    slot = profile.favorite_in(i, free);
    free.erase(slot);
    if (sink) sink->push_back(make_event(EventKind::leftover, stamp, slot, i));
  }
}

void LawMonitor::check_join(PlayerId i, const Rational& t, const Rational& rate) {
  ++join_checks_;
  if (t >= Rational(1)) {
    throw LawViolation("player " + std::to_string(i + 1) + " starts an item at time " + t.str());
  }
  const Rational expected = Rational(1) / (Rational(1) - t);
  if (rate != expected) {
    throw LawViolation("player " + std::to_string(i + 1) + " starts at time " + t.str() + " with rate " +
                       rate.str() + ", expected " + expected.str());
  }
}

void LawMonitor::check_survivor_rates(const Rational& t, const std::vector<Rational>& rates) {
  ++survivor_checks_;
  if (t >= Rational(1)) throw LawViolation("tournament completes at time " + t.str());
  for (const auto& r : rates) {
    if (r != rates.front()) throw LawViolation("survivors leave a tournament with unequal rates");
  }
}

// ---------------------------------------------------------------- PP

PPMachine::PPMachine(const PreferenceProfile& truth, const AdversaryStrategy& strategy, bool naive,
                     MachineOptions options)
    : profile_(strategy.declared_profile(truth)),
      naive_(naive),
      options_(std::move(options)),
      model_(strategy.model()),
      corrupted_(strategy.corrupted()),
      timing_(strategy.timing()),
      withdrawers_(withdrawers_of(strategy)) {
  strategy.validate(truth.size());
}

PPMachine::State PPMachine::initial() const {
  State s;
  s.core = PPState::initial(profile_.size());
  return s;
}

ItemId PPMachine::class_item(const State& s, PlayerId i) const {
  const ItemId j = naive_ ? profile_.favorite_in(i, s.core.remaining) : profile_.at(i, s.core.round - 1);
  return s.core.remaining.contains(j) ? j : -1;
}

LotteryContext PPMachine::context(const State& s) const {
  return {model_, corrupted_, timing_, Rational(s.core.round), s.tour_item};
}

bool PPMachine::terminal(const State& s) const {
  return s.finished || (options_.focus >= 0 && s.core.item_of[static_cast<std::size_t>(options_.focus)] >= 0);
}

void PPMachine::settle(State& s, EventSink* sink) const {
  const int n = profile_.size();
  for (;;) {
    if (terminal(s)) return;
    if (s.cursor < static_cast<int>(withdrawers_.size())) return;
    if (s.tour) {
      if (!s.tour->done()) return;
      finish_tournament(s, sink);
      continue;
    }
    if (s.core.round > n || s.core.survivors.empty()) {
      apply_leftover(s.core.item_of, profile_, Rational(std::min(s.core.round, n)), sink);
      s.core.remaining = ItemSet{};
      s.finished = true;
      return;
    }
    if (!s.round_open) {
      s.pending = PlayerSet{};
      for (PlayerId i : s.core.survivors.members()) {
        if (class_item(s, i) >= 0) s.pending.insert(i);
      }
      s.round_open = true;
    }
    if (s.pending.empty()) {
      ++s.core.round;
      s.round_open = false;
      continue;
    }
    ItemId j = n;
    for (PlayerId i : s.pending.members()) j = std::min(j, class_item(s, i));
    std::vector<PlayerId> members;
    for (PlayerId i : s.pending.members()) {
      if (class_item(s, i) == j) members.push_back(i);
    }
    const Rational stamp(s.core.round);
    if (members.size() == 1) {
      const PlayerId w = members.front();
      s.core.item_of[static_cast<std::size_t>(w)] = j;
      s.core.remaining.erase(j);
      s.core.survivors.erase(w);
      s.pending.erase(w);
      if (sink) sink->push_back(make_event(EventKind::assignment, stamp, j, w));
      continue;
    }
    TournamentSpec spec{members, std::vector<Integer>(members.size(), Integer(1))};
    if (sink) {
      ProtocolEvent e = make_event(EventKind::tournament, stamp, j, -1);
      e.players = spec.candidates;
      e.weights = spec.weights;
      sink->push_back(std::move(e));
    }
    s.tour_item = j;
    s.tour.emplace(std::move(spec), context(s), options_.expand_duels);
  }
}

void PPMachine::finish_tournament(State& s, EventSink* sink) const {
  const TournamentRun& t = *s.tour;
  const ItemId j = s.tour_item;
  const PlayerId w = t.winner();
  const Rational stamp(s.core.round);
  s.core.item_of[static_cast<std::size_t>(w)] = j;
  s.core.remaining.erase(j);
  s.core.survivors.erase(w);
  for (PlayerId c : t.spec().candidates) s.pending.erase(c);
  s.core.survivors = s.core.survivors.minus(t.detected());
  if (sink) {
    sink->push_back(make_event(EventKind::assignment, stamp, j, w));
    for (PlayerId d : t.detected().members()) sink->push_back(make_event(EventKind::elimination, stamp, j, d));
  }
  s.tour.reset();
  s.tour_item = -1;
}

TournamentRun::Waiting PPMachine::waiting(const State& s) const {
  if (s.cursor < static_cast<int>(withdrawers_.size())) return TournamentRun::Waiting::decision;
  return s.tour ? s.tour->waiting() : TournamentRun::Waiting::none;
}

std::vector<Rational> PPMachine::chance_probs(const State& s) const { return s.tour->chance_probs(); }

void PPMachine::apply_chance(State& s, int branch, EventSink* sink) const {
  s.tour->apply_chance(context(s), branch, sink);
}

DecisionPoint PPMachine::decision_point(const State& s) const {
  if (s.cursor < static_cast<int>(withdrawers_.size())) {
    return withdraw_point(withdrawers_[static_cast<std::size_t>(s.cursor)]);
  }
  return s.tour->decision_point(context(s));
}

void PPMachine::apply_decision(State& s, Action a, EventSink* sink) const {
  if (s.cursor < static_cast<int>(withdrawers_.size())) {
    if (a != Action::proceed && a != Action::abort) throw StrategyError("withdrawal is abort or continue");
    const PlayerId i = withdrawers_[static_cast<std::size_t>(s.cursor)];
    if (a == Action::abort) {
      s.core.survivors.erase(i);
      if (sink) {
        ProtocolEvent d = make_event(EventKind::decision, Rational(0), -1, i);
        d.action = a;
        sink->push_back(std::move(d));
        sink->push_back(make_event(EventKind::elimination, Rational(0), -1, i));
      }
    }
    ++s.cursor;
    return;
  }
  s.tour->apply_decision(context(s), a, sink);
}

void PPMachine::key(const State& s, std::string& out) const {
  put(out, static_cast<std::int16_t>(s.core.round));
  put(out, s.core.survivors.bits());
  put(out, s.core.remaining.bits());
  put(out, s.pending.bits());
  put(out, static_cast<std::uint8_t>((s.round_open ? 1 : 0) | (s.finished ? 2 : 0)));
  put(out, static_cast<std::int16_t>(s.cursor));
  for (std::size_t i = 0; i < s.core.item_of.size(); ++i) {
    const ItemId a = s.core.item_of[i];
    const bool hide = options_.focus >= 0 && static_cast<PlayerId>(i) != options_.focus && a >= 0;
    put(out, static_cast<std::int8_t>(hide ? 100 : a));
  }
  put(out, static_cast<std::int8_t>(s.tour_item));
  if (s.tour) s.tour->append_key(out);
}

ItemId PPMachine::item_of(const State& s, PlayerId i) const {
  const ItemId a = s.core.item_of[static_cast<std::size_t>(i)];
  if (a < 0) throw ConsistencyError("player " + std::to_string(i + 1) + " holds no item yet");
  return a;
}

Assignment PPMachine::assignment(const State& s) const {
  if (!s.finished) throw ConsistencyError("run stopped before every player was assigned");
  return Assignment(s.core.item_of);
}

// ---------------------------------------------------------------- OnlinePS

ConsumptionMachine::ConsumptionMachine(const PreferenceProfile& truth, const AdversaryStrategy& strategy,
                                       bool varying_rates, MachineOptions options)
    : profile_(strategy.declared_profile(truth)),
      var_(varying_rates),
      options_(std::move(options)),
      model_(strategy.model()),
      corrupted_(strategy.corrupted()),
      timing_(strategy.timing()),
      withdrawers_(withdrawers_of(strategy)) {
  strategy.validate(truth.size());
  if (options_.interrupt_at && (options_.interrupt_at->sign() < 0 || *options_.interrupt_at > Rational(1))) {
    throw InvalidInput("interrupt time outside [0,1]");
  }
}

ConsumptionMachine::State ConsumptionMachine::initial() const {
  State s;
  const auto n = static_cast<std::size_t>(profile_.size());
  s.players.assign(n, Eater{});
  s.remaining.assign(n, Rational(1));
  return s;
}

LotteryContext ConsumptionMachine::context(const State& s) const {
  return {model_, corrupted_, timing_, s.time, s.tour_item};
}

bool ConsumptionMachine::terminal(const State& s) const {
  return s.finished || s.interrupted ||
         (options_.focus >= 0 &&
          s.players[static_cast<std::size_t>(options_.focus)].phase == Phase::assigned);
}

void ConsumptionMachine::settle(State& s, EventSink* sink) const {
  const int n = profile_.size();
  for (;;) {
    if (terminal(s)) return;
    if (s.cursor < static_cast<int>(withdrawers_.size())) return;
    if (s.tour) {
      if (!s.tour->done()) return;
      finish_tournament(s, sink);
      continue;
    }
    if (!s.exhausted.empty()) {
      const ItemId j = s.exhausted.first();
      s.exhausted.erase(j);
      start_tournament(s, j, sink);
      continue;
    }
    // everyone without an item moves to their favourite item still on the table
    ItemSet open;
    for (ItemId j = 0; j < n; ++j) {
      if (s.remaining[static_cast<std::size_t>(j)].sign() > 0) open.insert(j);
    }
    bool anyone_eating = false;
    for (PlayerId i = 0; i < n; ++i) {
      Eater& e = s.players[static_cast<std::size_t>(i)];
      if (e.phase == Phase::idle) {
        const ItemId j = profile_.favorite_in(i, open);
        if (j < 0) continue;
        e.phase = Phase::eating;
        e.item = j;
        e.consumed = 0;
        if (var_ && options_.monitor) options_.monitor->check_join(i, s.time, e.rate);
      }
      if (e.phase == Phase::eating) anyone_eating = true;
    }
    if (!anyone_eating) {
      leftover(s, sink);
      return;
    }
    std::vector<Rational> total(static_cast<std::size_t>(n));
    for (const auto& e : s.players) {
      if (e.phase == Phase::eating) total[static_cast<std::size_t>(e.item)] += e.rate;
    }
    std::optional<Rational> dt;
    for (ItemId j = 0; j < n; ++j) {
      const auto& r = total[static_cast<std::size_t>(j)];
      if (r.sign() <= 0) continue;
      Rational until = s.remaining[static_cast<std::size_t>(j)] / r;
      if (!dt || until < *dt) dt = std::move(until);
    }
    bool stop = false;
    if (options_.interrupt_at && s.time + *dt >= *options_.interrupt_at) {
      dt = *options_.interrupt_at - s.time;
      stop = true;
    }
    for (auto& e : s.players) {
      if (e.phase == Phase::eating) e.consumed += e.rate * *dt;
    }
    for (ItemId j = 0; j < n; ++j) {
      const auto& r = total[static_cast<std::size_t>(j)];
      if (r.sign() <= 0) continue;
      auto& rem = s.remaining[static_cast<std::size_t>(j)];
      rem -= r * *dt;
      if (rem.is_zero()) s.exhausted.insert(j);
    }
    s.time += *dt;
    if (stop) {
      s.interrupted = true;
      return;
    }
  }
}

void ConsumptionMachine::start_tournament(State& s, ItemId j, EventSink* sink) const {
  std::vector<PlayerId> cand;
  std::vector<Rational> fractions;
  for (PlayerId i = 0; i < profile_.size(); ++i) {
    Eater& e = s.players[static_cast<std::size_t>(i)];
    if (e.phase != Phase::eating || e.item != j) continue;
    if (e.consumed.is_zero()) {
      e.phase = Phase::idle;  // arrived at the instant of exhaustion
      e.item = -1;
      continue;
    }
    cand.push_back(i);
    fractions.push_back(e.consumed);
  }
  if (cand.empty()) throw ConsistencyError("item " + std::to_string(j + 1) + " exhausted with no consumer");
  if (cand.size() == 1) {
    Eater& e = s.players[static_cast<std::size_t>(cand.front())];
    e.phase = Phase::assigned;
    if (sink) sink->push_back(make_event(EventKind::assignment, s.time, j, cand.front()));
    return;
  }
  const Integer scale = common_denominator(fractions);
  TournamentSpec spec{cand, {}};
  for (const auto& f : fractions) spec.weights.push_back(f.numerator() * (scale / f.denominator()));
  if (sink) {
    ProtocolEvent e = make_event(EventKind::tournament, s.time, j, -1);
    e.players = spec.candidates;
    e.weights = spec.weights;
    sink->push_back(std::move(e));
  }
  s.tour_item = j;
  s.tour.emplace(std::move(spec), context(s), options_.expand_duels);
}

void ConsumptionMachine::finish_tournament(State& s, EventSink* sink) const {
  const TournamentRun& t = *s.tour;
  const ItemId j = s.tour_item;
  const PlayerId w = t.winner();
  Eater& we = s.players[static_cast<std::size_t>(w)];
  const Rational winner_rate = we.rate;
  we.phase = Phase::assigned;
  we.item = j;
  if (sink) sink->push_back(make_event(EventKind::assignment, s.time, j, w));
  Rational others;
  for (PlayerId c : t.spec().candidates) {
    if (c != w) others += s.players[static_cast<std::size_t>(c)].consumed;
  }
  std::vector<Rational> survivor_rates;
  for (PlayerId c : t.spec().candidates) {
    if (c == w) continue;
    Eater& e = s.players[static_cast<std::size_t>(c)];
    if (t.detected().contains(c)) {
      e.phase = Phase::eliminated;
      e.rate = 0;
      if (sink) sink->push_back(make_event(EventKind::elimination, s.time, j, c));
    } else {
      if (var_) {
        e.rate += winner_rate * e.consumed / others;
        if (sink) {
          ProtocolEvent r = make_event(EventKind::rate_update, s.time, j, c);
          r.value = e.rate;
          sink->push_back(std::move(r));
        }
      }
      e.phase = Phase::idle;
      survivor_rates.push_back(e.rate);
    }
    e.item = -1;
    e.consumed = 0;
  }
  if (var_ && options_.monitor && t.spec().candidates.size() > 1) {
    options_.monitor->check_survivor_rates(s.time, survivor_rates);
  }
  s.tour.reset();
  s.tour_item = -1;
}

void ConsumptionMachine::leftover(State& s, EventSink* sink) const {
  std::vector<ItemId> item_of(s.players.size(), -1);
  for (std::size_t i = 0; i < s.players.size(); ++i) {
    if (s.players[i].phase == Phase::assigned) item_of[i] = s.players[i].item;
  }
  apply_leftover(item_of, profile_, s.time, sink);
  for (std::size_t i = 0; i < s.players.size(); ++i) {
    Eater& e = s.players[i];
    if (e.phase != Phase::assigned) {
      e.phase = Phase::assigned;
      e.item = item_of[i];
      e.rate = 0;
      e.consumed = 0;
    }
  }
  s.finished = true;
}

TournamentRun::Waiting ConsumptionMachine::waiting(const State& s) const {
  if (s.cursor < static_cast<int>(withdrawers_.size())) return TournamentRun::Waiting::decision;
  return s.tour ? s.tour->waiting() : TournamentRun::Waiting::none;
}

std::vector<Rational> ConsumptionMachine::chance_probs(const State& s) const { return s.tour->chance_probs(); }

void ConsumptionMachine::apply_chance(State& s, int branch, EventSink* sink) const {
  s.tour->apply_chance(context(s), branch, sink);
}

DecisionPoint ConsumptionMachine::decision_point(const State& s) const {
  if (s.cursor < static_cast<int>(withdrawers_.size())) {
    return withdraw_point(withdrawers_[static_cast<std::size_t>(s.cursor)]);
  }
  return s.tour->decision_point(context(s));
}

void ConsumptionMachine::apply_decision(State& s, Action a, EventSink* sink) const {
  if (s.cursor < static_cast<int>(withdrawers_.size())) {
    if (a != Action::proceed && a != Action::abort) throw StrategyError("withdrawal is abort or continue");
    const PlayerId i = withdrawers_[static_cast<std::size_t>(s.cursor)];
    if (a == Action::abort) {
      Eater& e = s.players[static_cast<std::size_t>(i)];
      e.phase = Phase::eliminated;
      e.rate = 0;
      if (sink) {
        ProtocolEvent d = make_event(EventKind::decision, Rational(0), -1, i);
        d.action = a;
        sink->push_back(std::move(d));
        sink->push_back(make_event(EventKind::elimination, Rational(0), -1, i));
      }
    }
    ++s.cursor;
    return;
  }
  s.tour->apply_decision(context(s), a, sink);
}

void ConsumptionMachine::key(const State& s, std::string& out) const {
  s.time.append_key(out);
  for (const auto& r : s.remaining) r.append_key(out);
  for (std::size_t i = 0; i < s.players.size(); ++i) {
    const Eater& e = s.players[i];
    put(out, static_cast<std::uint8_t>(e.phase));
    switch (e.phase) {
      case Phase::eating:
        put(out, static_cast<std::int8_t>(e.item));
        e.rate.append_key(out);
        e.consumed.append_key(out);
        break;
      case Phase::idle:
        e.rate.append_key(out);
        break;
      case Phase::assigned:
        if (options_.focus < 0 || static_cast<PlayerId>(i) == options_.focus) {
          put(out, static_cast<std::int8_t>(e.item));
        }
        break;
      case Phase::eliminated:
        break;
    }
  }
  put(out, s.exhausted.bits());
  put(out, static_cast<std::int16_t>(s.cursor));
  put(out, static_cast<std::uint8_t>((s.finished ? 1 : 0) | (s.interrupted ? 2 : 0)));
  put(out, static_cast<std::int8_t>(s.tour_item));
  if (s.tour) s.tour->append_key(out);
}

ItemId ConsumptionMachine::item_of(const State& s, PlayerId i) const {
  const Eater& e = s.players[static_cast<std::size_t>(i)];
  if (e.phase != Phase::assigned) throw ConsistencyError("player " + std::to_string(i + 1) + " holds no item yet");
  return e.item;
}

Assignment ConsumptionMachine::assignment(const State& s) const {
  if (!s.finished) throw ConsistencyError("run stopped before every player was assigned");
  std::vector<ItemId> item_of;
  for (const auto& e : s.players) item_of.push_back(e.item);
  return Assignment(std::move(item_of));
}

Rational ConsumptionMachine::claimed(const State& s, PlayerId i) const {
  const Eater& e = s.players[static_cast<std::size_t>(i)];
  if (e.phase == Phase::assigned) return 1;
  if (e.phase == Phase::eating) return e.consumed;
  return 0;
}

// ---------------------------------------------------------------- runners

SampleRun sample_protocol(Protocol protocol, const PreferenceProfile& profile,
                          const AdversaryStrategy& adversary, std::uint64_t seed) {
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(seed));
  return with_machine(protocol, profile, adversary, MachineOptions{},
                      [&](const auto& m) { return sample_run(m, adversary, rng); });
}

ExecutionTree enumerate_protocol(Protocol protocol, const PreferenceProfile& profile,
                                 const AdversaryStrategy& shape, const AdversaryStrategy* adversary,
                                 Budget& budget) {
  return with_machine(protocol, profile, shape, MachineOptions{},
                      [&](const auto& m) { return build_tree(m, adversary, budget); });
}

SampleRun run_pp(const PreferenceProfile& profile, std::uint64_t seed, const AdversaryStrategy& adversary) {
  return sample_protocol(Protocol::pp, profile, adversary, seed);
}

SampleRun run_naive_pp(const PreferenceProfile& profile, std::uint64_t seed,
                       const AdversaryStrategy& adversary) {
  return sample_protocol(Protocol::naive_pp, profile, adversary, seed);
}

SampleRun run_online_ps_var(const PreferenceProfile& profile, std::uint64_t seed,
                            const AdversaryStrategy& adversary) {
  return sample_protocol(Protocol::online_ps_var, profile, adversary, seed);
}

SampleRun run_online_ps(const PreferenceProfile& profile, std::uint64_t seed,
                        const AdversaryStrategy& adversary) {
  return sample_protocol(Protocol::online_ps, profile, adversary, seed);
}

}  // namespace ordmatch
