#include "ordmatch/analysis.hpp"

#include <type_traits>
#include <unordered_set>

#include "ordmatch/errors.hpp"
#include "ordmatch/mechanisms.hpp"

namespace ordmatch {

namespace {

template <class M>
using MachineT = std::decay_t<M>;

struct ClaimTraits {
  using Value = Rational;
  PlayerId player;
  Value zero() const { return {}; }
  Value leaf(const ConsumptionMachine& m, const ConsumptionMachine::State& s) const {
    return m.claimed(s, player);
  }
  void add_scaled(Value& acc, const Value& x, const Rational& p) const { acc += x * p; }
  void min_with(Value& acc, const Value& x) const { acc = min(acc, x); }
};

void require_player(const PreferenceProfile& profile, PlayerId i) {
  if (i < 0 || i >= profile.size()) throw InvalidInput("unknown player " + std::to_string(i + 1));
}

void require_consumption(Protocol p) {
  if (p != Protocol::online_ps_var && p != Protocol::online_ps) {
    throw InvalidInput("claimed ownership is defined for the consumption protocols only");
  }
}

ItemVector prefix_of(const ItemVector& row, const Order& order) { return prefix_sums(row, order); }

}  // namespace

OutcomeDistribution exact_distribution(Protocol protocol, const PreferenceProfile& profile,
                                       const AdversaryStrategy& strategy, Budget& budget) {
  return with_machine(protocol, profile, strategy, MachineOptions{}, [&](const auto& m) {
    Solver<MachineT<decltype(m)>, DistributionTraits> solver(m, {}, &strategy, budget);
    OutcomeDistribution d = solver.solve();
    d.set_provenance(to_string(protocol) + " / " + strategy.describe());
    d.validate();
    return d;
  });
}

BistochasticMatrix expected_matrix(Protocol protocol, const PreferenceProfile& profile,
                                   const AdversaryStrategy& strategy, Budget& budget) {
  const int n = profile.size();
  const auto flat = with_machine(protocol, profile, strategy, MachineOptions{}, [&](const auto& m) {
    Solver<MachineT<decltype(m)>, MatrixTraits> solver(m, MatrixTraits{n}, &strategy, budget);
    return solver.solve();
  });
  std::vector<ItemVector> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rows[static_cast<std::size_t>(i)].assign(flat.begin() + i * n, flat.begin() + (i + 1) * n);
  }
  try {
    return BistochasticMatrix(std::move(rows));
  } catch (const InvalidInput& e) {
    throw ConsistencyError(std::string("expected matrix is not bistochastic: ") + e.what());
  }
}

ItemVector expected_row(Protocol protocol, const PreferenceProfile& profile, const AdversaryStrategy& strategy,
                        PlayerId player, Budget& budget, std::size_t* states) {
  require_player(profile, player);
  MachineOptions opts;
  opts.focus = player;
  return with_machine(protocol, profile, strategy, opts, [&](const auto& m) {
    Solver<MachineT<decltype(m)>, RowTraits> solver(m, RowTraits{player, profile.size()}, &strategy, budget);
    ItemVector row = solver.solve();
    if (states) *states = solver.states();
    return row;
  });
}

ItemVector worst_case_prefixes(Protocol protocol, const PreferenceProfile& profile,
                               const AdversaryStrategy& shape, PlayerId i0, const Order& order,
                               Budget& budget) {
  require_player(profile, i0);
  if (shape.is_corrupted(i0)) throw InvalidInput("the protected player must be honest");
  MachineOptions opts;
  opts.focus = i0;
  return with_machine(protocol, profile, shape, opts, [&](const auto& m) {
    Solver<MachineT<decltype(m)>, PrefixTraits> solver(m, PrefixTraits::of(i0, order), nullptr, budget);
    return solver.solve();
  });
}

MaximinVerdict check_maximin(Protocol protocol, const PreferenceProfile& profile, PlayerId i0,
                             const AdversaryStrategy& strategy, Budget& budget) {
  require_player(profile, i0);
  if (strategy.is_corrupted(i0)) throw InvalidInput("player " + std::to_string(i0 + 1) + " is corrupted");
  MaximinVerdict v;
  const Order& order = profile.order(i0);
  v.honest_row = expected_row(protocol, profile, AdversaryStrategy::honest(), i0, budget);
  v.attacked_row = expected_row(protocol, profile, strategy, i0, budget);
  v.honest_prefix = prefix_of(v.honest_row, order);
  v.attacked_prefix = prefix_of(v.attacked_row, order);
  v.violation = first_shortfall(v.attacked_row, v.honest_row, order);
  v.secure = !v.violation;
  return v;
}

MaximinVerdict check_maximin_all(Protocol protocol, const PreferenceProfile& profile, PlayerId i0,
                                 const AdversaryStrategy& shape, Budget& budget) {
  require_player(profile, i0);
  MaximinVerdict v;
  const Order& order = profile.order(i0);
  v.honest_row = expected_row(protocol, profile, AdversaryStrategy::honest(), i0, budget);
  v.honest_prefix = prefix_of(v.honest_row, order);
  v.attacked_prefix = worst_case_prefixes(protocol, profile, shape, i0, order, budget);
  for (std::size_t j = 0; j < v.honest_prefix.size(); ++j) {
    if (v.attacked_prefix[j] < v.honest_prefix[j]) {
      v.violation = PrefixShortfall{static_cast<int>(j) + 1, v.attacked_prefix[j], v.honest_prefix[j]};
      break;
    }
  }
  v.secure = !v.violation;
  return v;
}

ItemVector uniform_worst_prefixes(Protocol protocol, int n, PlayerId i0, const Order& order, Budget& budget,
                                  const std::vector<Order>& declared_pool, DecisionTiming timing) {
  validate_order(order, n);
  if (i0 < 0 || i0 >= n) throw InvalidInput("unknown player");
  const std::vector<Order> pool = declared_pool.empty() ? all_orders(n) : declared_pool;
  std::vector<Order> rows(static_cast<std::size_t>(n), all_orders(n).front());
  rows[static_cast<std::size_t>(i0)] = order;
  const PreferenceProfile truth(rows);
  const PlayerSet others = PlayerSet::full(n).without(i0);
  const std::vector<PlayerId> liars = others.members();
  std::vector<std::size_t> pick(liars.size(), 0);
  ItemVector worst;
  for (;;) {
    AdversaryStrategy shape(AdversaryModel::byzantine, others, timing);
    for (std::size_t k = 0; k < liars.size(); ++k) shape.declare(liars[k], pool[pick[k]]);
    const ItemVector v = worst_case_prefixes(protocol, truth, shape, i0, order, budget);
    if (worst.empty()) {
      worst = v;
    } else {
      for (std::size_t j = 0; j < worst.size(); ++j) worst[j] = min(worst[j], v[j]);
    }
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == pool.size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return worst;
}

Rational worst_case_prefix_prob(Protocol protocol, int n, PlayerId i0, const Order& order, int ell,
                                Budget& budget) {
  if (ell < 1 || ell > n) throw InvalidInput("prefix length outside [1, n]");
  return uniform_worst_prefixes(protocol, n, i0, order, budget)[static_cast<std::size_t>(ell - 1)];
}

TruthfulnessVerdict check_truthfulness_gain(const RowOracle& rows, const PreferenceProfile& profile,
                                            PlayerId liar, const Order& reported) {
  require_player(profile, liar);
  validate_order(reported, profile.size());
  TruthfulnessVerdict v;
  const Order& truth = profile.order(liar);
  v.truthful_row = rows(profile, liar);
  v.lying_row = rows(profile.with_order(liar, reported), liar);
  v.truthful_prefix = prefix_sums(v.truthful_row, truth);
  v.lying_prefix = prefix_sums(v.lying_row, truth);
  v.strict_gain = dominates_vec(v.lying_row, v.truthful_row, truth) && v.lying_row != v.truthful_row;
  v.truth_dominates = dominates_vec(v.truthful_row, v.lying_row, truth);
  for (std::size_t j = 0; j < v.truthful_prefix.size(); ++j) {
    if (v.lying_prefix[j] > v.truthful_prefix[j]) {
      v.first_gain_prefix = static_cast<int>(j) + 1;
      break;
    }
  }
  return v;
}

RowOracle protocol_rows(Protocol protocol, Budget& budget) {
  return [protocol, &budget](const PreferenceProfile& reported, PlayerId i) {
    return expected_row(protocol, reported, AdversaryStrategy::honest(), i, budget);
  };
}

RowOracle ps_rows() {
  return [](const PreferenceProfile& reported, PlayerId i) { return ps_matrix(reported).row(i); };
}

RowOracle rp_rows() {
  return [](const PreferenceProfile& reported, PlayerId i) { return rp_matrix(reported).row(i); };
}

Rational claimed_ownership_prob(Protocol protocol, const PreferenceProfile& profile,
                                const AdversaryStrategy& strategy, PlayerId i0, const Rational& t,
                                Budget& budget) {
  require_consumption(protocol);
  require_player(profile, i0);
  if (t.sign() < 0 || t > Rational(1)) throw InvalidInput("time outside [0,1]: " + t.str());
  MachineOptions opts;
  opts.interrupt_at = t;
  const ConsumptionMachine m(profile, strategy, protocol == Protocol::online_ps_var, opts);
  Solver<ConsumptionMachine, ClaimTraits> solver(m, ClaimTraits{i0}, &strategy, budget);
  return solver.solve();
}

std::set<Rational> event_times(Protocol protocol, const PreferenceProfile& profile,
                               const AdversaryStrategy& strategy, Budget& budget) {
  require_consumption(protocol);
  const ConsumptionMachine m(profile, strategy, protocol == Protocol::online_ps_var);
  std::set<Rational> times{Rational(0), Rational(1)};
  std::unordered_set<std::string> seen;
  auto rec = [&](auto&& self, ConsumptionMachine::State s) -> void {
    m.settle(s, nullptr);
    if (m.terminal(s)) return;
    std::string key;
    m.key(s, key);
    if (!seen.insert(std::move(key)).second) return;
    budget.tick();
    times.insert(s.time);
    if (m.waiting(s) == TournamentRun::Waiting::chance) {
      const auto probs = m.chance_probs(s);
      for (std::size_t b = 0; b < probs.size(); ++b) {
        if (probs[b].is_zero()) continue;
        ConsumptionMachine::State child = s;
        m.apply_chance(child, static_cast<int>(b), nullptr);
        self(self, std::move(child));
      }
    } else {
      ConsumptionMachine::State child = s;
      m.apply_decision(child, strategy.decide(m.decision_point(s)).value_or(Action::proceed), nullptr);
      self(self, std::move(child));
    }
  };
  rec(rec, m.initial());
  return times;
}

OwnershipCheck check_ownership_law(const PreferenceProfile& profile, PlayerId i0, Budget& budget) {
  require_player(profile, i0);
  const AdversaryStrategy honest = AdversaryStrategy::honest();
  const ConsumptionMachine m(profile, honest, true);
  const std::set<Rational> times = event_times(Protocol::online_ps_var, profile, honest, budget);

  // start points: time 0, and every branch where i0 just survived a tournament
  std::vector<ConsumptionMachine::State> starts{m.initial()};
  std::unordered_set<std::string> seen;
  auto rec = [&](auto&& self, ConsumptionMachine::State s) -> void {
    m.settle(s, nullptr);
    if (m.terminal(s)) return;
    std::string key;
    m.key(s, key);
    if (!seen.insert(std::move(key)).second) return;
    budget.tick();
    const auto probs = m.chance_probs(s);
    for (std::size_t b = 0; b < probs.size(); ++b) {
      if (probs[b].is_zero()) continue;
      ConsumptionMachine::State child = s;
      m.apply_chance(child, static_cast<int>(b), nullptr);
      if (child.tour && child.tour->done() && child.tour->survivors().contains(i0)) starts.push_back(child);
      self(self, std::move(child));
    }
  };
  rec(rec, m.initial());

  OwnershipCheck out;
  for (const auto& start : starts) {
    const Rational& t0 = start.time;
    for (const Rational& t : times) {
      if (t < t0) continue;
      MachineOptions opts;
      opts.interrupt_at = t;
      const ConsumptionMachine cut(profile, honest, true, opts);
      Solver<ConsumptionMachine, ClaimTraits> solver(cut, ClaimTraits{i0}, &honest, budget);
      const Rational actual = solver.solve_from(start);
      const Rational expected = t0 == Rational(1) ? Rational(1) : (t - t0) / (Rational(1) - t0);
      ++out.checked;
      if (actual != expected) {
        out.holds = false;
        out.start = t0;
        out.time = t;
        out.expected = expected;
        out.actual = actual;
        return out;
      }
    }
  }
  return out;
}

AdversaryStrategy StrategyEnumerator::at(std::uint64_t k) const {
  if (k >= count()) throw InvalidInput("strategy index out of range");
  AdversaryStrategy s = shape_;
  std::map<DecisionPoint, Action> table;
  for (std::size_t t = 0; t < points_.size(); ++t) {
    table[points_[t]] = ((k >> t) & 1U) ? Action::abort : Action::proceed;
  }
  s.set_table(std::move(table));
  return s;
}

StrategyEnumerator enumerate_failstop_strategies(Protocol protocol, const PreferenceProfile& profile,
                                                 PlayerSet corrupted, Budget& budget, std::size_t bound,
                                                 DecisionTiming timing) {
  const AdversaryStrategy shape(AdversaryModel::fail_stop, corrupted, timing);
  shape.validate(profile.size());
  const ExecutionTree tree = enumerate_protocol(protocol, profile, shape, nullptr, budget);
  const auto points = tree.decision_points();
  if (points.size() > bound) {
    throw ResourceError(std::to_string(points.size()) + " reachable decision points exceed the bound of " +
                            std::to_string(bound),
                        points.size());
  }
  return StrategyEnumerator(std::vector<DecisionPoint>(points.begin(), points.end()), shape);
}

}  // namespace ordmatch
