#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ordmatch/adversary.hpp"
#include "ordmatch/distribution.hpp"
#include "ordmatch/errors.hpp"
#include "ordmatch/lottery.hpp"
#include "ordmatch/matrix.hpp"
#include "ordmatch/profile.hpp"

namespace ordmatch {

/// Caps the number of distinct states a walk may expand.
class Budget {
 public:
  explicit Budget(std::size_t limit = default_limit()) : limit_(limit) {}
  /// ORDMATCH_BUDGET if set, else 50 million.
  static std::size_t default_limit();

  void tick() {
    if (++used_ > limit_) {
      throw ResourceError("enumeration budget of " + std::to_string(limit_) + " states exceeded", used_);
    }
  }
  std::size_t used() const { return used_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

// A machine is a resumable protocol run. Required members:
//   using State;
//   State initial() const;
//   void settle(State&, EventSink*) const;    run deterministic steps
//   bool terminal(const State&) const;
//   TournamentRun::Waiting waiting(const State&) const;
//   std::vector<Rational> chance_probs(const State&) const;
//   void apply_chance(State&, int branch, EventSink*) const;
//   DecisionPoint decision_point(const State&) const;
//   void apply_decision(State&, Action, EventSink*) const;
//   void key(const State&, std::string&) const;
//   AdversaryModel model() const;
//   ItemId item_of(const State&, PlayerId) const;
//   Assignment assignment(const State&) const;

/// Expected item vector of one player.
struct RowTraits {
  using Value = ItemVector;
  PlayerId player;
  int n;
  Value zero() const { return Value(static_cast<std::size_t>(n)); }
  template <class M>
  Value leaf(const M& m, const typename M::State& s) const {
    Value v = zero();
    v[static_cast<std::size_t>(m.item_of(s, player))] = 1;
    return v;
  }
  void add_scaled(Value& acc, const Value& x, const Rational& p) const {
    for (std::size_t j = 0; j < acc.size(); ++j) {
      if (!x[j].is_zero()) acc[j] += x[j] * p;
    }
  }
  void min_with(Value&, const Value&) const {
    throw ConsistencyError("item vectors have no componentwise minimum that means anything");
  }
};

/// Prefix sums of one player's item vector along an order; the adversary
/// minimises every prefix separately.
struct PrefixTraits {
  using Value = ItemVector;
  PlayerId player;
  std::vector<int> rank;  // rank[item] in the evaluating order
  static PrefixTraits of(PlayerId player, const Order& order) {
    PrefixTraits t{player, std::vector<int>(order.size())};
    for (std::size_t k = 0; k < order.size(); ++k) t.rank[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
    return t;
  }
  Value zero() const { return Value(rank.size()); }
  template <class M>
  Value leaf(const M& m, const typename M::State& s) const {
    Value v = zero();
    const int r = rank[static_cast<std::size_t>(m.item_of(s, player))];
    for (std::size_t k = static_cast<std::size_t>(r); k < v.size(); ++k) v[k] = 1;
    return v;
  }
  void add_scaled(Value& acc, const Value& x, const Rational& p) const {
    for (std::size_t j = 0; j < acc.size(); ++j) {
      if (!x[j].is_zero()) acc[j] += x[j] * p;
    }
  }
  void min_with(Value& acc, const Value& x) const {
    for (std::size_t j = 0; j < acc.size(); ++j) {
      if (x[j] < acc[j]) acc[j] = x[j];
    }
  }
};

/// Expected assignment matrix, flattened row-major.
struct MatrixTraits {
  using Value = std::vector<Rational>;
  int n;
  Value zero() const { return Value(static_cast<std::size_t>(n * n)); }
  template <class M>
  Value leaf(const M& m, const typename M::State& s) const {
    Value v = zero();
    const Assignment a = m.assignment(s);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i * n + a.item_of(i))] = 1;
    return v;
  }
  void add_scaled(Value& acc, const Value& x, const Rational& p) const {
    for (std::size_t j = 0; j < acc.size(); ++j) {
      if (!x[j].is_zero()) acc[j] += x[j] * p;
    }
  }
  void min_with(Value&, const Value&) const { throw ConsistencyError("matrices are not minimised"); }
};

/// Full distribution over final assignments.
struct DistributionTraits {
  using Value = OutcomeDistribution;
  Value zero() const { return {}; }
  template <class M>
  Value leaf(const M& m, const typename M::State& s) const {
    return OutcomeDistribution::point(m.assignment(s));
  }
  void add_scaled(Value& acc, const Value& x, const Rational& p) const {
    for (const auto& [a, w] : x.support()) acc.add(a, w * p);
  }
  void min_with(Value&, const Value&) const { throw ConsistencyError("distributions are not minimised"); }
};

/// Backward induction over a machine. With a strategy, decisions are
/// resolved by the strategy (unmatched points play honestly). Without one,
/// every adversary decision takes the componentwise minimum over its
/// available actions. Values are memoised on the machine's state keys.
template <class Machine, class Traits>
class Solver {
 public:
  using State = typename Machine::State;
  using Value = typename Traits::Value;

  Solver(const Machine& machine, Traits traits, const AdversaryStrategy* strategy, Budget& budget)
      : machine_(machine), traits_(std::move(traits)), strategy_(strategy), budget_(budget) {}

  Value solve() { return value(machine_.initial()); }
  Value solve_from(State s) { return value(std::move(s)); }
  std::size_t states() const { return memo_.size(); }

 private:
  Value value(State s) {
    machine_.settle(s, nullptr);
    if (machine_.terminal(s)) return traits_.leaf(machine_, s);
    std::string key;
    machine_.key(s, key);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    budget_.tick();
    Value result = traits_.zero();
    if (machine_.waiting(s) == TournamentRun::Waiting::chance) {
      const auto probs = machine_.chance_probs(s);
      for (std::size_t b = 0; b < probs.size(); ++b) {
        if (probs[b].is_zero()) continue;
        State child = s;
        machine_.apply_chance(child, static_cast<int>(b), nullptr);
        traits_.add_scaled(result, value(std::move(child)), probs[b]);
      }
    } else {
      const DecisionPoint p = machine_.decision_point(s);
      if (strategy_ != nullptr) {
        State child = std::move(s);
        machine_.apply_decision(child, strategy_->decide(p).value_or(Action::proceed), nullptr);
        result = value(std::move(child));
      } else {
        auto actions = available_actions(machine_.model(), p);
        if (actions.empty()) actions.push_back(Action::proceed);
        bool first = true;
        for (Action a : actions) {
          State child = s;
          machine_.apply_decision(child, a, nullptr);
          Value v = value(std::move(child));
          if (first) {
            result = std::move(v);
            first = false;
          } else {
            traits_.min_with(result, v);
          }
        }
      }
    }
    return memo_.emplace(std::move(key), std::move(result)).first->second;
  }

  const Machine& machine_;
  Traits traits_;
  const AdversaryStrategy* strategy_;
  Budget& budget_;
  std::unordered_map<std::string, Value> memo_;
};

/// Game in explicit form: chance nodes with exact edge probabilities,
/// adversary decision nodes with unweighted edges, leaves carrying final
/// assignments. Identical states share a node, so the tree is stored as a DAG.
class ExecutionTree {
 public:
  enum class Kind { leaf, chance, decision };
  struct Edge {
    Rational probability;  // chance edges only
    Action action = Action::proceed;  // decision edges only
    int child = -1;
  };
  struct Node {
    Kind kind = Kind::leaf;
    Assignment leaf;
    DecisionPoint point;
    std::vector<Edge> edges;
  };

  int add(Node node) {
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }
  void set_root(int r) { root_ = r; }
  int root() const { return root_; }
  const Node& node(int k) const { return nodes_[static_cast<std::size_t>(k)]; }
  Node& node(int k) { return nodes_[static_cast<std::size_t>(k)]; }
  std::size_t size() const { return nodes_.size(); }

  /// Distinct decision points reachable under some adversary behaviour.
  std::set<DecisionPoint> decision_points() const;
  /// Leaf distribution when decisions follow `strategy` (honest default).
  OutcomeDistribution distribution(const AdversaryStrategy& strategy) const;
  /// Throws ConsistencyError unless chance edges sum to one at every node.
  void validate() const;

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Builds the execution tree. With `strategy` set, decision nodes keep only
/// the chosen edge; otherwise every available action is expanded.
template <class Machine>
ExecutionTree build_tree(const Machine& machine, const AdversaryStrategy* strategy, Budget& budget) {
  using State = typename Machine::State;
  ExecutionTree tree;
  std::unordered_map<std::string, int> memo;
  auto build = [&](auto&& self, State s) -> int {
    machine.settle(s, nullptr);
    if (machine.terminal(s)) {
      ExecutionTree::Node leaf;
      leaf.leaf = machine.assignment(s);
      return tree.add(std::move(leaf));
    }
    std::string key;
    machine.key(s, key);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    budget.tick();
    ExecutionTree::Node node;
    if (machine.waiting(s) == TournamentRun::Waiting::chance) {
      node.kind = ExecutionTree::Kind::chance;
      const auto probs = machine.chance_probs(s);
      for (std::size_t b = 0; b < probs.size(); ++b) {
        if (probs[b].is_zero()) continue;
        State child = s;
        machine.apply_chance(child, static_cast<int>(b), nullptr);
        node.edges.push_back({probs[b], Action::proceed, self(self, std::move(child))});
      }
    } else {
      node.kind = ExecutionTree::Kind::decision;
      node.point = machine.decision_point(s);
      std::vector<Action> actions;
      if (strategy != nullptr) {
        actions.push_back(strategy->decide(node.point).value_or(Action::proceed));
      } else {
        actions = available_actions(machine.model(), node.point);
        if (std::find(actions.begin(), actions.end(), Action::proceed) == actions.end()) {
          actions.push_back(Action::proceed);  // honest play stays representable
        }
      }
      for (Action a : actions) {
        State child = s;
        machine.apply_decision(child, a, nullptr);
        node.edges.push_back({Rational(), a, self(self, std::move(child))});
      }
    }
    const int id = tree.add(std::move(node));
    memo.emplace(std::move(key), id);
    return id;
  };
  tree.set_root(build(build, machine.initial()));
  return tree;
}

/// One sampled run with its audit log.
struct SampleRun {
  Assignment assignment;
  std::vector<ProtocolEvent> log;
};

/// Draws a uniform integer below the common denominator of each chance
/// node's probabilities, so every branch is hit with its exact probability.
template <class Machine>
SampleRun sample_run(const Machine& machine, const AdversaryStrategy& strategy, gmp_randclass& rng) {
  typename Machine::State s = machine.initial();
  SampleRun out;
  for (;;) {
    machine.settle(s, &out.log);
    if (machine.terminal(s)) break;
    if (machine.waiting(s) == TournamentRun::Waiting::chance) {
      const auto probs = machine.chance_probs(s);
      const Integer scale = common_denominator(probs);
      const Integer draw = rng.get_z_range(scale);
      Integer acc = 0;
      int pick = -1;
      for (std::size_t b = 0; b < probs.size(); ++b) {
        acc += probs[b].numerator() * (scale / probs[b].denominator());
        if (draw < acc) {
          pick = static_cast<int>(b);
          break;
        }
      }
      machine.apply_chance(s, pick, &out.log);
    } else {
      const DecisionPoint p = machine.decision_point(s);
      machine.apply_decision(s, strategy.decide(p).value_or(Action::proceed), &out.log);
    }
  }
  out.assignment = machine.assignment(s);
  return out;
}

}  // namespace ordmatch
