#include "ordmatch/game.hpp"

#include <cstdlib>
#include <functional>
#include <map>

namespace ordmatch {

std::size_t Budget::default_limit() {
  if (const char* env = std::getenv("ORDMATCH_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw InvalidInput(std::string("ORDMATCH_BUDGET is not a positive integer: ") + env);
  }
  return 50'000'000;
}

std::set<DecisionPoint> ExecutionTree::decision_points() const {
  std::set<DecisionPoint> out;
  for (const auto& n : nodes_) {
    if (n.kind == Kind::decision) out.insert(n.point);
  }
  return out;
}

OutcomeDistribution ExecutionTree::distribution(const AdversaryStrategy& strategy) const {
  std::map<int, OutcomeDistribution> memo;
  std::function<const OutcomeDistribution&(int)> eval = [&](int k) -> const OutcomeDistribution& {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    const Node& n = node(k);
    OutcomeDistribution d;
    switch (n.kind) {
      case Kind::leaf:
        d = OutcomeDistribution::point(n.leaf);
        break;
      case Kind::chance:
        for (const auto& e : n.edges) {
          for (const auto& [a, w] : eval(e.child).support()) d.add(a, w * e.probability);
        }
        break;
      case Kind::decision: {
        const Action want = strategy.decide(n.point).value_or(Action::proceed);
        const Edge* chosen = nullptr;
        for (const auto& e : n.edges) {
          if (e.action == want) chosen = &e;
        }
        if (chosen == nullptr) throw StrategyError("strategy picks an action absent from the tree");
        d = eval(chosen->child);
        break;
      }
    }
    return memo.emplace(k, std::move(d)).first->second;
  };
  return eval(root_);
}

void ExecutionTree::validate() const {
  for (const auto& n : nodes_) {
    if (n.kind != Kind::chance) continue;
    Rational sum;
    for (const auto& e : n.edges) sum += e.probability;
    if (sum != Rational(1)) throw ConsistencyError("chance node probabilities sum to " + sum.str());
  }
}

}  // namespace ordmatch
