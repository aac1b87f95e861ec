#include "ordmatch/adversary.hpp"

#include <algorithm>
#include <sstream>

#include "ordmatch/errors.hpp"

namespace ordmatch {

std::string to_string(AdversaryModel m) {
  switch (m) {
    case AdversaryModel::honest: return "honest";
    case AdversaryModel::fail_stop: return "fail-stop";
    case AdversaryModel::byzantine: return "byzantine";
  }
  return "?";
}

std::string to_string(DecisionTiming t) {
  return t == DecisionTiming::before_open ? "before-open" : "after-reveal";
}

std::string to_string(Action a) {
  switch (a) {
    case Action::proceed: return "proceed";
    case Action::abort: return "abort";
    case Action::first_wins: return "first-wins";
    case Action::second_wins: return "second-wins";
  }
  return "?";
}

std::string to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::withdraw: return "withdraw";
    case DecisionKind::duel_abort: return "duel";
    case DecisionKind::choose_winner: return "choose-winner";
  }
  return "?";
}

AdversaryModel parse_model(const std::string& s) {
  if (s == "honest") return AdversaryModel::honest;
  if (s == "fail-stop" || s == "failstop") return AdversaryModel::fail_stop;
  if (s == "byzantine") return AdversaryModel::byzantine;
  throw InvalidInput("unknown adversary model: " + s);
}

DecisionTiming parse_timing(const std::string& s) {
  if (s == "before-open") return DecisionTiming::before_open;
  if (s == "after-reveal") return DecisionTiming::after_reveal;
  throw InvalidInput("unknown decision timing: " + s);
}

Action parse_action(const std::string& s) {
  if (s == "proceed" || s == "continue") return Action::proceed;
  if (s == "abort") return Action::abort;
  if (s == "first-wins") return Action::first_wins;
  if (s == "second-wins") return Action::second_wins;
  throw InvalidInput("unknown action: " + s);
}

DecisionKind parse_kind(const std::string& s) {
  if (s == "withdraw") return DecisionKind::withdraw;
  if (s == "duel") return DecisionKind::duel_abort;
  if (s == "choose-winner") return DecisionKind::choose_winner;
  throw InvalidInput("unknown decision kind: " + s);
}

bool DecisionPattern::matches(const DecisionPoint& p) const {
  if (actor && *actor != p.actor) return false;
  if (vs) {
    const PlayerId other = p.actor == p.first ? p.second : p.first;
    if (p.kind == DecisionKind::withdraw || *vs != other) return false;
  }
  if (item && *item != p.item) return false;
  if (stamp && *stamp != p.stamp) return false;
  if (duel_index && *duel_index != p.duel_index) return false;
  if (kind && *kind != p.kind) return false;
  if (would_be_winner && *would_be_winner != p.would_be_winner) return false;
  return true;
}

std::vector<Action> available_actions(AdversaryModel model, const DecisionPoint& p) {
  if (model == AdversaryModel::honest) return {};
  if (p.kind == DecisionKind::choose_winner) {
    if (model != AdversaryModel::byzantine) return {};
    return {Action::first_wins, Action::second_wins};
  }
  return {Action::proceed, Action::abort};
}

AdversaryStrategy::AdversaryStrategy(AdversaryModel model, PlayerSet corrupted, DecisionTiming timing)
    : model_(model), corrupted_(corrupted), timing_(timing) {}

std::optional<Action> AdversaryStrategy::decide(const DecisionPoint& p) const {
  if (model_ == AdversaryModel::honest) return std::nullopt;
  std::optional<Action> chosen;
  if (auto it = table_.find(p); it != table_.end()) {
    chosen = it->second;
  } else {
    for (const auto& pat : patterns_) {
      if (pat.matches(p)) {
        chosen = pat.action;
        break;
      }
    }
  }
  if (!chosen) return std::nullopt;
  const auto allowed = available_actions(model_, p);
  if (std::find(allowed.begin(), allowed.end(), *chosen) == allowed.end()) {
    throw StrategyError("action '" + to_string(*chosen) + "' is not available at a " +
                        to_string(p.kind) + " decision");
  }
  return chosen;
}

PreferenceProfile AdversaryStrategy::declared_profile(const PreferenceProfile& truth) const {
  if (declared_.empty() || model_ != AdversaryModel::byzantine) return truth;
  std::vector<Order> rows = truth.orders();
  for (const auto& [i, order] : declared_) {
    if (i < 0 || i >= truth.size()) throw StrategyError("declared order for unknown player");
    rows[static_cast<std::size_t>(i)] = order;
  }
  return PreferenceProfile(std::move(rows));
}

void AdversaryStrategy::validate(int n) const {
  const PlayerSet all = PlayerSet::full(n);
  if (!corrupted_.minus(all).empty()) throw StrategyError("corrupted set names an unknown player");
  for (const auto& pat : patterns_) {
    if (pat.actor && (*pat.actor < 0 || *pat.actor >= n)) {
      throw StrategyError("pattern names an unknown player");
    }
    if (pat.actor && !corrupted_.contains(*pat.actor)) {
      throw StrategyError("pattern actor " + std::to_string(*pat.actor + 1) + " is not corrupted");
    }
    if (pat.vs && (*pat.vs < 0 || *pat.vs >= n)) throw StrategyError("pattern names an unknown opponent");
    if (pat.item && (*pat.item < 0 || *pat.item >= n)) throw StrategyError("pattern names an unknown item");
    if (model_ == AdversaryModel::fail_stop &&
        (pat.action == Action::first_wins || pat.action == Action::second_wins)) {
      throw StrategyError("fail-stop strategies may only abort or continue");
    }
  }
  for (const auto& [p, a] : table_) {
    if (!corrupted_.contains(p.actor)) throw StrategyError("table entry for an honest actor");
  }
  for (const auto& [i, order] : declared_) {
    if (model_ != AdversaryModel::byzantine) throw StrategyError("only Byzantine players may misreport");
    if (!corrupted_.contains(i)) throw StrategyError("honest players report their true order");
    try {
      validate_order(order, n);
    } catch (const InvalidInput& e) {
      throw StrategyError(std::string("declared order: ") + e.what());
    }
  }
}

std::string AdversaryStrategy::describe() const {
  std::ostringstream out;
  out << to_string(model_);
  if (model_ != AdversaryModel::honest) {
    out << " corrupted={";
    bool first = true;
    for (int i : corrupted_.members()) {
      out << (first ? "" : ",") << i + 1;
      first = false;
    }
    out << "} timing=" << to_string(timing_) << " patterns=" << patterns_.size();
    if (!table_.empty()) out << " table=" << table_.size();
    if (!declared_.empty()) out << " declared=" << declared_.size();
  }
  return out.str();
}

AdversaryStrategy scripted_failstop(PlayerSet corrupted, std::vector<DecisionPattern> schedule,
                                    DecisionTiming timing) {
  AdversaryStrategy s(AdversaryModel::fail_stop, corrupted, timing);
  for (auto& p : schedule) {
    if (p.actor && !corrupted.contains(*p.actor)) {
      throw StrategyError("schedule names honest player " + std::to_string(*p.actor + 1) + " as actor");
    }
    s.add_pattern(std::move(p));
  }
  return s;
}

std::vector<Action> byzantine_choice_nodes(const AdversaryStrategy& strategy, const DecisionPoint& p) {
  if (strategy.model() != AdversaryModel::byzantine) {
    throw StrategyError("choice nodes are defined for the Byzantine model only");
  }
  if (!strategy.is_corrupted(p.actor)) return {};
  return available_actions(AdversaryModel::byzantine, p);
}

}  // namespace ordmatch
