#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordmatch/index_set.hpp"
#include "ordmatch/profile.hpp"
#include "ordmatch/rational.hpp"

namespace ordmatch {

enum class AdversaryModel { honest, fail_stop, byzantine };

/// When a corrupted duel participant commits to its move. `before_open`
/// decides on the transcript so far; `after_reveal` additionally sees which
/// participant the opened ring values would make the winner (rushing).
enum class DecisionTiming { before_open, after_reveal };

enum class Action { proceed, abort, first_wins, second_wins };

enum class DecisionKind {
  withdraw,       // abort before the protocol starts
  duel_abort,     // abort or open in a duel
  choose_winner,  // both duel participants corrupted (Byzantine)
};

/// Identity of an adversary decision. Stable across coupled replays: it only
/// contains the stamp (round, or consumption time), the contested item and
/// the duel coordinates.
struct DecisionPoint {
  Rational stamp;
  ItemId item = -1;
  int duel_index = -1;
  PlayerId first = -1;
  PlayerId second = -1;
  PlayerId actor = -1;
  DecisionKind kind = DecisionKind::duel_abort;
  PlayerId would_be_winner = -1;  // only under after_reveal timing

  friend bool operator==(const DecisionPoint&, const DecisionPoint&) = default;
  friend std::strong_ordering operator<=>(const DecisionPoint&, const DecisionPoint&) = default;
};

std::string to_string(AdversaryModel m);
std::string to_string(DecisionTiming t);
std::string to_string(Action a);
std::string to_string(DecisionKind k);
AdversaryModel parse_model(const std::string& s);
DecisionTiming parse_timing(const std::string& s);
Action parse_action(const std::string& s);
DecisionKind parse_kind(const std::string& s);

/// Matches decision points on every field that is set.
struct DecisionPattern {
  std::optional<PlayerId> actor;
  std::optional<PlayerId> vs;  // the other duel participant
  std::optional<ItemId> item;
  std::optional<Rational> stamp;
  std::optional<int> duel_index;
  std::optional<DecisionKind> kind;
  std::optional<PlayerId> would_be_winner;
  Action action = Action::abort;

  bool matches(const DecisionPoint& p) const;
};

/// Actions open to the adversary at a decision point under `model`.
/// Empty for the honest model.
std::vector<Action> available_actions(AdversaryModel model, const DecisionPoint& p);

/// Deterministic adversary: a corrupted set, a model, and a rule mapping
/// decision points to actions. Points the rule does not cover are played
/// honestly.
class AdversaryStrategy {
 public:
  AdversaryStrategy() = default;
  AdversaryStrategy(AdversaryModel model, PlayerSet corrupted,
                    DecisionTiming timing = DecisionTiming::before_open);

  static AdversaryStrategy honest() { return {}; }

  AdversaryModel model() const { return model_; }
  PlayerSet corrupted() const { return model_ == AdversaryModel::honest ? PlayerSet{} : corrupted_; }
  DecisionTiming timing() const { return timing_; }
  bool is_corrupted(PlayerId i) const { return corrupted().contains(i); }

  void add_pattern(DecisionPattern p) { patterns_.push_back(std::move(p)); }
  void set_table(std::map<DecisionPoint, Action> table) { table_ = std::move(table); }
  /// Misreported order for a corrupted player (Byzantine only).
  void declare(PlayerId i, Order order) { declared_[i] = std::move(order); }

  const std::vector<DecisionPattern>& patterns() const { return patterns_; }
  const std::map<PlayerId, Order>& declared() const { return declared_; }
  const std::map<DecisionPoint, Action>& table() const { return table_; }

  /// Action chosen at `p`, or nullopt for honest play. Throws StrategyError
  /// when the rule picks an action not available at `p`.
  std::optional<Action> decide(const DecisionPoint& p) const;

  /// Profile the protocol actually sees: true orders with declared overrides.
  PreferenceProfile declared_profile(const PreferenceProfile& truth) const;

  /// Throws StrategyError if the strategy references players outside
  /// [0,n), patterns name honest actors, or declarations violate the model.
  void validate(int n) const;

  std::string describe() const;

 private:
  AdversaryModel model_ = AdversaryModel::honest;
  PlayerSet corrupted_;
  DecisionTiming timing_ = DecisionTiming::before_open;
  std::vector<DecisionPattern> patterns_;
  std::map<DecisionPoint, Action> table_;
  std::map<PlayerId, Order> declared_;
};

/// Fail-stop strategy with an abort schedule; unscripted points continue.
AdversaryStrategy scripted_failstop(PlayerSet corrupted, std::vector<DecisionPattern> schedule,
                                    DecisionTiming timing = DecisionTiming::before_open);

/// Adversary choices at `p` for a Byzantine strategy. Throws StrategyError
/// under any other model.
std::vector<Action> byzantine_choice_nodes(const AdversaryStrategy& strategy, const DecisionPoint& p);

}  // namespace ordmatch
