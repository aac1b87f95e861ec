#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "ordmatch/adversary.hpp"
#include "ordmatch/checkers.hpp"
#include "ordmatch/distribution.hpp"
#include "ordmatch/dominance.hpp"
#include "ordmatch/game.hpp"
#include "ordmatch/protocols.hpp"

namespace ordmatch {

/// Exact distribution over final assignments under a deterministic strategy.
OutcomeDistribution exact_distribution(Protocol protocol, const PreferenceProfile& profile,
                                       const AdversaryStrategy& strategy, Budget& budget);

/// Expected assignment matrix; cheaper than the full distribution.
BistochasticMatrix expected_matrix(Protocol protocol, const PreferenceProfile& profile,
                                   const AdversaryStrategy& strategy, Budget& budget);

/// Expected item vector of one player. Memo keys forget the items held by
/// other assigned players, and the walk stops once `player` is assigned.
ItemVector expected_row(Protocol protocol, const PreferenceProfile& profile,
                        const AdversaryStrategy& strategy, PlayerId player, Budget& budget,
                        std::size_t* states = nullptr);

/// Per-prefix minimum over all adversary behaviour of the given shape
/// (model, corrupted set, timing, declared orders), measured along `order`.
/// Entry ℓ-1 is the least achievable mass on the top ℓ items.
ItemVector worst_case_prefixes(Protocol protocol, const PreferenceProfile& profile,
                               const AdversaryStrategy& shape, PlayerId i0, const Order& order,
                               Budget& budget);

struct MaximinVerdict {
  bool secure = true;
  ItemVector honest_row;
  ItemVector attacked_row;  // empty when only prefix minima were computed
  ItemVector honest_prefix;
  ItemVector attacked_prefix;
  std::optional<PrefixShortfall> violation;  // first failing prefix
};

/// Honest row of i0 against its row under one deterministic strategy.
MaximinVerdict check_maximin(Protocol protocol, const PreferenceProfile& profile, PlayerId i0,
                             const AdversaryStrategy& strategy, Budget& budget);

/// Honest row of i0 against the per-prefix worst case over every strategy of
/// the given shape.
MaximinVerdict check_maximin_all(Protocol protocol, const PreferenceProfile& profile, PlayerId i0,
                                 const AdversaryStrategy& shape, Budget& budget);

/// Least top-ℓ probability (ℓ = 1..n, returned as a vector) of honest i0
/// whose true order is `order`, when every other player is Byzantine and may
/// declare any order from `declared_pool` (all n! orders when empty).
ItemVector uniform_worst_prefixes(Protocol protocol, int n, PlayerId i0, const Order& order,
                                  Budget& budget, const std::vector<Order>& declared_pool = {},
                                  DecisionTiming timing = DecisionTiming::before_open);

/// Single-ℓ form of the above.
Rational worst_case_prefix_prob(Protocol protocol, int n, PlayerId i0, const Order& order, int ell,
                                Budget& budget);

struct TruthfulnessVerdict {
  bool strict_gain = false;     // lying row strictly dominates the truthful row
  bool truth_dominates = true;  // truthful row dominates the lying row
  ItemVector truthful_row;
  ItemVector lying_row;
  ItemVector truthful_prefix;  // along the true order
  ItemVector lying_prefix;
  int first_gain_prefix = 0;   // first ℓ where lying does better, 0 if none
};

using RowOracle = std::function<ItemVector(const PreferenceProfile& reported, PlayerId player)>;

TruthfulnessVerdict check_truthfulness_gain(const RowOracle& rows, const PreferenceProfile& profile,
                                            PlayerId liar, const Order& reported);
RowOracle protocol_rows(Protocol protocol, Budget& budget);
RowOracle ps_rows();
RowOracle rp_rows();

/// Probability that i0 holds or has a claim on an item when the consumption
/// process is stopped at time t.
Rational claimed_ownership_prob(Protocol protocol, const PreferenceProfile& profile,
                                const AdversaryStrategy& strategy, PlayerId i0, const Rational& t,
                                Budget& budget);

/// Every time at which some tournament runs, plus 0 and 1.
std::set<Rational> event_times(Protocol protocol, const PreferenceProfile& profile,
                               const AdversaryStrategy& strategy, Budget& budget);

struct OwnershipCheck {
  std::size_t checked = 0;  // (start state, time) pairs compared
  bool holds = true;
  Rational start;
  Rational time;
  Rational expected;
  Rational actual;
};

/// For every reachable point where honest i0 is about to start eating at
/// time t0 (the start, or surviving a tournament), compares the claimed
/// ownership probability at each event time t ≥ t0 with (t - t0)/(1 - t0).
OwnershipCheck check_ownership_law(const PreferenceProfile& profile, PlayerId i0, Budget& budget);

/// Deterministic fail-stop strategies over the reachable decision points.
class StrategyEnumerator {
 public:
  StrategyEnumerator(std::vector<DecisionPoint> points, AdversaryStrategy shape)
      : points_(std::move(points)), shape_(std::move(shape)) {}
  std::size_t decision_points() const { return points_.size(); }
  std::uint64_t count() const { return std::uint64_t{1} << points_.size(); }
  /// Strategy number k: bit t of k set means abort at point t.
  AdversaryStrategy at(std::uint64_t k) const;
  const std::vector<DecisionPoint>& points() const { return points_; }

 private:
  std::vector<DecisionPoint> points_;
  AdversaryStrategy shape_;
};

inline constexpr std::size_t kDefaultDecisionBound = 20;

/// Throws ResourceError (carrying the point count) when the reachable
/// decision points exceed `bound`.
StrategyEnumerator enumerate_failstop_strategies(Protocol protocol, const PreferenceProfile& profile,
                                                 PlayerSet corrupted, Budget& budget,
                                                 std::size_t bound = kDefaultDecisionBound,
                                                 DecisionTiming timing = DecisionTiming::before_open);

}  // namespace ordmatch
