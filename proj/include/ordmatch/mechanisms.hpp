#pragma once

#include <vector>

#include "ordmatch/distribution.hpp"
#include "ordmatch/matrix.hpp"
#include "ordmatch/profile.hpp"

namespace ordmatch {

inline constexpr int kDefaultRpBound = 8;

/// Players in ranking order take their favourite remaining item.
Assignment serial_dictatorship(const PreferenceProfile& profile, const std::vector<PlayerId>& ranking);

/// Average of serial dictatorship over all n! rankings. Throws ResourceError
/// when n exceeds `bound`.
BistochasticMatrix rp_matrix(const PreferenceProfile& profile, int bound = kDefaultRpBound);

/// Snapshot of the eating process between events.
struct EatingState {
  Rational time;
  ItemVector remaining;
  std::vector<ItemId> eating;               // -1 once nothing is left
  std::vector<ItemVector> consumed;         // [player][item]
};

/// Probabilistic Serial: unit-rate simultaneous eating with exact event times.
BistochasticMatrix ps_matrix(const PreferenceProfile& profile);
/// Same run, returning the state after each event (first entry at time 0).
std::vector<EatingState> ps_trace(const PreferenceProfile& profile);

/// Birkhoff peeling: repeatedly take the lexicographically smallest
/// permutation inside the support, with the largest weight it allows.
OutcomeDistribution decompose(const BistochasticMatrix& p);

}  // namespace ordmatch
