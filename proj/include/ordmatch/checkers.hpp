#pragma once

#include <optional>
#include <vector>

#include "ordmatch/dominance.hpp"
#include "ordmatch/matrix.hpp"
#include "ordmatch/profile.hpp"

namespace ordmatch {

/// No trading cycle: the digraph with an edge i -> i' whenever i strictly
/// prefers the item of i' to its own is acyclic.
bool is_stable(const Assignment& a, const PreferenceProfile& profile);
/// Definition: no other assignment is weakly better for everyone. n! scan.
bool is_stable_bruteforce(const Assignment& a, const PreferenceProfile& profile);

/// Item relation: a -> b when some player prefers a to b yet holds b with
/// positive probability.
std::vector<std::vector<bool>> item_relation(const BistochasticMatrix& p, const PreferenceProfile& profile);

/// Ordinal efficiency via acyclicity of the item relation.
bool is_ordinally_efficient(const BistochasticMatrix& p, const PreferenceProfile& profile);

/// Matrix obtained by trading a small amount along an exchange cycle, kept
/// only if it strictly dominates `p` by the dominance definition.
std::optional<BistochasticMatrix> find_dominating_exchange(const BistochasticMatrix& p,
                                                           const PreferenceProfile& profile);

enum class TreatmentStrength { strong, weak };

struct EqualTreatmentVerdict {
  bool holds = true;
  PlayerId first = -1;  // witness pair
  PlayerId second = -1;
  int prefix = 0;       // smallest shared prefix length ℓ that fails
  int position = 0;     // k ≤ ℓ where the probabilities differ (1-based)
};

EqualTreatmentVerdict check_equal_treatment(const BistochasticMatrix& p, const PreferenceProfile& profile,
                                            TreatmentStrength strength);

struct UniformVerdict {
  bool holds = true;
  std::optional<PrefixShortfall> shortfall;  // compared against ℓ/n
};

/// Top-ℓ mass at least ℓ/n for every ℓ.
UniformVerdict check_uniform_dominance(const ItemVector& row, const Order& order);

}  // namespace ordmatch
