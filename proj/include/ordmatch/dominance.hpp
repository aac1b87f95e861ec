#pragma once

#include <optional>

#include "ordmatch/matrix.hpp"
#include "ordmatch/profile.hpp"

namespace ordmatch {

/// Prefix sums of `p` along `order`: entry j is the mass on the top j+1 items.
ItemVector prefix_sums(const ItemVector& p, const Order& order);

/// First prefix where p falls short of q.
struct PrefixShortfall {
  int length = 0;  // one-based prefix length
  Rational p_sum;
  Rational q_sum;
};

/// Empty when p dominates q along `order`.
std::optional<PrefixShortfall> first_shortfall(const ItemVector& p, const ItemVector& q,
                                               const Order& order);

/// Every top-j prefix of p is at least that of q. Throws InvalidInput on
/// length mismatch.
bool dominates_vec(const ItemVector& p, const ItemVector& q, const Order& order);
bool dominates_vec(const ItemVector& p, const ItemVector& q, const PreferenceProfile& profile,
                   PlayerId i);

/// Row-wise dominance for every player.
bool dominates_matrix(const BistochasticMatrix& p, const BistochasticMatrix& q,
                      const PreferenceProfile& profile);
bool strictly_dominates(const BistochasticMatrix& p, const BistochasticMatrix& q,
                        const PreferenceProfile& profile);

}  // namespace ordmatch
