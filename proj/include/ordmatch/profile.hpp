#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ordmatch/index_set.hpp"

namespace ordmatch {

/// A strict order over n items, most preferred first.
using Order = std::vector<ItemId>;

/// n players, n items, one strict order per player.
class PreferenceProfile {
 public:
  PreferenceProfile() = default;
  /// Validates that each row is a permutation of 0..n-1 and that there are n rows.
  explicit PreferenceProfile(std::vector<Order> orders);

  int size() const { return static_cast<int>(orders_.size()); }
  const Order& order(PlayerId i) const { return orders_[static_cast<std::size_t>(i)]; }
  const std::vector<Order>& orders() const { return orders_; }

  /// Position of `item` in player i's order, 0 = favourite.
  int rank(PlayerId i, ItemId item) const {
    return ranks_[static_cast<std::size_t>(i)][static_cast<std::size_t>(item)];
  }
  bool prefers(PlayerId i, ItemId a, ItemId b) const { return rank(i, a) < rank(i, b); }
  /// Item at position k (0-based) of player i's order.
  ItemId at(PlayerId i, int k) const { return order(i)[static_cast<std::size_t>(k)]; }
  /// Player i's most preferred item among `available`; -1 if empty.
  ItemId favorite_in(PlayerId i, ItemSet available) const;

  /// Copy with player i's order replaced (a misreport).
  PreferenceProfile with_order(PlayerId i, Order order) const;

  /// Text format: first line n, then n lines of one-based items, favourite first.
  static PreferenceProfile parse(std::string_view text);
  static PreferenceProfile load(const std::string& path);
  std::string to_text() const;

  friend bool operator==(const PreferenceProfile& a, const PreferenceProfile& b) {
    return a.orders_ == b.orders_;
  }

 private:
  std::vector<Order> orders_;
  std::vector<std::vector<int>> ranks_;
};

/// Throws InvalidInput unless `order` is a permutation of 0..n-1.
void validate_order(const Order& order, int n);

/// All n! orders of n items, lexicographic.
std::vector<Order> all_orders(int n);

}  // namespace ordmatch
