#pragma once

#include <string>
#include <vector>

#include "ordmatch/index_set.hpp"
#include "ordmatch/rational.hpp"

namespace ordmatch {

/// Per-item probabilities. Used both for full distributions (sum 1) and for
/// sub-distributions (sum at most 1) in the interrupted-process analysis.
using ItemVector = std::vector<Rational>;

/// Throws InvalidInput unless entries lie in [0,1] and sum to 1
/// (or to at most 1 when `allow_sub`).
void validate_distribution(const ItemVector& v, bool allow_sub = false);

ItemVector uniform_vector(int n);

/// Integral matching: player i receives item_of[i].
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<ItemId> item_of);
  static Assignment identity(int n);

  int size() const { return static_cast<int>(item_of_.size()); }
  ItemId item_of(PlayerId i) const { return item_of_[static_cast<std::size_t>(i)]; }
  const std::vector<ItemId>& items() const { return item_of_; }
  /// Inverse map: holder of each item.
  std::vector<PlayerId> holders() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<ItemId> item_of_;
};

/// Square matrix of exact entries; rows are players, columns items.
class BistochasticMatrix {
 public:
  BistochasticMatrix() = default;
  /// Validates entries in [0,1] and exact unit row/column sums.
  explicit BistochasticMatrix(std::vector<ItemVector> rows);

  static BistochasticMatrix of(const Assignment& a);
  static BistochasticMatrix uniform(int n);
  /// Parses rows of "a/b" strings.
  static BistochasticMatrix from_strings(const std::vector<std::vector<std::string>>& rows);

  int size() const { return static_cast<int>(rows_.size()); }
  const Rational& operator()(PlayerId i, ItemId j) const {
    return rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const ItemVector& row(PlayerId i) const { return rows_[static_cast<std::size_t>(i)]; }
  const std::vector<ItemVector>& rows() const { return rows_; }

  friend bool operator==(const BistochasticMatrix&, const BistochasticMatrix&) = default;

 private:
  std::vector<ItemVector> rows_;
};

}  // namespace ordmatch
