#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace ordmatch {

using PlayerId = int;  // zero-based internally; one-based at I/O boundaries
using ItemId = int;

inline constexpr int kMaxPlayers = 64;

/// Small set of indices in [0, 64) as a bitmask.
class IndexSet {
 public:
  constexpr IndexSet() = default;
  constexpr explicit IndexSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr IndexSet full(int n) {
    return IndexSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr IndexSet single(int i) { return IndexSet(std::uint64_t{1} << i); }

  constexpr bool contains(int i) const { return (bits_ >> i) & 1U; }
  constexpr void insert(int i) { bits_ |= std::uint64_t{1} << i; }
  constexpr void erase(int i) { bits_ &= ~(std::uint64_t{1} << i); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr std::uint64_t bits() const { return bits_; }
  /// Smallest member; undefined on the empty set.
  constexpr int first() const { return std::countr_zero(bits_); }

  constexpr IndexSet with(int i) const { return IndexSet(bits_ | (std::uint64_t{1} << i)); }
  constexpr IndexSet without(int i) const { return IndexSet(bits_ & ~(std::uint64_t{1} << i)); }
  constexpr IndexSet operator|(IndexSet o) const { return IndexSet(bits_ | o.bits_); }
  constexpr IndexSet operator&(IndexSet o) const { return IndexSet(bits_ & o.bits_); }
  constexpr IndexSet minus(IndexSet o) const { return IndexSet(bits_ & ~o.bits_); }

  /// Members in ascending order.
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  friend constexpr bool operator==(IndexSet, IndexSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

using PlayerSet = IndexSet;
using ItemSet = IndexSet;

}  // namespace ordmatch
