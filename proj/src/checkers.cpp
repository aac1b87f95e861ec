#include "ordmatch/checkers.hpp"

#include <algorithm>
#include <numeric>

#include "ordmatch/errors.hpp"

namespace ordmatch {

namespace {

bool has_cycle(const std::vector<std::vector<bool>>& edges) {
  const std::size_t n = edges.size();
  std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
  auto visit = [&](auto&& self, std::size_t u) -> bool {
    color[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (!edges[u][v]) continue;
      if (color[v] == 1) return true;
      if (color[v] == 0 && self(self, v)) return true;
    }
    color[u] = 2;
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    if (color[u] == 0 && visit(visit, u)) return true;
  }
  return false;
}

void check_sizes(int n, const PreferenceProfile& profile) {
  if (n != profile.size()) throw InvalidInput("size does not match the profile");
}

}  // namespace

bool is_stable(const Assignment& a, const PreferenceProfile& profile) {
  check_sizes(a.size(), profile);
  const auto n = static_cast<std::size_t>(a.size());
  std::vector<std::vector<bool>> envy(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      envy[i][k] = i != k && profile.prefers(static_cast<PlayerId>(i), a.item_of(static_cast<PlayerId>(k)),
                                             a.item_of(static_cast<PlayerId>(i)));
    }
  }
  return !has_cycle(envy);
}

bool is_stable_bruteforce(const Assignment& a, const PreferenceProfile& profile) {
  check_sizes(a.size(), profile);
  const int n = a.size();
  std::vector<ItemId> other(static_cast<std::size_t>(n));
  std::iota(other.begin(), other.end(), 0);
  do {
    if (other == a.items()) continue;
    bool weakly_better = true;
    for (PlayerId i = 0; i < n && weakly_better; ++i) {
      weakly_better = !profile.prefers(i, a.item_of(i), other[static_cast<std::size_t>(i)]);
    }
    if (weakly_better) return false;
  } while (std::next_permutation(other.begin(), other.end()));
  return true;
}

std::vector<std::vector<bool>> item_relation(const BistochasticMatrix& p, const PreferenceProfile& profile) {
  check_sizes(p.size(), profile);
  const int n = p.size();
  std::vector<std::vector<bool>> rel(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (PlayerId i = 0; i < n; ++i) {
    for (int hi = 0; hi < n; ++hi) {
      for (int lo = hi + 1; lo < n; ++lo) {
        const ItemId a = profile.at(i, hi);
        const ItemId b = profile.at(i, lo);
        if (p(i, b).sign() > 0) rel[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
      }
    }
  }
  return rel;
}

bool is_ordinally_efficient(const BistochasticMatrix& p, const PreferenceProfile& profile) {
  return !has_cycle(item_relation(p, profile));
}

std::optional<BistochasticMatrix> find_dominating_exchange(const BistochasticMatrix& p,
                                                           const PreferenceProfile& profile) {
  check_sizes(p.size(), profile);
  const int n = p.size();
  // An exchange cycle visits distinct players i_1..i_k; player i_t gives up
  // item b_t (held with positive probability) for the preferred item a_t, and
  // the items satisfy b_t = a_{t+1} (indices mod k) so column sums balance.
  struct Step {
    PlayerId player;
    ItemId gain;
    ItemId give;
  };
  std::vector<Step> path;
  std::optional<BistochasticMatrix> found;
  auto try_cycle = [&]() {
    Rational eps = 1;
    for (const auto& s : path) eps = min(eps, p(s.player, s.give));
    eps /= Rational(2);
    std::vector<ItemVector> rows = p.rows();
    for (const auto& s : path) {
      rows[static_cast<std::size_t>(s.player)][static_cast<std::size_t>(s.gain)] += eps;
      rows[static_cast<std::size_t>(s.player)][static_cast<std::size_t>(s.give)] -= eps;
    }
    BistochasticMatrix q(std::move(rows));
    if (strictly_dominates(q, p, profile)) found = std::move(q);
  };
  auto extend = [&](auto&& self, PlayerSet used_players, ItemSet used_items) -> void {
    if (found) return;
    const ItemId start = path.front().gain;
    const ItemId need = path.back().give;  // next player must gain this item
    for (PlayerId i = 0; i < n && !found; ++i) {
      if (used_players.contains(i)) continue;
      for (ItemId give = 0; give < n && !found; ++give) {
        if (give == need || p(i, give).sign() <= 0 || !profile.prefers(i, need, give)) continue;
        if (give != start && used_items.contains(give)) continue;
        path.push_back({i, need, give});
        if (give == start) {
          try_cycle();
        } else {
          self(self, used_players.with(i), used_items.with(give));
        }
        path.pop_back();
      }
    }
  };
  for (PlayerId i = 0; i < n && !found; ++i) {
    for (ItemId gain = 0; gain < n && !found; ++gain) {
      for (ItemId give = 0; give < n && !found; ++give) {
        if (gain == give || p(i, give).sign() <= 0 || !profile.prefers(i, gain, give)) continue;
        path.assign(1, {i, gain, give});
        extend(extend, PlayerSet::single(i), ItemSet::single(gain).with(give));
      }
    }
  }
  return found;
}

EqualTreatmentVerdict check_equal_treatment(const BistochasticMatrix& p, const PreferenceProfile& profile,
                                            TreatmentStrength strength) {
  check_sizes(p.size(), profile);
  const int n = p.size();
  for (PlayerId i = 0; i < n; ++i) {
    for (PlayerId j = i + 1; j < n; ++j) {
      int shared = 0;
      while (shared < n && profile.at(i, shared) == profile.at(j, shared)) ++shared;
      if (strength == TreatmentStrength::weak && shared < n) continue;
      for (int k = 0; k < shared; ++k) {
        const ItemId a = profile.at(i, k);
        if (p(i, a) != p(j, a)) return {false, i, j, k + 1, k + 1};
      }
    }
  }
  return {};
}

UniformVerdict check_uniform_dominance(const ItemVector& row, const Order& order) {
  validate_distribution(row);
  UniformVerdict v;
  v.shortfall = first_shortfall(row, uniform_vector(static_cast<int>(row.size())), order);
  v.holds = !v.shortfall.has_value();
  return v;
}

}  // namespace ordmatch
