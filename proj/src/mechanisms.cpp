#include "ordmatch/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "ordmatch/errors.hpp"

namespace ordmatch {

Assignment serial_dictatorship(const PreferenceProfile& profile, const std::vector<PlayerId>& ranking) {
  const int n = profile.size();
  if (static_cast<int>(ranking.size()) != n) throw InvalidInput("ranking must list every player once");
  PlayerSet seen;
  for (PlayerId i : ranking) {
    if (i < 0 || i >= n || seen.contains(i)) throw InvalidInput("ranking is not a permutation of the players");
    seen.insert(i);
  }
  ItemSet free = ItemSet::full(n);
  std::vector<ItemId> item_of(static_cast<std::size_t>(n), -1);
  for (PlayerId i : ranking) {
    const ItemId j = profile.favorite_in(i, free);
    item_of[static_cast<std::size_t>(i)] = j;
    free.erase(j);
  }
  return Assignment(std::move(item_of));
}

BistochasticMatrix rp_matrix(const PreferenceProfile& profile, int bound) {
  const int n = profile.size();
  if (n > bound) {
    throw ResourceError("random priority enumeration is limited to " + std::to_string(bound) + " players", 0);
  }
  std::vector<PlayerId> ranking(static_cast<std::size_t>(n));
  std::iota(ranking.begin(), ranking.end(), 0);
  std::vector<std::vector<long>> counts(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(n), 0));
  long total = 0;
  do {
    const Assignment a = serial_dictatorship(profile, ranking);
    for (PlayerId i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(a.item_of(i))];
    ++total;
  } while (std::next_permutation(ranking.begin(), ranking.end()));
  std::vector<ItemVector> rows;
  for (const auto& c : counts) {
    ItemVector r;
    for (long v : c) r.emplace_back(Integer(v), Integer(total));
    rows.push_back(std::move(r));
  }
  return BistochasticMatrix(std::move(rows));
}

std::vector<EatingState> ps_trace(const PreferenceProfile& profile) {
  const int n = profile.size();
  const auto un = static_cast<std::size_t>(n);
  EatingState s;
  s.remaining.assign(un, Rational(1));
  s.eating.assign(un, -1);
  s.consumed.assign(un, ItemVector(un));
  std::vector<EatingState> trace;
  for (;;) {
    ItemSet open;
    for (ItemId j = 0; j < n; ++j) {
      if (s.remaining[static_cast<std::size_t>(j)].sign() > 0) open.insert(j);
    }
    std::vector<long> eaters(un, 0);
    for (PlayerId i = 0; i < n; ++i) {
      const ItemId j = profile.favorite_in(i, open);
      s.eating[static_cast<std::size_t>(i)] = j;
      if (j >= 0) ++eaters[static_cast<std::size_t>(j)];
    }
    trace.push_back(s);
    if (open.empty()) break;
    std::optional<Rational> dt;
    for (ItemId j : open.members()) {
      const long k = eaters[static_cast<std::size_t>(j)];
      if (k == 0) continue;
      Rational until = s.remaining[static_cast<std::size_t>(j)] / Rational(k);
      if (!dt || until < *dt) dt = std::move(until);
    }
    for (PlayerId i = 0; i < n; ++i) {
      const ItemId j = s.eating[static_cast<std::size_t>(i)];
      s.consumed[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += *dt;
      s.remaining[static_cast<std::size_t>(j)] -= *dt;
    }
    s.time += *dt;
  }
  return trace;
}

BistochasticMatrix ps_matrix(const PreferenceProfile& profile) {
  return BistochasticMatrix(ps_trace(profile).back().consumed);
}

namespace {

// Lexicographically smallest perfect matching inside `support`, fixing rows
// in order and keeping a row's choice only if the rest can still be matched.
std::optional<std::vector<ItemId>> smallest_matching(const std::vector<std::vector<bool>>& support) {
  const int n = static_cast<int>(support.size());
  std::vector<ItemId> chosen(static_cast<std::size_t>(n), -1);
  auto completable = [&](int from_row, ItemSet used) {
    // Kuhn's augmenting paths on rows [from_row, n) with columns not in `used`
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (int r = from_row; r < n; ++r) {
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      auto augment = [&](auto&& self, int row) -> bool {
        for (int c = 0; c < n; ++c) {
          if (!support[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] || used.contains(c) ||
              seen[static_cast<std::size_t>(c)]) {
            continue;
          }
          seen[static_cast<std::size_t>(c)] = true;
          if (owner[static_cast<std::size_t>(c)] < 0 || self(self, owner[static_cast<std::size_t>(c)])) {
            owner[static_cast<std::size_t>(c)] = row;
            return true;
          }
        }
        return false;
      };
      if (!augment(augment, r)) return false;
    }
    return true;
  };
  ItemSet used;
  for (int r = 0; r < n; ++r) {
    bool placed = false;
    for (int c = 0; c < n && !placed; ++c) {
      if (!support[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] || used.contains(c)) continue;
      if (completable(r + 1, used.with(c))) {
        chosen[static_cast<std::size_t>(r)] = c;
        used.insert(c);
        placed = true;
      }
    }
    if (!placed) return std::nullopt;
  }
  return chosen;
}

}  // namespace

OutcomeDistribution decompose(const BistochasticMatrix& p) {
  const int n = p.size();
  const auto un = static_cast<std::size_t>(n);
  std::vector<ItemVector> rest = p.rows();
  OutcomeDistribution out("birkhoff");
  for (;;) {
    std::vector<std::vector<bool>> support(un, std::vector<bool>(un, false));
    bool any = false;
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t j = 0; j < un; ++j) {
        support[i][j] = rest[i][j].sign() > 0;
        any = any || support[i][j];
      }
    }
    if (!any) break;
    const auto perm = smallest_matching(support);
    if (!perm) throw ConsistencyError("residual matrix has no perfect matching in its support");
    Rational w = rest[0][static_cast<std::size_t>((*perm)[0])];
    for (std::size_t i = 1; i < un; ++i) w = min(w, rest[i][static_cast<std::size_t>((*perm)[i])]);
    for (std::size_t i = 0; i < un; ++i) rest[i][static_cast<std::size_t>((*perm)[i])] -= w;
    out.add(Assignment(*perm), w);
  }
  out.validate();
  return out;
}

}  // namespace ordmatch
