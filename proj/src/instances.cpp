#include "ordmatch/instances.hpp"

namespace ordmatch::instances {

PreferenceProfile from_one_based(const std::vector<std::vector<int>>& rows) {
  std::vector<Order> orders;
  for (const auto& r : rows) {
    Order o;
    for (int a : r) o.push_back(a - 1);
    orders.push_back(std::move(o));
  }
  return PreferenceProfile(std::move(orders));
}

PreferenceProfile four_player() {
  return from_one_based({{1, 3, 2, 4}, {1, 4, 2, 3}, {2, 3, 1, 4}, {2, 4, 1, 3}});
}

BistochasticMatrix four_player_ps() {
  return BistochasticMatrix::from_strings({{"1/2", "0", "1/2", "0"},
                                           {"1/2", "0", "0", "1/2"},
                                           {"0", "1/2", "1/2", "0"},
                                           {"0", "1/2", "0", "1/2"}});
}

Assignment four_player_head() { return Assignment({2, 0, 1, 3}); }
Assignment four_player_tail() { return Assignment({0, 3, 2, 1}); }

PreferenceProfile two_opposite() { return from_one_based({{1, 2}, {2, 1}}); }

PreferenceProfile five_player() {
  return from_one_based({{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {2, 1, 3, 4, 5}, {2, 1, 3, 4, 5}});
}

PreferenceProfile misreport() {
  return from_one_based({{1, 2, 3, 4}, {1, 2, 3, 4}, {2, 3, 4, 1}, {2, 3, 4, 1}});
}

Order misreport_lie() { return {1, 0, 2, 3}; }

PreferenceProfile nine_player() {
  return from_one_based({{1, 2, 3, 4, 5, 6, 7, 8, 9},
                         {1, 2, 6, 4, 5, 7, 8, 9, 3},
                         {1, 2, 6, 4, 5, 7, 8, 9, 3},
                         {1, 2, 6, 4, 5, 7, 8, 9, 3},
                         {1, 2, 6, 4, 5, 7, 8, 9, 3},
                         {5, 2, 3, 7, 8, 6, 9, 1, 4},
                         {5, 2, 3, 7, 8, 6, 9, 1, 4},
                         {5, 3, 6, 7, 8, 9, 1, 2, 4},
                         {5, 3, 6, 7, 8, 9, 1, 2, 4}});
}

AdversaryStrategy nine_player_attack() {
  DecisionPattern p;
  p.stamp = Rational(1);
  p.kind = DecisionKind::duel_abort;
  return scripted_failstop(PlayerSet{}.with(7).with(8), {p});
}

PreferenceProfile fourteen_player() {
  std::vector<std::vector<int>> rows;
  rows.push_back({3, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14});
  rows.push_back({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14});
  rows.push_back({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14});
  rows.push_back({1, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 2, 3});
  // players 5..14 come in pairs with favourite 4, 5, 6, 7, 8; then m2, then
  // the remaining items from 14 down, then m1 and m3 last
  for (int fav = 4; fav <= 8; ++fav) {
    std::vector<int> r{fav, 2};
    for (int a = 14; a >= 4; --a) {
      if (a != fav) r.push_back(a);
    }
    r.push_back(1);
    r.push_back(3);
    rows.push_back(r);
    rows.push_back(r);
  }
  return from_one_based(rows);
}

AdversaryStrategy fourteen_player_withdraw() {
  DecisionPattern p;
  p.kind = DecisionKind::withdraw;
  return scripted_failstop(PlayerSet::single(3), {p});
}

}  // namespace ordmatch::instances
