#pragma once

#include <string>
#include <vector>

#include "ordmatch/adversary.hpp"
#include "ordmatch/matrix.hpp"
#include "ordmatch/profile.hpp"

namespace ordmatch::instances {

/// Four players; the eating process gives each player each of two items with
/// probability 1/2.
PreferenceProfile four_player();
BistochasticMatrix four_player_ps();
Assignment four_player_head();
Assignment four_player_tail();

/// Two players with opposite favourites.
PreferenceProfile two_opposite();

/// Five players: three rank m1 over m2, two rank m2 over m1, both on top;
/// everyone ranks m3, m4, m5 after that.
PreferenceProfile five_player();

/// Four players where player 2 can gain by reporting m2 first.
PreferenceProfile misreport();
Order misreport_lie();  // the order player 2 reports

/// Nine players where two aborting players hurt player 1 in the naive variant.
PreferenceProfile nine_player();
/// Fail-stop: players 8 and 9 abort every duel of round 1.
AdversaryStrategy nine_player_attack();

/// Fourteen players where player 4 withdrawing hurts player 1.
PreferenceProfile fourteen_player();
/// Fail-stop: player 4 withdraws before the protocol starts.
AdversaryStrategy fourteen_player_withdraw();

/// Parses rows written one-based, as in the profile files.
PreferenceProfile from_one_based(const std::vector<std::vector<int>>& rows);

}  // namespace ordmatch::instances
