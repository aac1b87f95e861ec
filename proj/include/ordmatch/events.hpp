#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordmatch/adversary.hpp"
#include "ordmatch/index_set.hpp"
#include "ordmatch/matrix.hpp"
#include "ordmatch/rational.hpp"

namespace ordmatch {

enum class EventKind {
  tournament,   // players = candidates, weights = integer weights
  duel,         // players = {first, second}, player = winner
  decision,     // adversary action at a decision point
  assignment,   // player receives item
  rate_update,  // player's rate becomes value
  elimination,  // player detected as corrupted
  leftover,     // player receives item by the leftover rule
};

std::string to_string(EventKind k);

/// One entry of a run's audit log.
struct ProtocolEvent {
  EventKind kind = EventKind::assignment;
  Rational stamp;  // round number or consumption time
  ItemId item = -1;
  PlayerId player = -1;
  std::vector<PlayerId> players;
  std::vector<Integer> weights;
  Rational value;
  std::optional<Action> action;
};

/// Observable history passed to lottery enumeration.
struct TranscriptPrefix {
  std::vector<ProtocolEvent> events;
  Rational stamp;
  ItemId item = -1;
};

/// Final assignment implied by an event log (assignment and leftover events).
Assignment replay_assignment(const std::vector<ProtocolEvent>& log, int n);

}  // namespace ordmatch
