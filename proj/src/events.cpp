#include "ordmatch/events.hpp"

#include "ordmatch/errors.hpp"

namespace ordmatch {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::tournament: return "tournament";
    case EventKind::duel: return "duel";
    case EventKind::decision: return "decision";
    case EventKind::assignment: return "assignment";
    case EventKind::rate_update: return "rate-update";
    case EventKind::elimination: return "elimination";
    case EventKind::leftover: return "leftover";
  }
  return "?";
}

Assignment replay_assignment(const std::vector<ProtocolEvent>& log, int n) {
  std::vector<ItemId> item_of(static_cast<std::size_t>(n), -1);
  for (const auto& e : log) {
    if (e.kind != EventKind::assignment && e.kind != EventKind::leftover) continue;
    if (e.player < 0 || e.player >= n) throw ConsistencyError("event names an unknown player");
    if (item_of[static_cast<std::size_t>(e.player)] != -1) {
      throw ConsistencyError("player assigned twice in event log");
    }
    item_of[static_cast<std::size_t>(e.player)] = e.item;
  }
  for (ItemId a : item_of) {
    if (a == -1) throw ConsistencyError("event log leaves a player unassigned");
  }
  return Assignment(std::move(item_of));
}

}  // namespace ordmatch
