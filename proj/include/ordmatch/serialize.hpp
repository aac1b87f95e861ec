#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ordmatch/adversary.hpp"
#include "ordmatch/distribution.hpp"
#include "ordmatch/events.hpp"
#include "ordmatch/matrix.hpp"

// JSON forms used by the command-line tool. Players and items are one-based
// on the wire and zero-based in memory.
namespace ordmatch::json {

using Json = nlohmann::ordered_json;

/// {"exact": "n/d", "decimal": "0.500000"}
Json rational(const Rational& r);
/// {"exact": [...], "decimal": [...]}
Json item_vector(const ItemVector& v);
Json matrix(const BistochasticMatrix& p);
/// Item held by each player, one-based.
Json assignment(const Assignment& a);
Json distribution(const OutcomeDistribution& d);
Json event(const ProtocolEvent& e);
Json events(const std::vector<ProtocolEvent>& log);
Json strategy(const AdversaryStrategy& s);

/// Reads an adversary description:
///   {"model": "fail-stop", "corrupted": [8, 9], "timing": "before-open",
///    "rules": [{"actor": 8, "round": 1, "kind": "duel", "action": "abort"}],
///    "declared": {"2": [2, 1, 3, 4]}}
/// "round" and "time" are both accepted for the stamp. Throws InvalidInput on
/// malformed input and StrategyError when the result fails validation.
AdversaryStrategy parse_strategy(const Json& j, int n);
AdversaryStrategy load_strategy(const std::string& path, int n);

}  // namespace ordmatch::json
