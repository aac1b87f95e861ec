#include "ordmatch/serialize.hpp"

#include <fstream>

#include "ordmatch/errors.hpp"

namespace ordmatch::json {

namespace {

Json one_based(const std::vector<int>& xs) {
  Json out = Json::array();
  for (int x : xs) out.push_back(x + 1);
  return out;
}

int index_field(const Json& j, const char* name, int n) {
  if (!j.is_number_integer()) throw InvalidInput(std::string("'") + name + "' must be an integer");
  const int v = j.get<int>();
  if (v < 1 || v > n) {
    throw InvalidInput(std::string("'") + name + "' = " + std::to_string(v) + " is outside 1.." +
                       std::to_string(n));
  }
  return v - 1;
}

Rational stamp_field(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw InvalidInput("stamp must be an integer or an \"n/d\" string");
}

std::string string_field(const Json& j, const char* name) {
  if (!j.is_string()) throw InvalidInput(std::string("'") + name + "' must be a string");
  return j.get<std::string>();
}

DecisionPattern parse_rule(const Json& r, int n) {
  if (!r.is_object()) throw InvalidInput("each rule must be an object");
  DecisionPattern p;
  for (const auto& [key, value] : r.items()) {
    if (key == "actor") {
      p.actor = index_field(value, "actor", n);
    } else if (key == "vs") {
      p.vs = index_field(value, "vs", n);
    } else if (key == "item") {
      p.item = index_field(value, "item", n);
    } else if (key == "round" || key == "time" || key == "stamp") {
      p.stamp = stamp_field(value);
    } else if (key == "duel") {
      if (!value.is_number_integer()) throw InvalidInput("'duel' must be an integer");
      p.duel_index = value.get<int>();
    } else if (key == "kind") {
      p.kind = parse_kind(string_field(value, "kind"));
    } else if (key == "winner") {
      p.would_be_winner = index_field(value, "winner", n);
    } else if (key == "action") {
      p.action = parse_action(string_field(value, "action"));
    } else {
      throw InvalidInput("unknown rule field '" + key + "'");
    }
  }
  return p;
}

}  // namespace

Json rational(const Rational& r) { return Json{{"exact", r.str()}, {"decimal", r.decimal()}}; }

Json item_vector(const ItemVector& v) {
  Json exact = Json::array();
  Json dec = Json::array();
  for (const auto& x : v) {
    exact.push_back(x.str());
    dec.push_back(x.decimal());
  }
  return Json{{"exact", exact}, {"decimal", dec}};
}

Json matrix(const BistochasticMatrix& p) {
  Json exact = Json::array();
  Json dec = Json::array();
  for (const auto& row : p.rows()) {
    const Json r = item_vector(row);
    exact.push_back(r["exact"]);
    dec.push_back(r["decimal"]);
  }
  return Json{{"exact", exact}, {"decimal", dec}};
}

Json assignment(const Assignment& a) { return one_based(a.items()); }

Json distribution(const OutcomeDistribution& d) {
  Json outcomes = Json::array();
  for (const auto& [a, w] : d.support()) {
    outcomes.push_back(Json{{"assignment", assignment(a)}, {"probability", rational(w)}});
  }
  return Json{{"provenance", d.provenance()}, {"outcomes", outcomes}};
}

Json event(const ProtocolEvent& e) {
  Json j{{"kind", to_string(e.kind)}, {"stamp", e.stamp.str()}};
  if (e.item >= 0) j["item"] = e.item + 1;
  if (e.player >= 0) j["player"] = e.player + 1;
  if (!e.players.empty()) j["players"] = one_based(e.players);
  if (!e.weights.empty()) {
    Json w = Json::array();
    for (const auto& x : e.weights) w.push_back(x.get_str());
    j["weights"] = w;
  }
  if (e.kind == EventKind::rate_update) j["value"] = e.value.str();
  if (e.action) j["action"] = to_string(*e.action);
  return j;
}

Json events(const std::vector<ProtocolEvent>& log) {
  Json out = Json::array();
  for (const auto& e : log) out.push_back(event(e));
  return out;
}

Json strategy(const AdversaryStrategy& s) {
  Json j{{"model", to_string(s.model())},
         {"corrupted", one_based(s.corrupted().members())},
         {"timing", to_string(s.timing())}};
  Json rules = Json::array();
  for (const auto& p : s.patterns()) {
    Json r = Json::object();
    if (p.actor) r["actor"] = *p.actor + 1;
    if (p.vs) r["vs"] = *p.vs + 1;
    if (p.item) r["item"] = *p.item + 1;
    if (p.stamp) r["stamp"] = p.stamp->str();
    if (p.duel_index) r["duel"] = *p.duel_index;
    if (p.kind) r["kind"] = to_string(*p.kind);
    if (p.would_be_winner) r["winner"] = *p.would_be_winner + 1;
    r["action"] = to_string(p.action);
    rules.push_back(r);
  }
  j["rules"] = rules;
  Json declared = Json::object();
  for (const auto& [i, order] : s.declared()) declared[std::to_string(i + 1)] = one_based(order);
  j["declared"] = declared;
  if (!s.table().empty()) j["table_entries"] = s.table().size();
  return j;
}

AdversaryStrategy parse_strategy(const Json& j, int n) {
  if (!j.is_object()) throw InvalidInput("adversary description must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "model" && key != "corrupted" && key != "timing" && key != "rules" && key != "declared") {
      throw InvalidInput("unknown adversary field '" + key + "'");
    }
  }
  const AdversaryModel model =
      j.contains("model") ? parse_model(string_field(j["model"], "model")) : AdversaryModel::fail_stop;
  PlayerSet corrupted;
  if (j.contains("corrupted")) {
    if (!j["corrupted"].is_array()) throw InvalidInput("'corrupted' must be an array");
    for (const auto& x : j["corrupted"]) corrupted.insert(index_field(x, "corrupted", n));
  }
  const DecisionTiming timing = j.contains("timing") ? parse_timing(string_field(j["timing"], "timing"))
                                                      : DecisionTiming::before_open;
  AdversaryStrategy s(model, corrupted, timing);
  if (j.contains("rules")) {
    if (!j["rules"].is_array()) throw InvalidInput("'rules' must be an array");
    for (const auto& r : j["rules"]) s.add_pattern(parse_rule(r, n));
  }
  if (j.contains("declared")) {
    if (!j["declared"].is_object()) throw InvalidInput("'declared' must be an object");
    for (const auto& [who, order] : j["declared"].items()) {
      int i = 0;
      try {
        i = std::stoi(who);
      } catch (const std::exception&) {
        throw InvalidInput("declared player '" + who + "' is not a number");
      }
      if (i < 1 || i > n) throw InvalidInput("declared player " + who + " is outside 1.." + std::to_string(n));
      if (!order.is_array()) throw InvalidInput("declared order must be an array");
      Order o;
      for (const auto& x : order) o.push_back(index_field(x, "declared item", n));
      validate_order(o, n);
      s.declare(i - 1, std::move(o));
    }
  }
  s.validate(n);
  return s;
}

AdversaryStrategy load_strategy(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open adversary file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("adversary file '" + path + "': " + e.what());
  }
  return parse_strategy(j, n);
}

}  // namespace ordmatch::json
