#include "ordmatch/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "ordmatch/analysis.hpp"
#include "ordmatch/errors.hpp"
#include "ordmatch/instances.hpp"
#include "ordmatch/mechanisms.hpp"
#include "ordmatch/serialize.hpp"

namespace ordmatch::cli {

namespace {

using json::Json;

std::vector<int> parse_list(const std::string& text, int n, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InvalidInput(std::string(what) + ": '" + tok + "' is not a number");
    }
    if (v < 1 || v > n) throw InvalidInput(std::string(what) + ": " + std::to_string(v) + " is outside 1.." + std::to_string(n));
    out.push_back(v - 1);
  }
  return out;
}

PlayerId player_arg(int one_based, int n) {
  if (one_based < 1 || one_based > n) {
    throw InvalidInput("player " + std::to_string(one_based) + " is outside 1.." + std::to_string(n));
  }
  return one_based - 1;
}

Json prefixes_json(const ItemVector& prefix) {
  Json out = json::item_vector(prefix);
  return out;
}

Json shortfall_json(const PrefixShortfall& s) {
  return Json{{"prefix", s.length}, {"value", json::rational(s.p_sum)}, {"required", json::rational(s.q_sum)}};
}

BistochasticMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("matrix file '" + path + "': " + e.what());
  }
  const Json& rows = j.is_object() && j.contains("exact") ? j["exact"] : j;
  if (!rows.is_array()) throw InvalidInput("matrix must be an array of rows");
  std::vector<std::vector<std::string>> text;
  for (const auto& r : rows) {
    if (!r.is_array()) throw InvalidInput("matrix row must be an array");
    std::vector<std::string> row;
    for (const auto& x : r) {
      if (x.is_string()) row.push_back(x.get<std::string>());
      else if (x.is_number_integer()) row.push_back(std::to_string(x.get<long>()));
      else throw InvalidInput("matrix entries must be \"n/d\" strings");
    }
    text.push_back(std::move(row));
  }
  return BistochasticMatrix::from_strings(text);
}

/// Matrix from a mechanism or a protocol's honest run.
BistochasticMatrix source_matrix(const std::string& source, const PreferenceProfile& profile, Budget& budget) {
  if (source == "ps") return ps_matrix(profile);
  if (source == "rp") return rp_matrix(profile);
  return expected_matrix(parse_protocol(source), profile, AdversaryStrategy::honest(), budget);
}

RowOracle source_rows(const std::string& source, Budget& budget) {
  if (source == "ps") return ps_rows();
  if (source == "rp") return rp_rows();
  return protocol_rows(parse_protocol(source), budget);
}

const std::vector<std::string> kSources{"ps", "rp", "pp", "naivepp", "opsvar", "ops"};
const std::vector<std::string> kProtocols{"pp", "naivepp", "opsvar", "ops"};

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass;
};

Json checks_json(const std::vector<Check>& checks, bool& all) {
  Json out = Json::array();
  all = true;
  for (const auto& c : checks) {
    out.push_back(Json{{"check", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
    all = all && c.pass;
  }
  return out;
}

Check equal_check(const std::string& name, const Rational& expected, const Rational& actual) {
  return {name, expected.str(), actual.str(), expected == actual};
}

Rational top(const ItemVector& row, const Order& order, int ell) {
  return prefix_sums(row, order)[static_cast<std::size_t>(ell - 1)];
}

std::vector<Check> reproduce_ex_ps() {
  const auto profile = instances::four_player();
  const auto p = ps_matrix(profile);
  const auto expected = instances::four_player_ps();
  OutcomeDistribution want;
  want.add(instances::four_player_head(), Rational(1, 2));
  want.add(instances::four_player_tail(), Rational(1, 2));
  const auto d = decompose(p);
  std::string got;
  for (const auto& [a, w] : d.support()) got += json::assignment(a).dump() + ":" + w.str() + " ";
  return {
      {"ps matrix", "printed matrix", p == expected ? "printed matrix" : json::matrix(p).dump(), p == expected},
      {"decomposition", "head 1/2, tail 1/2", got, d == want},
      {"ordinally efficient", "true", is_ordinally_efficient(p, profile) ? "true" : "false",
       is_ordinally_efficient(p, profile)},
      {"strong equal treatment", "true",
       check_equal_treatment(p, profile, TreatmentStrength::strong).holds ? "true" : "false",
       check_equal_treatment(p, profile, TreatmentStrength::strong).holds},
  };
}

std::vector<Check> reproduce_ex_onlineps(Budget& budget) {
  const auto profile = instances::five_player();
  const Order& order = profile.order(0);
  const auto honest = AdversaryStrategy::honest();
  const auto ops = expected_row(Protocol::online_ps, profile, honest, 0, budget);
  const auto var = expected_row(Protocol::online_ps_var, profile, honest, 0, budget);
  const auto ops_verdict = check_uniform_dominance(ops, order);
  const auto var_verdict = check_uniform_dominance(var, order);
  const int fail_at = ops_verdict.shortfall ? ops_verdict.shortfall->length : 0;
  return {
      equal_check("ops: player 1 top-2", Rational(7, 18), top(ops, order, 2)),
      {"ops: uniform dominance fails at prefix", "2", std::to_string(fail_at), fail_at == 2},
      {"opsvar: uniform dominance", "holds", var_verdict.holds ? "holds" : "fails", var_verdict.holds},
      equal_check("opsvar: player 1 top-2", Rational(2, 5), top(var, order, 2)),
  };
}

std::vector<Check> reproduce_ex_naivepp(Budget& budget) {
  const auto profile = instances::nine_player();
  const Order& order = profile.order(0);
  const auto honest = expected_row(Protocol::naive_pp, profile, AdversaryStrategy::honest(), 0, budget);
  const auto attacked = expected_row(Protocol::naive_pp, profile, instances::nine_player_attack(), 0, budget);
  const Rational h = top(honest, order, 4);
  const Rational a = top(attacked, order, 4);
  return {
      equal_check("naivepp honest: player 1 top-4", Rational(1), h),
      {"naivepp attacked: player 1 top-4 below 1", "< 1/1", a.str(), a < Rational(1)},
      equal_check("naivepp attacked: player 1 top-4 (pinned)", Rational(22, 25), a),
  };
}

std::vector<Check> reproduce_ex_14player(Budget& budget) {
  const auto profile = instances::fourteen_player();
  const ItemId m3 = 2;
  const auto v = check_maximin(Protocol::online_ps_var, profile, 0, instances::fourteen_player_withdraw(), budget);
  const int at = v.violation ? v.violation->length : 0;
  return {
      equal_check("honest: P[player 1 gets m3]", Rational(1132927, 1499784), v.honest_row[m3]),
      equal_check("player 4 withdraws: P[player 1 gets m3]", Rational(77, 102), v.attacked_row[m3]),
      {"maximin violated at prefix", "1", std::to_string(at), at == 1},
  };
}

std::vector<Check> reproduce_ex_truthful(Budget& budget) {
  const auto profile = instances::misreport();
  const Order& order = profile.order(1);
  const auto var = check_truthfulness_gain(protocol_rows(Protocol::online_ps_var, budget), profile, 1,
                                           instances::misreport_lie());
  const auto ops = check_truthfulness_gain(protocol_rows(Protocol::online_ps, budget), profile, 1,
                                           instances::misreport_lie());
  const Rational var_lie = top(var.lying_row, order, 2);
  return {
      equal_check("opsvar truthful: player 2 top-2", Rational(1, 2), top(var.truthful_row, order, 2)),
      equal_check("ops lying: player 2 top-2", Rational(5, 9), top(ops.lying_row, order, 2)),
      {"opsvar lying: player 2 top-2 at least 5/9", ">= 5/9", var_lie.str(), var_lie >= Rational(5, 9)},
      {"opsvar not strongly truthful", "true", var.truth_dominates ? "false" : "true", !var.truth_dominates},
  };
}

void emit(const Json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw InvalidInput("cannot write '" + out_path + "'");
  f << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact analysis of ordinal assignment mechanisms and protocols", "ordmatch"};
  app.require_subcommand(1);
  std::size_t budget_limit = 0;
  std::string out_path;
  app.add_option("--budget", budget_limit, "Maximum number of enumerated states");
  app.add_option("--out", out_path, "Write the JSON report to this file");

  // mechanism
  auto* mech = app.add_subcommand("mechanism", "Matrix of a centralized mechanism");
  std::string mech_name, mech_profile, ranking;
  bool want_decompose = false;
  mech->add_option("name", mech_name)->required()->check(CLI::IsMember({"rp", "ps", "sd"}));
  mech->add_option("profile", mech_profile)->required();
  mech->add_option("--ranking", ranking, "Serial dictatorship order, e.g. 1,2,3,4");
  mech->add_flag("--decompose", want_decompose, "Also print a distribution over assignments");

  // protocol
  auto* proto = app.add_subcommand("protocol", "Run or enumerate a protocol");
  std::string proto_name, proto_profile, mode = "exact", adversary_path;
  std::uint64_t seed = 1;
  int player = 0;
  proto->add_option("name", proto_name)->required()->check(CLI::IsMember(kProtocols));
  proto->add_option("profile", proto_profile)->required();
  proto->add_option("--mode", mode)->check(CLI::IsMember({"sample", "exact"}));
  proto->add_option("--seed", seed);
  proto->add_option("--adversary", adversary_path, "Adversary JSON file");
  proto->add_option("--player", player, "Report only this player's row (exact mode)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a property");
  verify->require_subcommand(1);
  std::string v_profile, v_protocol = "pp", v_source = "ps", v_matrix, v_assignment, v_report;
  std::string v_adversary;
  int v_player = 1;
  bool worst_case = false, all_declared = false, weak = false;

  auto* v_maximin = verify->add_subcommand("maximin", "Honest row dominated by the attacked row");
  v_maximin->add_option("profile", v_profile)->required();
  v_maximin->add_option("--protocol", v_protocol)->check(CLI::IsMember(kProtocols));
  v_maximin->add_option("--player", v_player);
  v_maximin->add_option("--adversary", v_adversary);
  v_maximin->add_flag("--worst-case", worst_case, "Minimize over every decision of the adversary");

  auto* v_uniform = verify->add_subcommand("uniform", "Top-l mass at least l/n");
  v_uniform->add_option("profile", v_profile)->required();
  v_uniform->add_option("--protocol", v_protocol)->check(CLI::IsMember(kProtocols));
  v_uniform->add_option("--player", v_player);
  v_uniform->add_option("--adversary", v_adversary);
  v_uniform->add_flag("--worst-case", worst_case, "Minimize over every decision of the adversary");
  v_uniform->add_flag("--all-declared", all_declared,
                      "Byzantine others, minimized over every declared order and decision");

  auto* v_stable = verify->add_subcommand("stable", "No trading cycle in an assignment");
  v_stable->add_option("profile", v_profile)->required();
  v_stable->add_option("--assignment", v_assignment, "Item of each player, e.g. 1,4,2,3")->required();

  auto add_matrix_source = [&](CLI::App* sub) {
    sub->add_option("profile", v_profile)->required();
    sub->add_option("--source", v_source, "Mechanism or protocol producing the matrix")
        ->check(CLI::IsMember(kSources));
    sub->add_option("--matrix", v_matrix, "JSON matrix file instead of --source");
  };
  auto* v_ordeff = verify->add_subcommand("ordeff", "Ordinal efficiency");
  add_matrix_source(v_ordeff);
  auto* v_equal = verify->add_subcommand("equal", "Equal treatment");
  add_matrix_source(v_equal);
  v_equal->add_flag("--weak", weak, "Weak instead of strong equal treatment");

  auto* v_truthful = verify->add_subcommand("truthful", "A misreport does not improve a player's row");
  v_truthful->add_option("profile", v_profile)->required();
  v_truthful->add_option("--source", v_source)->check(CLI::IsMember(kSources));
  v_truthful->add_option("--player", v_player);
  v_truthful->add_option("--report", v_report, "Reported order, e.g. 2,1,3,4")->required();

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "Check a built-in example against its known values");
  std::string example;
  repro->add_option("example", example)
      ->required()
      ->check(CLI::IsMember({"ex-ps", "ex-onlineps", "ex-naivepp", "ex-14player", "ex-truthful"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kUsage;
  }

  try {
    Budget budget(budget_limit > 0 ? budget_limit : Budget::default_limit());
    Json report;
    bool pass = true;

    if (mech->parsed()) {
      const auto profile = PreferenceProfile::load(mech_profile);
      const int n = profile.size();
      report = Json{{"command", "mechanism"}, {"mechanism", mech_name}, {"n", n}};
      if (mech_name == "sd") {
        std::vector<PlayerId> order;
        if (ranking.empty()) {
          for (int i = 0; i < n; ++i) order.push_back(i);
        } else {
          order = parse_list(ranking, n, "--ranking");
        }
        const auto a = serial_dictatorship(profile, order);
        report["ranking"] = Json::array();
        for (PlayerId i : order) report["ranking"].push_back(i + 1);
        report["assignment"] = json::assignment(a);
        if (want_decompose) report["decomposition"] = json::distribution(OutcomeDistribution::point(a));
      } else {
        const auto p = mech_name == "ps" ? ps_matrix(profile) : rp_matrix(profile);
        report["matrix"] = json::matrix(p);
        if (want_decompose) report["decomposition"] = json::distribution(decompose(p));
      }
    } else if (proto->parsed()) {
      const auto profile = PreferenceProfile::load(proto_profile);
      const Protocol protocol = parse_protocol(proto_name);
      const auto strategy = adversary_path.empty() ? AdversaryStrategy::honest()
                                                   : json::load_strategy(adversary_path, profile.size());
      report = Json{{"command", "protocol"}, {"protocol", proto_name}, {"mode", mode},
                    {"adversary", json::strategy(strategy)}};
      if (mode == "sample") {
        if (proto->count("--player")) throw InvalidInput("--player applies to exact mode only");
        const auto run = sample_protocol(protocol, profile, strategy, seed);
        report["seed"] = seed;
        report["assignment"] = json::assignment(run.assignment);
        report["log"] = json::events(run.log);
      } else if (proto->count("--player")) {
        const PlayerId i = player_arg(player, profile.size());
        std::size_t states = 0;
        const auto row = expected_row(protocol, profile, strategy, i, budget, &states);
        report["player"] = player;
        report["row"] = json::item_vector(row);
        report["prefix_sums"] = prefixes_json(prefix_sums(row, profile.order(i)));
        report["states"] = states;
      } else {
        const auto d = exact_distribution(protocol, profile, strategy, budget);
        report["distribution"] = json::distribution(d);
        report["matrix"] = json::matrix(induced_matrix(d));
      }
    } else if (verify->parsed()) {
      const auto profile = PreferenceProfile::load(v_profile);
      const int n = profile.size();
      report = Json{{"command", "verify"}};
      if (v_maximin->parsed()) {
        const PlayerId i0 = player_arg(v_player, n);
        const Protocol protocol = parse_protocol(v_protocol);
        AdversaryStrategy strategy = v_adversary.empty()
                                         ? AdversaryStrategy(AdversaryModel::fail_stop, PlayerSet::full(n).without(i0))
                                         : json::load_strategy(v_adversary, n);
        const bool minimize = worst_case || v_adversary.empty();
        const auto v = minimize ? check_maximin_all(protocol, profile, i0, strategy, budget)
                                : check_maximin(protocol, profile, i0, strategy, budget);
        report["property"] = "maximin";
        report["protocol"] = v_protocol;
        report["player"] = v_player;
        report["adversary"] = json::strategy(strategy);
        report["worst_case"] = minimize;
        report["honest_row"] = json::item_vector(v.honest_row);
        if (!v.attacked_row.empty()) report["attacked_row"] = json::item_vector(v.attacked_row);
        report["honest_prefix"] = prefixes_json(v.honest_prefix);
        report["attacked_prefix"] = prefixes_json(v.attacked_prefix);
        if (v.violation) report["violation"] = shortfall_json(*v.violation);
        pass = v.secure;
      } else if (v_uniform->parsed()) {
        const PlayerId i0 = player_arg(v_player, n);
        const Protocol protocol = parse_protocol(v_protocol);
        const Order& order = profile.order(i0);
        ItemVector prefix;
        report["property"] = "uniform";
        report["protocol"] = v_protocol;
        report["player"] = v_player;
        if (all_declared) {
          prefix = uniform_worst_prefixes(protocol, n, i0, order, budget);
          report["adversary"] = "byzantine, all declared orders";
        } else {
          const auto strategy =
              v_adversary.empty() ? AdversaryStrategy::honest() : json::load_strategy(v_adversary, n);
          report["adversary"] = json::strategy(strategy);
          if (worst_case) {
            prefix = worst_case_prefixes(protocol, profile, strategy, i0, order, budget);
          } else {
            const auto row = expected_row(protocol, profile, strategy, i0, budget);
            report["row"] = json::item_vector(row);
            prefix = prefix_sums(row, order);
          }
        }
        report["prefix"] = prefixes_json(prefix);
        for (int ell = 1; ell <= n; ++ell) {
          const Rational need(ell, n);
          if (prefix[static_cast<std::size_t>(ell - 1)] < need) {
            report["violation"] = shortfall_json({ell, prefix[static_cast<std::size_t>(ell - 1)], need});
            pass = false;
            break;
          }
        }
      } else if (v_stable->parsed()) {
        const Assignment a(parse_list(v_assignment, n, "--assignment"));
        pass = is_stable(a, profile);
        report["property"] = "stable";
        report["assignment"] = json::assignment(a);
      } else if (v_ordeff->parsed() || v_equal->parsed()) {
        const auto p = v_matrix.empty() ? source_matrix(v_source, profile, budget) : load_matrix(v_matrix);
        if (p.size() != n) throw InvalidInput("matrix and profile sizes differ");
        report["source"] = v_matrix.empty() ? v_source : v_matrix;
        report["matrix"] = json::matrix(p);
        if (v_ordeff->parsed()) {
          report["property"] = "ordinal-efficiency";
          pass = is_ordinally_efficient(p, profile);
          if (!pass) {
            if (auto better = find_dominating_exchange(p, profile)) report["dominated_by"] = json::matrix(*better);
          }
        } else {
          report["property"] = weak ? "weak-equal-treatment" : "strong-equal-treatment";
          const auto v = check_equal_treatment(p, profile, weak ? TreatmentStrength::weak : TreatmentStrength::strong);
          pass = v.holds;
          if (!pass) {
            report["witness"] = Json{{"players", {v.first + 1, v.second + 1}},
                                     {"prefix", v.prefix},
                                     {"position", v.position}};
          }
        }
      } else if (v_truthful->parsed()) {
        const PlayerId i = player_arg(v_player, n);
        const Order reported = parse_list(v_report, n, "--report");
        const auto v = check_truthfulness_gain(source_rows(v_source, budget), profile, i, reported);
        report["property"] = "truthfulness";
        report["source"] = v_source;
        report["player"] = v_player;
        report["truthful_row"] = json::item_vector(v.truthful_row);
        report["lying_row"] = json::item_vector(v.lying_row);
        report["truthful_prefix"] = prefixes_json(v.truthful_prefix);
        report["lying_prefix"] = prefixes_json(v.lying_prefix);
        report["strict_gain"] = v.strict_gain;
        if (v.first_gain_prefix > 0) report["first_gain_prefix"] = v.first_gain_prefix;
        pass = v.truth_dominates;
      }
      report["pass"] = pass;
    } else if (repro->parsed()) {
      std::vector<Check> checks;
      if (example == "ex-ps") checks = reproduce_ex_ps();
      else if (example == "ex-onlineps") checks = reproduce_ex_onlineps(budget);
      else if (example == "ex-naivepp") checks = reproduce_ex_naivepp(budget);
      else if (example == "ex-14player") checks = reproduce_ex_14player(budget);
      else checks = reproduce_ex_truthful(budget);
      report = Json{{"command", "reproduce"}, {"example", example}};
      report["checks"] = checks_json(checks, pass);
      report["pass"] = pass;
    }
    emit(report, out_path, out);
    return pass ? kPass : kViolation;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << " (" << e.count() << " reached)\n";
    return kBudget;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StrategyError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kViolation;
  }
}

}  // namespace ordmatch::cli
