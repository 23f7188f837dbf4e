// Command-line front end: trace replay, workload generation, and the
// built-in scenario catalog.
//
// Exit codes: 0 clean, 2 input error, 3 verification violations.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "colocpriv/json_io.hpp"
#include "colocpriv/scenarios.hpp"
#include "colocpriv/trace.hpp"

namespace {

using namespace colocpriv;

Config load_config(const std::string& path) {
  if (path.empty()) return Config{};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return config_from_json(json::parse(in));
}

int run_replay(const std::string& trace_path, const Config& cfg,
               const ReplayOptions& opts, bool concurrent) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!trace_path.empty() && trace_path != "-") {
    file.open(trace_path);
    if (!file) {
      std::cerr << "cannot open trace: " << trace_path << "\n";
      return 2;
    }
    in = &file;
  }

  if (!concurrent) {
    Replayer rp(cfg, opts);
    try {
      rp.run(*in);
    } catch (const TraceError& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    std::cout << rp.output();
    return rp.violations_found() ? 3 : 0;
  }

  // Concurrent mode: publish commands are raced in consecutive pairs and
  // each race is checked against the two sequential orders.
  SocialGraph social;
  PreferenceStore prefs;
  std::vector<Resource> base;
  std::vector<Resource> pending;
  bool all_serializable = true;
  int line_no = 0;

  auto flush_pending = [&]() {
    while (pending.size() >= 2) {
      std::vector<Resource> next;
      const bool ok = serializable_pair(base, pending[0], pending[1], prefs,
                                        social, cfg, nullptr, &next);
      std::cout << json{{"concurrent_pair",
                         {pending[0].rid, pending[1].rid}},
                        {"serializable", ok}}
                       .dump()
                << "\n";
      if (!ok) all_serializable = false;
      base = next;
      pending.erase(pending.begin(), pending.begin() + 2);
    }
  };

  std::string line;
  try {
    while (std::getline(*in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json cmd = json::parse(line);
      const auto op = cmd.at("op").get<std::string>();
      if (op == "add_user") {
        social.add_user(cmd.at("id").get<std::string>());
      } else if (op == "add_friend") {
        social.add_friend(cmd.at("a").get<std::string>(),
                          cmd.at("b").get<std::string>());
      } else if (op == "add_pref") {
        if (prefs.add(preference_from_json(cmd.at("pref")), cfg))
          throw TraceError(line_no, "preference rejected");
      } else if (op == "publish") {
        pending.push_back(resource_from_json(cmd.at("resource")));
        flush_pending();
      } else if (op == "verify") {
        flush_pending();
        if (!pending.empty()) {
          ResourceStore tmp(cfg.d_max);
          for (const auto& r : base) tmp.append_locked(r);
          publish(pending[0], tmp, prefs, social, cfg);
          base = tmp.all();
          pending.clear();
        }
        const auto violations = oracle::check_conditions(
            base, prefs, cfg, oracle::store_horizon(base, cfg),
            opts.literal_eq13);
        json arr = json::array();
        for (const auto& v : violations) arr.push_back(to_json(v));
        std::cout << json{{"verify", line_no}, {"violations", arr}}.dump()
                  << "\n";
        if (!violations.empty()) all_serializable = false;
      } else {
        throw TraceError(line_no, "unknown op: " + op);
      }
    }
    flush_pending();
  } catch (const TraceError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "line " << line_no << ": " << e.what() << "\n";
    return 2;
  }
  return all_serializable ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-location privacy publication simulator"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "config JSON path");

  auto* replay_cmd = app.add_subcommand("replay", "replay a JSONL trace");
  std::string trace_path;
  ReplayOptions opts;
  bool concurrent = false;
  int max_retries = -1;
  replay_cmd->add_option("--trace", trace_path, "trace path (default stdin)");
  replay_cmd->add_flag("--literal-eq13", opts.literal_eq13,
                       "evaluate the indirect overlap clause as written");
  replay_cmd->add_flag("--semantic", opts.semantic,
                       "run the sampled semantic check on verify");
  replay_cmd->add_option("--time-step", opts.time_step,
                         "semantic check time step, seconds");
  replay_cmd->add_option("--grid-res", opts.grid_res,
                         "semantic check spatial resolution, meters");
  replay_cmd->add_option("--max-retries", max_retries,
                         "commit retry bound override");
  replay_cmd->add_flag("--concurrent", concurrent,
                       "race publish pairs and assert serializability");

  auto* gen_cmd = app.add_subcommand("generate", "emit a synthetic trace");
  GenerateParams gp;
  std::string out_path;
  gen_cmd->add_option("--seed", gp.seed, "RNG seed");
  gen_cmd->add_option("--users", gp.n_users, "number of users");
  gen_cmd->add_option("--resources", gp.n_resources, "number of publishes");
  gen_cmd->add_option("--prefs", gp.n_prefs, "number of preferences");
  gen_cmd->add_option("--area-km", gp.area_km, "side of the square area, km");
  gen_cmd->add_option("--out", out_path, "output path (default stdout)");

  auto* scen_cmd = app.add_subcommand("scenario", "run a catalog scenario");
  std::string scenario_name;
  bool list_scenarios = false;
  scen_cmd->add_option("name", scenario_name, "scenario name");
  scen_cmd->add_flag("--list", list_scenarios, "list scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Config cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (replay_cmd->parsed()) {
    if (max_retries >= 0) cfg.max_retries = max_retries;
    return run_replay(trace_path, cfg, opts, concurrent);
  }

  if (gen_cmd->parsed()) {
    if (gp.n_users <= 0 || gp.n_resources < 0 || gp.n_prefs < 0) {
      std::cerr << "sizes must be positive\n";
      return 2;
    }
    const std::string trace = generate_trace(gp, cfg);
    if (out_path.empty()) {
      std::cout << trace;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot open output: " << out_path << "\n";
        return 2;
      }
      out << trace;
    }
    return 0;
  }

  if (scen_cmd->parsed()) {
    const auto& catalog = colocpriv::scenarios::catalog();
    if (list_scenarios) {
      for (const auto& [name, _] : catalog) std::cout << name << "\n";
      return 0;
    }
    auto it = catalog.find(scenario_name);
    if (it == catalog.end()) {
      std::cerr << "unknown scenario: " << scenario_name << "\n";
      return 2;
    }
    const auto result = it->second();
    std::cout << json{{"scenario", scenario_name},
                      {"pass", result.pass},
                      {"detail", result.detail}}
                     .dump()
              << "\n";
    return result.pass ? 0 : 3;
  }
  return 2;
}
