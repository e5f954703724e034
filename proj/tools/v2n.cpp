// Command-line entry point: trace generation, training, evaluation,
// multi-agent comparison and the gradient oracle suite.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "v2n/agents/registry.hpp"
#include "v2n/harness/results.hpp"
#include "v2n/harness/runner.hpp"
#include "v2n/harness/scenario.hpp"
#include "v2n/neural/gradcheck.hpp"
#include "v2n/trace.hpp"

namespace {

using namespace v2n;
using namespace v2n::harness;

struct ScenarioFlags {
  std::string config;
  std::optional<int> action_limit;
  std::optional<int> episodes;
  std::optional<int> days;
  std::optional<std::size_t> eval_offset;
  std::optional<std::size_t> eval_length;
  std::optional<std::string> name;
  std::optional<std::string> trace_file;
  std::string results;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "Scenario JSON file");
    app->add_option("--action-limit", action_limit, "Overrides env.action_limit");
    app->add_option("--episodes", episodes, "Overrides the training budget of the chosen agents");
    app->add_option("--days", days, "Overrides trace.days (synthetic source)");
    app->add_option("--trace", trace_file, "Use a CSV trace file as the source");
    app->add_option("--eval-offset", eval_offset, "Overrides eval.offset");
    app->add_option("--eval-length", eval_length, "Overrides eval.length");
    app->add_option("--name", name, "Overrides the scenario name");
    app->add_option("--results", results, "Results root (default $V2N_RESULTS_DIR or ./results)");
  }

  Scenario build(const std::vector<std::string>& kinds) const {
    nlohmann::json j = nlohmann::json::object();
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw std::runtime_error("cannot open config " + config);
      j = nlohmann::json::parse(in);
    }
    if (action_limit) {
      j["env"]["action_limit"] = *action_limit;
      if (!name && !j.contains("name")) j["name"] = "limit_" + std::to_string(*action_limit);
    }
    if (episodes) {
      for (const auto& k : kinds) j["episodes"][k] = *episodes;
    }
    if (days) j["trace"]["days"] = *days;
    if (trace_file) {
      j["trace"]["source"] = "file";
      j["trace"]["path"] = *trace_file;
    }
    if (eval_offset) j["eval"]["offset"] = *eval_offset;
    if (eval_length) j["eval"]["length"] = *eval_length;
    if (name) j["name"] = *name;
    return scenario_from_json(j);
  }

  std::filesystem::path root() const {
    return results.empty() ? results_root() : std::filesystem::path(results);
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Window parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("window must be START:END");
  std::size_t used = 0;
  const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
  const auto begin = std::stoull(a, &used);
  if (used != a.size()) throw std::invalid_argument("bad window start '" + a + "'");
  const auto end = std::stoull(b, &used);
  if (used != b.size()) throw std::invalid_argument("bad window end '" + b + "'");
  return {begin, end};
}

void print_metrics(const Scenario& s, const RunMetrics& m) {
  write_metrics_csv(std::cout, s, m);
}

void check_kind(const std::string& kind) {
  const auto& kinds = agents::agent_kinds();
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
    throw std::invalid_argument("unknown agent '" + kind + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertical CPU autoscaling simulator and agents"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-trace", "Write a synthetic vehicle-count trace");
  int gen_days = 35;
  std::uint64_t gen_seed = 2020;
  std::string gen_out;
  gen->add_option("--days", gen_days, "Number of days")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output CSV")->required();

  auto* tr = app.add_subcommand("train", "Train one agent and evaluate it");
  ScenarioFlags train_flags;
  train_flags.add_to(tr);
  std::string train_agent;
  std::uint64_t train_seed = 1;
  tr->add_option("--agent", train_agent, "ddpg|a2c|qlearn|pi|lstm|oracle")->required();
  tr->add_option("--seed", train_seed, "Run seed");

  auto* ev = app.add_subcommand("evaluate", "Evaluate a checkpoint on a test-split window");
  std::string ckpt;
  std::string window_text;
  std::string ev_trace_out;
  ev->add_option("--checkpoint", ckpt, "checkpoint.json from a training run")->required();
  ev->add_option("--window", window_text, "START:END in test-split slots");
  ev->add_option("--trace-out", ev_trace_out, "Write the per-step trace CSV here");

  auto* cmp = app.add_subcommand("compare", "Train and evaluate several agents over seeds");
  ScenarioFlags cmp_flags;
  cmp_flags.add_to(cmp);
  std::string cmp_agents = "ddpg,a2c,qlearn,pi,lstm,oracle";
  std::string cmp_seeds;
  cmp->add_option("--agents", cmp_agents, "Comma-separated agent list");
  cmp->add_option("--seeds", cmp_seeds, "Comma-separated seeds (overrides config)");

  auto* gc = app.add_subcommand("gradcheck", "Finite-difference checks of the neural kernels");
  double gc_tol = 1e-4;
  std::uint64_t gc_seed = 1;
  gc->add_option("--tolerance", gc_tol, "Maximum relative error");
  gc->add_option("--seed", gc_seed, "Seed for random networks and inputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      write_trace(gen_out, generate_synthetic(gen_days, gen_seed));
      std::cout << "wrote " << gen_days * kSlotsPerDay << " slots to " << gen_out << '\n';
      return 0;
    }

    if (*tr) {
      check_kind(train_agent);
      const Scenario s = train_flags.build({train_agent});
      for (const auto& w : compatibility_warnings(train_agent, s)) {
        std::cerr << "warning: " << w << '\n';
      }
      const Dataset data = build_dataset(s);
      const auto r = run(train_agent, s, data, train_seed);
      const auto dir = write_run(train_flags.root(), s, r);
      print_metrics(s, r.metrics);
      std::cerr << "trained in " << r.trained.wall_clock << " s; results in " << dir.string()
                << '\n';
      return 0;
    }

    if (*ev) {
      std::ifstream in(ckpt);
      if (!in) throw std::runtime_error("cannot open checkpoint " + ckpt);
      const auto j = nlohmann::json::parse(in);
      const Scenario s = scenario_from_json(j.at("scenario"));
      const auto seed = j.at("seed").get<std::uint64_t>();
      auto agent = agents::agent_from_json(j.at("agent"));
      const Dataset data = build_dataset(s);
      const Window w = window_text.empty() ? eval_window(s, data) : parse_window(window_text);
      const auto m = evaluate(*agent, s, data, w, seed);
      print_metrics(s, m);
      if (!ev_trace_out.empty()) {
        std::ofstream out(ev_trace_out);
        if (!out) throw std::runtime_error("cannot write " + ev_trace_out);
        write_episode_csv(out, m.log);
      }
      return 0;
    }

    if (*cmp) {
      const auto kinds = split_list(cmp_agents);
      for (const auto& k : kinds) check_kind(k);
      Scenario s = cmp_flags.build(kinds);
      if (!cmp_seeds.empty()) {
        s.seeds.clear();
        for (const auto& t : split_list(cmp_seeds)) s.seeds.push_back(std::stoull(t));
      }
      s.validate();
      for (const auto& k : kinds) {
        for (const auto& w : compatibility_warnings(k, s)) std::cerr << "warning: " << w << '\n';
      }
      const Dataset data = build_dataset(s);
      const auto root = cmp_flags.root();
      const auto rows = compare(s, data, kinds, root);
      write_summary_csv(std::cout, rows);
      std::cerr << "results in " << (root / s.name).string() << '\n';
      return 0;
    }

    if (*gc) {
      bool ok = true;
      for (const auto& c : neural::standard_gradient_suite(gc_seed)) {
        const bool pass = c.result.max_relative_error < gc_tol;
        ok = ok && pass;
        std::printf("%-18s %s  max_rel_err=%.3e  entries=%zu\n", c.name.c_str(),
                    pass ? "PASS" : "FAIL", c.result.max_relative_error, c.result.checked);
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
