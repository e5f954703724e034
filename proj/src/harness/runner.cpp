#include "v2n/harness/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "v2n/agents/lstm_scaler.hpp"
#include "v2n/agents/oracle.hpp"
#include "v2n/agents/registry.hpp"
#include "v2n/harness/plots.hpp"
#include "v2n/harness/results.hpp"

namespace v2n::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

EnvConfig env_for(const Scenario& scenario, std::uint64_t seed) {
  EnvConfig env = scenario.env;
  env.seed = seed;
  return env;
}

}  // namespace

std::vector<std::string> compatibility_warnings(const std::string& kind,
                                                const Scenario& scenario) {
  std::vector<std::string> out;
  if (kind == "qlearn" && scenario.env.action_limit > 1) {
    out.push_back("qlearn keeps its action set {-1, 0, 1}; action_limit " +
                  std::to_string(scenario.env.action_limit) + " is not used");
  }
  return out;
}

std::unique_ptr<agents::Agent> make_scenario_agent(const std::string& kind,
                                                   const Scenario& scenario,
                                                   std::uint64_t seed) {
  return agents::make_agent(kind, scenario.env.action_limit, scenario.env.n_max,
                            scenario.overrides_for(kind), Rng(seed).split("agent"));
}

TrainResult train(const std::string& kind, const Scenario& scenario, const Dataset& data,
                  std::uint64_t seed) {
  scenario.validate();
  const auto start = Clock::now();
  TrainResult result;
  result.warnings = compatibility_warnings(kind, scenario);
  result.agent = make_scenario_agent(kind, scenario, seed);
  const int budget = scenario.episodes_for(kind);

  if (kind == "lstm") {
    if (budget > 0) {
      auto& scaler = dynamic_cast<agents::LstmScaler&>(*result.agent);
      result.learning_curve = scaler.train(data.train, budget);
    }
  } else if (budget > 0) {
    if (data.train.size() < 2) throw std::invalid_argument("train split is too short");
    const Rng root(seed);
    Rng env_rng = root.split("env");
    Rng schedule = root.split("schedule");
    EnvConfig env = env_for(scenario, seed);
    const std::size_t len = scenario.episode_length;
    const std::size_t days = std::max<std::size_t>(1, (data.train.size() - 1) / len);

    auto& agent = *result.agent;
    agent.set_training_horizon(static_cast<std::size_t>(budget) * len);
    agent.set_training(true);
    result.learning_curve.reserve(static_cast<std::size_t>(budget));
    for (int e = 0; e < budget; ++e) {
      const auto day = static_cast<std::size_t>(schedule.integer(0, static_cast<long long>(days) - 1));
      const std::size_t begin = day * len;
      const Window w{begin, std::min(begin + len, data.train.size() - 1)};
      if (scenario.random_start_cpus) env.initial_cpus = static_cast<int>(schedule.integer(1, env.n_max));
      const auto log = run_episode(agent, data.train, env, w, env_rng);
      result.learning_curve.push_back(log.mean_reward());
    }
    agent.set_training(false);
  }
  result.wall_clock = seconds_since(start);
  return result;
}

RunMetrics evaluate(agents::Agent& agent, const Scenario& scenario, const Dataset& data,
                    Window window, std::uint64_t seed) {
  window = checked_test_window(data, window.begin, window.end);
  const auto start = Clock::now();
  if (auto* oracle = dynamic_cast<agents::ClairvoyantPolicy*>(&agent)) {
    oracle->bind(data.test.values);
  }
  const bool was_training = agent.training();
  agent.set_training(false);
  Rng env_rng = Rng(seed).split("eval");

  RunMetrics m;
  m.agent = agent.kind();
  m.seed = seed;
  m.window = window;
  m.log = run_episode(agent, data.test, env_for(scenario, seed), window, env_rng);
  agent.set_training(was_training);

  m.max_load.reserve(m.log.size());
  m.n_active.reserve(m.log.size());
  m.reward.reserve(m.log.size());
  for (const auto& r : m.log.records) {
    m.max_load.push_back(r.outcome.max_load());
    m.n_active.push_back(r.outcome.next_state.n_active);
    m.reward.push_back(r.outcome.reward);
  }
  m.avg_active_cpus = m.log.mean_active_cpus();
  m.avg_reward = m.log.mean_reward();
  m.wall_clock = seconds_since(start);
  return m;
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

ComparisonRow summarize(std::string agent, std::vector<RunMetrics> runs) {
  ComparisonRow row;
  row.agent = std::move(agent);
  std::vector<double> cpus, rewards;
  for (const auto& r : runs) {
    cpus.push_back(r.avg_active_cpus);
    rewards.push_back(r.avg_reward);
  }
  std::tie(row.cpus_mean, row.cpus_std) = mean_std(cpus);
  std::tie(row.reward_mean, row.reward_std) = mean_std(rewards);
  row.runs = std::move(runs);
  return row;
}

RunArtifacts run(const std::string& kind, const Scenario& scenario, const Dataset& data,
                 std::uint64_t seed) {
  RunArtifacts out;
  const Window window = eval_window(scenario, data);
  out.trained = train(kind, scenario, data, seed);
  out.metrics = evaluate(*out.trained.agent, scenario, data, window, seed);
  return out;
}

std::vector<ComparisonRow> compare(const Scenario& scenario, const Dataset& data,
                                   const std::vector<std::string>& kinds,
                                   const std::filesystem::path& out_root) {
  scenario.validate();
  eval_window(scenario, data);
  std::vector<ComparisonRow> rows;
  for (const auto& kind : kinds) {
    std::vector<RunMetrics> runs;
    for (const auto seed : scenario.seeds) {
      auto r = run(kind, scenario, data, seed);
      if (!out_root.empty()) write_run(out_root, scenario, r);
      runs.push_back(std::move(r.metrics));
    }
    rows.push_back(summarize(kind, std::move(runs)));
  }
  if (!out_root.empty()) {
    const auto dir = out_root / scenario.name;
    std::filesystem::create_directories(dir);
    std::ofstream summary(dir / "summary.csv");
    write_summary_csv(summary, rows);
    emit_plots(rows, dir / "plots");
  }
  return rows;
}

}  // namespace v2n::harness
