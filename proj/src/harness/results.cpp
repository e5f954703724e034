#include "v2n/harness/results.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace v2n::harness {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

}  // namespace

std::filesystem::path results_root(const std::filesystem::path& fallback) {
  const char* env = std::getenv(kResultsEnv);
  if (env != nullptr && *env != '\0') return env;
  return fallback;
}

std::filesystem::path run_dir(const std::filesystem::path& root, const std::string& scenario,
                              const std::string& agent, std::uint64_t seed) {
  return root / scenario / agent / std::to_string(seed);
}

void write_metrics_csv(std::ostream& out, const Scenario& scenario, const RunMetrics& m) {
  out << "agent,scenario,seed,action_limit,window_begin,window_end,avg_active_cpus,avg_reward\n";
  out << m.agent << ',' << scenario.name << ',' << m.seed << ',' << scenario.env.action_limit
      << ',' << m.window.begin << ',' << m.window.end << ',' << fmt(m.avg_active_cpus) << ','
      << fmt(m.avg_reward) << '\n';
}

void write_learning_curve_csv(std::ostream& out, const std::string& kind,
                              const std::vector<double>& curve) {
  out << (kind == "lstm" ? "epoch,mse\n" : "episode,mean_reward\n");
  for (std::size_t i = 0; i < curve.size(); ++i) out << i << ',' << fmt(curve[i]) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "agent,seeds,avg_active_cpus_mean,avg_active_cpus_std,avg_reward_mean,avg_reward_std\n";
  for (const auto& r : rows) {
    out << r.agent << ',' << r.runs.size() << ',' << fmt(r.cpus_mean) << ','
        << fmt(r.cpus_std) << ',' << fmt(r.reward_mean) << ',' << fmt(r.reward_std) << '\n';
  }
}

nlohmann::json checkpoint_json(const Scenario& scenario, std::uint64_t seed,
                               const agents::Agent& agent) {
  return {{"scenario", to_json(scenario)}, {"seed", seed}, {"agent", agent.to_json()}};
}

std::filesystem::path write_run(const std::filesystem::path& root, const Scenario& scenario,
                                const RunArtifacts& run) {
  const auto& m = run.metrics;
  const auto dir = run_dir(root, scenario.name, m.agent, m.seed);
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(out, scenario, m);
  }
  {
    auto out = open_out(dir / "trace.csv");
    write_episode_csv(out, m.log);
  }
  {
    auto out = open_out(dir / "learning_curve.csv");
    write_learning_curve_csv(out, m.agent, run.trained.learning_curve);
  }
  {
    auto out = open_out(dir / "checkpoint.json");
    out << checkpoint_json(scenario, m.seed, *run.trained.agent).dump() << '\n';
  }
  {
    auto out = open_out(dir / "timing.json");
    out << nlohmann::json{{"train_seconds", run.trained.wall_clock},
                          {"eval_seconds", m.wall_clock}}.dump(2)
        << '\n';
  }
  return dir;
}

}  // namespace v2n::harness
