#include "v2n/simenv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace v2n {

void EnvConfig::validate() const {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (action_limit < 1) throw std::invalid_argument("action_limit must be >= 1");
  if (action_limit > n_max) throw std::invalid_argument("action_limit must be <= n_max");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(dirichlet_alpha > 0.0)) throw std::invalid_argument("dirichlet_alpha must be positive");
  if (initial_cpus < 1 || initial_cpus > n_max) {
    throw std::invalid_argument("initial_cpus must lie in [1, n_max]");
  }
}

double StepOutcome::max_load() const {
  return cpu_loads.empty() ? 0.0 : *std::max_element(cpu_loads.begin(), cpu_loads.end());
}

EnvState reset(const EnvConfig& config, const WorkloadSeries& series,
               std::size_t start_index) {
  config.validate();
  if (start_index >= series.size()) {
    throw std::out_of_range("start index " + std::to_string(start_index) +
                            " outside series of length " + std::to_string(series.size()));
  }
  EnvState s;
  s.n_active = config.initial_cpus;
  s.workload = series[start_index];
  s.backlogs.assign(static_cast<std::size_t>(s.n_active), 0.0);
  return s;
}

int clamp_action(const EnvState& state, int action, const EnvConfig& config) {
  if (action < -config.action_limit || action > config.action_limit) {
    throw std::invalid_argument("action " + std::to_string(action) + " outside [-" +
                                std::to_string(config.action_limit) + ", " +
                                std::to_string(config.action_limit) + "]");
  }
  const int target = std::clamp(state.n_active + action, 1, config.n_max);
  return target - state.n_active;
}

std::vector<double> sample_shares(int n, double alpha, Rng& rng) {
  if (n < 1) throw std::invalid_argument("share count must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (n == 1) return {1.0};
  std::vector<double> x(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& v : x) {
    v = rng.gamma(alpha);
    total += v;
  }
  for (auto& v : x) v /= total;
  return x;
}

std::vector<double> remap_backlogs(std::span<const double> backlogs, int n) {
  const auto target = static_cast<std::size_t>(n);
  std::vector<double> out(backlogs.begin(), backlogs.end());
  if (target >= out.size()) {
    out.resize(target, 0.0);
    return out;
  }
  const double pooled = std::accumulate(out.begin() + static_cast<std::ptrdiff_t>(target),
                                        out.end(), 0.0);
  out.resize(target);
  if (pooled > 0.0) {
    const double each = pooled / static_cast<double>(target);
    for (auto& b : out) b += each;
  }
  return out;
}

StepOutcome step_with_shares(const EnvState& state, int action, double next_workload,
                             const EnvConfig& config, std::span<const double> shares) {
  if (!(next_workload >= 0.0) || !std::isfinite(next_workload)) {
    throw std::invalid_argument("workload must be finite and non-negative");
  }
  StepOutcome out;
  out.effective_action = clamp_action(state, action, config);
  const int n = state.n_active + out.effective_action;
  if (shares.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("expected " + std::to_string(n) + " shares, got " +
                                std::to_string(shares.size()));
  }
  const auto prev = remap_backlogs(state.backlogs, n);
  out.shares.assign(shares.begin(), shares.end());
  out.demands.resize(prev.size());
  out.cpu_loads.resize(prev.size());
  std::vector<double> backlog(prev.size());
  double min_load = 1.0;
  double max_backlog = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    const double d = shares[i] * next_workload + prev[i];
    out.demands[i] = d;
    out.cpu_loads[i] = std::min(1.0, d);
    backlog[i] = std::max(0.0, d - 1.0);
    min_load = std::min(min_load, out.cpu_loads[i]);
    max_backlog = std::max(max_backlog, backlog[i]);
  }
  out.reward_min_load = min_load;
  out.reward_max_backlog = max_backlog;
  out.reward = min_load - config.beta * max_backlog;
  out.next_state.n_active = n;
  out.next_state.workload = next_workload;
  out.next_state.backlogs = std::move(backlog);
  return out;
}

StepOutcome step(const EnvState& state, int action, double next_workload,
                 const EnvConfig& config, Rng& rng) {
  const int n = state.n_active + clamp_action(state, action, config);
  const auto shares = sample_shares(n, config.dirichlet_alpha, rng);
  return step_with_shares(state, action, next_workload, config, shares);
}

double EpisodeLog::mean_reward() const {
  if (records.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : records) s += r.outcome.reward;
  return s / static_cast<double>(records.size());
}

double EpisodeLog::mean_active_cpus() const {
  if (records.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : records) s += r.outcome.next_state.n_active;
  return s / static_cast<double>(records.size());
}

namespace {

Observation observe_state(const EnvState& s, std::size_t t, double max_load,
                          const EnvConfig& config) {
  Observation o;
  o.t = t;
  o.n_active = s.n_active;
  o.workload = s.workload;
  o.max_load = max_load;
  o.n_max = config.n_max;
  o.action_limit = config.action_limit;
  return o;
}

}  // namespace

EpisodeLog run_episode(Policy& policy, const WorkloadSeries& series,
                       const EnvConfig& config, Window window, Rng& rng) {
  EpisodeLog log;
  if (window.size() == 0) return log;
  if (window.end + 1 > series.size()) {
    throw std::out_of_range("window [" + std::to_string(window.begin) + ", " +
                            std::to_string(window.end) + ") needs " +
                            std::to_string(window.end + 1) + " values, series has " +
                            std::to_string(series.size()));
  }
  EnvState state = reset(config, series, window.begin);
  Observation obs = observe_state(
      state, window.begin,
      std::min(1.0, state.workload / static_cast<double>(state.n_active)), config);
  policy.begin_episode();
  log.records.reserve(window.size());
  for (std::size_t t = window.begin; t < window.end; ++t) {
    const int action = policy.act(obs);
    StepOutcome out = step(state, action, series[t + 1], config, rng);
    Observation next = observe_state(out.next_state, t + 1, out.max_load(), config);
    if (policy.training()) {
      Transition tr;
      tr.obs = obs;
      tr.action = action;
      tr.effective_action = out.effective_action;
      tr.reward = out.reward;
      tr.next_obs = next;
      policy.observe(tr);
    }
    log.records.push_back({t, state, action, out});
    state = log.records.back().outcome.next_state;
    obs = next;
  }
  return log;
}

void write_episode_csv(std::ostream& out, const EpisodeLog& log) {
  out << "t,N,W,action,effective_action,min_load,max_load,max_backlog,reward\n";
  char buf[256];
  for (const auto& r : log.records) {
    const auto& o = r.outcome;
    std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g\n", r.t + 1,
                  o.next_state.n_active, o.next_state.workload, r.action,
                  o.effective_action, o.reward_min_load, o.max_load(),
                  o.reward_max_backlog, o.reward);
    out << buf;
  }
}

}  // namespace v2n
