#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "v2n/policy.hpp"
#include "v2n/rng.hpp"
#include "v2n/trace.hpp"

namespace v2n {

struct EnvConfig {
  int n_max = 40;
  double beta = 1.0;
  double gamma = 0.99;
  double dirichlet_alpha = 1000.0;
  int action_limit = 5;
  int initial_cpus = 1;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct EnvState {
  int n_active = 1;
  double workload = 0.0;
  std::vector<double> backlogs;  // one entry per active CPU
};

struct StepOutcome {
  EnvState next_state;
  std::vector<double> cpu_loads;
  std::vector<double> demands;  // unclipped x_i * W + B_prev_i
  std::vector<double> shares;
  double reward = 0.0;
  double reward_min_load = 0.0;
  double reward_max_backlog = 0.0;
  int effective_action = 0;

  double max_load() const;
};

EnvState reset(const EnvConfig& config, const WorkloadSeries& series,
               std::size_t start_index);

/// Nearest action keeping 1 <= N + a <= n_max. Throws std::invalid_argument
/// when `action` lies outside [-action_limit, action_limit].
int clamp_action(const EnvState& state, int action, const EnvConfig& config);

/// Symmetric Dirichlet(alpha) draw of length n via normalized Gamma draws.
std::vector<double> sample_shares(int n, double alpha, Rng& rng);

/// Moves backlog onto `n` CPUs: new CPUs start empty, removed CPUs' backlog
/// is spread uniformly over the survivors.
std::vector<double> remap_backlogs(std::span<const double> backlogs, int n);

StepOutcome step(const EnvState& state, int action, double next_workload,
                 const EnvConfig& config, Rng& rng);

/// Same transition with caller-supplied shares (length must equal the
/// post-action CPU count).
StepOutcome step_with_shares(const EnvState& state, int action, double next_workload,
                             const EnvConfig& config, std::span<const double> shares);

/// Step range [begin, end) over a series. Step k observes values[k] and
/// reveals values[k + 1], so `end` must not exceed size() - 1.
struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end > begin ? end - begin : 0; }
};

struct EpisodeRecord {
  std::size_t t = 0;
  EnvState state;
  int action = 0;
  StepOutcome outcome;
};

struct EpisodeLog {
  std::vector<EpisodeRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  double mean_reward() const;
  double mean_active_cpus() const;
};

/// Rolls `policy` over `window`. When the policy is in training mode every
/// transition is passed to Policy::observe.
EpisodeLog run_episode(Policy& policy, const WorkloadSeries& series,
                       const EnvConfig& config, Window window, Rng& rng);

/// Columns: t,N,W,action,effective_action,min_load,max_load,max_backlog,reward
void write_episode_csv(std::ostream& out, const EpisodeLog& log);

}  // namespace v2n
