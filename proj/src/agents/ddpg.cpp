#include "v2n/agents/ddpg.hpp"

#include <algorithm>
#include <stdexcept>

#include "v2n/neural/checkpoint.hpp"

namespace v2n::agents {

using neural::Activation;
using neural::Mlp;
using neural::MlpSpec;
using neural::Tensor2D;

nlohmann::json to_json(const DdpgConfig& c) {
  return {{"hidden", c.hidden},
          {"actor_lr", c.actor_lr},
          {"critic_lr", c.critic_lr},
          {"gamma", c.gamma},
          {"tau", c.tau},
          {"batch_size", c.batch_size},
          {"replay_capacity", c.replay_capacity},
          {"warmup_steps", c.warmup_steps},
          {"ou_theta", c.ou_theta},
          {"ou_sigma", c.ou_sigma},
          {"ou_sigma_final", c.ou_sigma_final},
          {"noise_decay_steps", c.noise_decay_steps},
          {"final_layer_scale", c.final_layer_scale},
          {"raw_lower", c.raw_lower},
          {"raw_upper", c.raw_upper},
          {"reward_transform", to_string(c.reward_transform)},
          {"reward_scale", c.reward_scale},
          {"preact_penalty", c.preact_penalty}};
}

DdpgConfig ddpg_config_from_json(const nlohmann::json& j, DdpgConfig c) {
  c.hidden = j.value("hidden", c.hidden);
  c.actor_lr = j.value("actor_lr", c.actor_lr);
  c.critic_lr = j.value("critic_lr", c.critic_lr);
  c.gamma = j.value("gamma", c.gamma);
  c.tau = j.value("tau", c.tau);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.replay_capacity = j.value("replay_capacity", c.replay_capacity);
  c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
  c.reward_scale = j.value("reward_scale", c.reward_scale);
  c.preact_penalty = j.value("preact_penalty", c.preact_penalty);
  c.ou_theta = j.value("ou_theta", c.ou_theta);
  c.ou_sigma = j.value("ou_sigma", c.ou_sigma);
  c.ou_sigma_final = j.value("ou_sigma_final", c.ou_sigma_final);
  c.noise_decay_steps = j.value("noise_decay_steps", c.noise_decay_steps);
  c.final_layer_scale = j.value("final_layer_scale", c.final_layer_scale);
  c.raw_lower = j.value("raw_lower", c.raw_lower);
  c.raw_upper = j.value("raw_upper", c.raw_upper);
  if (j.contains("reward_transform")) {
    c.reward_transform = reward_transform_from_string(j.at("reward_transform").get<std::string>());
  }
  return c;
}

namespace {

MlpSpec actor_spec(const DdpgConfig& c) {
  return {2, 1, c.hidden, Activation::kElu, Activation::kTanh};
}

MlpSpec critic_spec(const DdpgConfig& c) {
  return {3, 1, c.hidden, Activation::kElu, Activation::kIdentity};
}

Tensor2D states_of(std::span<const ReplayItem> batch, bool next) {
  Tensor2D s(static_cast<Eigen::Index>(batch.size()), 2);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& v = next ? batch[i].next_state : batch[i].state;
    s(static_cast<Eigen::Index>(i), 0) = v[0];
    s(static_cast<Eigen::Index>(i), 1) = v[1];
  }
  return s;
}

Tensor2D with_action(const Tensor2D& states, const Tensor2D& actions) {
  Tensor2D x(states.rows(), 3);
  x.leftCols(2) = states;
  x.col(2) = actions.col(0);
  return x;
}

}  // namespace

DdpgAgent::DdpgAgent(DdpgConfig config, int action_limit, int n_max, Rng rng)
    : config_(std::move(config)),
      dod_{config_.raw_lower, config_.raw_upper, action_limit},
      n_max_(n_max),
      seed_(rng.seed()),
      rng_(rng),
      actor_(actor_spec(config_)),
      critic_(critic_spec(config_)),
      target_actor_(actor_spec(config_)),
      target_critic_(critic_spec(config_)),
      replay_(config_.replay_capacity),
      noise_(config_.ou_theta, config_.ou_sigma) {
  dod_.validate();
  if (n_max_ < action_limit) throw std::invalid_argument("n_max must be >= action_limit");
  if (config_.batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  Rng init = rng_.split("init");
  actor_ = Mlp(actor_spec(config_), init, config_.final_layer_scale);
  critic_ = Mlp(critic_spec(config_), init);
  target_actor_ = actor_;
  target_critic_ = critic_;
  actor_opt_.learning_rate = config_.actor_lr;
  critic_opt_.learning_rate = config_.critic_lr;
  rng_ = rng_.split("run");
}

double DdpgAgent::actor_output(const Observation& obs) const {
  const auto s = normalize(obs);
  Tensor2D x(1, 2);
  x << s[0], s[1];
  return actor_.forward(x)(0, 0);
}

DdpgAgent::Decision DdpgAgent::decide(const Observation& obs, bool explore) {
  Decision d;
  if (explore && steps_ < config_.warmup_steps) {
    d.raw = rng_.uniform(dod_.lower, dod_.upper);
  } else {
    d.raw = actor_output(obs);
    if (explore) d.raw += noise_.sample(rng_);
  }
  d.raw = std::clamp(d.raw, dod_.lower, dod_.upper);
  d.action = dod(d.raw, dod_);
  return d;
}

int DdpgAgent::act(const Observation& obs) {
  const auto d = decide(obs, training());
  last_raw_ = d.raw;
  return d.action;
}

void DdpgAgent::begin_episode() { noise_.reset(); }

void DdpgAgent::set_training_horizon(std::size_t steps) { config_.noise_decay_steps = steps; }

void DdpgAgent::observe(const Transition& tr) {
  ReplayItem item;
  item.state = normalize(tr.obs);
  item.raw_action = last_raw_;
  item.action = tr.effective_action;
  item.reward = config_.reward_scale * transform_reward(config_.reward_transform, tr.reward);
  item.next_state = normalize(tr.next_obs);
  item.done = tr.done;
  replay_.push(item);
  ++steps_;
  if (config_.noise_decay_steps > 0) {
    const double frac =
        std::min(1.0, static_cast<double>(steps_) / static_cast<double>(config_.noise_decay_steps));
    noise_.set_sigma(config_.ou_sigma + frac * (config_.ou_sigma_final - config_.ou_sigma));
  }
  if (steps_ >= config_.warmup_steps) update();
}

std::vector<double> DdpgAgent::critic_targets(std::span<const ReplayItem> batch) const {
  const Tensor2D next = states_of(batch, true);
  const Tensor2D q_next = target_critic_.forward(with_action(next, target_actor_.forward(next)));
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double bootstrap = batch[i].done ? 0.0 : q_next(static_cast<Eigen::Index>(i), 0);
    y[i] = batch[i].reward + config_.gamma * bootstrap;
  }
  return y;
}

double DdpgAgent::critic_value(const std::array<double, 2>& state, double raw) const {
  Tensor2D x(1, 3);
  x << state[0], state[1], raw;
  return critic_.forward(x)(0, 0);
}

DdpgAgent::UpdateStats DdpgAgent::update() {
  if (replay_.size() < config_.batch_size) return {};
  const auto batch = replay_.sample(config_.batch_size, rng_);
  return update(batch);
}

DdpgAgent::UpdateStats DdpgAgent::update(std::span<const ReplayItem> batch) {
  UpdateStats stats;
  if (batch.empty()) return stats;
  const auto n = static_cast<Eigen::Index>(batch.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto targets = critic_targets(batch);
  const Tensor2D states = states_of(batch, false);

  // Critic: minimise mean (Q(s, a_raw) - y)^2.
  Tensor2D raw(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) raw(i, 0) = batch[static_cast<std::size_t>(i)].raw_action;
  neural::MlpCache critic_cache;
  const Tensor2D q = critic_.forward(with_action(states, raw), critic_cache);
  Tensor2D dq(n, 1);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double err = q(i, 0) - targets[static_cast<std::size_t>(i)];
    loss += err * err;
    dq(i, 0) = 2.0 * err * inv_n;
  }
  stats.critic_loss = loss * inv_n;
  {
    const auto g = critic_.backward(critic_cache, dq);
    neural::adam_step(critic_.parameters(), g.params, critic_opt_);
  }

  // Actor: ascend mean Q(s, pi(s)) through the critic's action input.
  neural::MlpCache actor_cache;
  const Tensor2D pi = actor_.forward(states, actor_cache);
  const Tensor2D q_pi = critic_.forward(with_action(states, pi), critic_cache);
  stats.actor_objective = q_pi.mean();
  const Tensor2D dneg = Tensor2D::Constant(n, 1, -inv_n);
  const auto gc = critic_.backward(critic_cache, dneg, false);
  const Tensor2D dpi = gc.input.col(2);
  const Tensor2D& z = actor_cache.preacts.back();
  const Tensor2D dz = dpi.cwiseProduct((1.0 - pi.array().square()).matrix()) +
                      (2.0 * config_.preact_penalty * inv_n) * z;
  const auto ga = actor_.backward_preactivation(actor_cache, dz);
  neural::adam_step(actor_.parameters(), ga.params, actor_opt_);

  target_critic_.soft_update_from(critic_, config_.tau);
  target_actor_.soft_update_from(actor_, config_.tau);
  stats.applied = true;
  return stats;
}

nlohmann::json DdpgAgent::to_json() const {
  return {{"kind", kind()},
          {"config", agents::to_json(config_)},
          {"action_limit", dod_.n_max},
          {"n_max", n_max_},
          {"normalization", {{"n_active", 1.0 / n_max_}, {"workload", 1.0 / n_max_}}},
          {"dod", {{"lower", dod_.lower}, {"upper", dod_.upper}, {"n_max", dod_.n_max}}},
          {"rng_seed", seed_},
          {"steps", steps_},
          {"actor", neural::to_json(actor_)},
          {"critic", neural::to_json(critic_)},
          {"target_actor", neural::to_json(target_actor_)},
          {"target_critic", neural::to_json(target_critic_)}};
}

DdpgAgent DdpgAgent::from_json(const nlohmann::json& j) {
  DdpgAgent a(ddpg_config_from_json(j.at("config")), j.at("action_limit").get<int>(),
              j.at("n_max").get<int>(), Rng(j.at("rng_seed").get<std::uint64_t>()));
  a.actor_ = neural::mlp_from_json(j.at("actor"));
  a.critic_ = neural::mlp_from_json(j.at("critic"));
  a.target_actor_ = neural::mlp_from_json(j.at("target_actor"));
  a.target_critic_ = neural::mlp_from_json(j.at("target_critic"));
  a.steps_ = j.at("steps").get<std::size_t>();
  return a;
}

}  // namespace v2n::agents
