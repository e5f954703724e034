#include "v2n/agents/a2c.hpp"

#include <cmath>
#include <stdexcept>

#include "v2n/neural/checkpoint.hpp"

namespace v2n::agents {

using neural::Activation;
using neural::Mlp;
using neural::Tensor2D;

nlohmann::json to_json(const A2cConfig& c) {
  return {{"hidden", c.hidden},
          {"actor_lr", c.actor_lr},
          {"critic_lr", c.critic_lr},
          {"gamma", c.gamma},
          {"entropy_weight", c.entropy_weight},
          {"segment_length", c.segment_length},
          {"reward_transform", to_string(c.reward_transform)}};
}

A2cConfig a2c_config_from_json(const nlohmann::json& j, A2cConfig c) {
  c.hidden = j.value("hidden", c.hidden);
  c.actor_lr = j.value("actor_lr", c.actor_lr);
  c.critic_lr = j.value("critic_lr", c.critic_lr);
  c.gamma = j.value("gamma", c.gamma);
  c.entropy_weight = j.value("entropy_weight", c.entropy_weight);
  c.segment_length = j.value("segment_length", c.segment_length);
  if (j.contains("reward_transform")) {
    c.reward_transform = reward_transform_from_string(j.at("reward_transform").get<std::string>());
  }
  return c;
}

A2cAgent::A2cAgent(A2cConfig config, int action_limit, int n_max, Rng rng)
    : config_(std::move(config)),
      action_limit_(action_limit),
      n_max_(n_max),
      seed_(rng.seed()),
      rng_(rng),
      actor_({2, 2 * action_limit + 1, config_.hidden, Activation::kElu, Activation::kSoftmax}),
      critic_({2, 1, config_.hidden, Activation::kElu, Activation::kIdentity}) {
  if (action_limit < 1) throw std::invalid_argument("action_limit must be >= 1");
  if (config_.segment_length == 0) throw std::invalid_argument("segment_length must be positive");
  Rng init = rng_.split("init");
  actor_ = Mlp(actor_.spec(), init);
  critic_ = Mlp(critic_.spec(), init);
  actor_opt_.learning_rate = config_.actor_lr;
  critic_opt_.learning_rate = config_.critic_lr;
  rng_ = rng_.split("run");
}

std::vector<double> A2cAgent::probabilities(const std::array<double, 2>& state) const {
  Tensor2D x(1, 2);
  x << state[0], state[1];
  const Tensor2D p = actor_.forward(x);
  return {p.data(), p.data() + p.size()};
}

double A2cAgent::value(const std::array<double, 2>& state) const {
  Tensor2D x(1, 2);
  x << state[0], state[1];
  return critic_.forward(x)(0, 0);
}

int A2cAgent::act(const Observation& obs) {
  const auto p = probabilities(normalize(obs));
  int index = 0;
  if (training()) {
    const double u = rng_.uniform();
    double acc = 0.0;
    index = static_cast<int>(p.size()) - 1;
    for (std::size_t k = 0; k < p.size(); ++k) {
      acc += p[k];
      if (u < acc) {
        index = static_cast<int>(k);
        break;
      }
    }
  } else {
    for (std::size_t k = 1; k < p.size(); ++k) {
      if (p[k] > p[static_cast<std::size_t>(index)]) index = static_cast<int>(k);
    }
  }
  last_index_ = index;
  return index - action_limit_;
}

void A2cAgent::observe(const Transition& tr) {
  // The sampled action, not the clamped one, carries the log-probability.
  pending_.push_back({normalize(tr.obs), last_index_,
                      transform_reward(config_.reward_transform, tr.reward),
                      normalize(tr.next_obs), tr.done});
  if (pending_.size() >= config_.segment_length) {
    update(pending_);
    pending_.clear();
  }
}

void A2cAgent::begin_episode() {
  if (!pending_.empty() && training()) update(pending_);
  pending_.clear();
}

A2cAgent::UpdateStats A2cAgent::update(std::span<const A2cStep> segment) {
  UpdateStats stats;
  if (segment.empty()) return stats;
  const auto n = static_cast<Eigen::Index>(segment.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  Tensor2D s(n, 2), s2(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& st = segment[static_cast<std::size_t>(i)];
    s(i, 0) = st.state[0];
    s(i, 1) = st.state[1];
    s2(i, 0) = st.next_state[0];
    s2(i, 1) = st.next_state[1];
  }
  const Tensor2D v_next = critic_.forward(s2);
  neural::MlpCache critic_cache;
  const Tensor2D v = critic_.forward(s, critic_cache);

  std::vector<double> advantage(static_cast<std::size_t>(n));
  Tensor2D dv(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& st = segment[static_cast<std::size_t>(i)];
    const double target = st.reward + (st.done ? 0.0 : config_.gamma * v_next(i, 0));
    const double err = v(i, 0) - target;
    advantage[static_cast<std::size_t>(i)] = target - v(i, 0);
    stats.critic_loss += err * err * inv_n;
    dv(i, 0) = 2.0 * err * inv_n;
  }

  neural::MlpCache actor_cache;
  const Tensor2D p = actor_.forward(s, actor_cache);
  // d/dz of  -A log p_a - w H  with H = -sum p log p:
  //   -A (onehot_a - p) + w p (log p + H)
  Tensor2D dz(n, p.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = advantage[static_cast<std::size_t>(i)];
    const int idx = segment[static_cast<std::size_t>(i)].action_index;
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      if (p(i, k) > 0.0) entropy -= p(i, k) * std::log(p(i, k));
    }
    stats.mean_entropy += entropy * inv_n;
    stats.actor_loss += (-a * std::log(std::max(p(i, idx), 1e-300)) -
                         config_.entropy_weight * entropy) * inv_n;
    stats.mean_advantage += a * inv_n;
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      const double onehot = k == idx ? 1.0 : 0.0;
      const double logp = p(i, k) > 0.0 ? std::log(p(i, k)) : 0.0;
      dz(i, k) = (-a * (onehot - p(i, k)) +
                  config_.entropy_weight * p(i, k) * (logp + entropy)) * inv_n;
    }
  }

  const auto gc = critic_.backward(critic_cache, dv);
  const auto ga = actor_.backward_preactivation(actor_cache, dz);
  neural::adam_step(critic_.parameters(), gc.params, critic_opt_);
  neural::adam_step(actor_.parameters(), ga.params, actor_opt_);
  return stats;
}

nlohmann::json A2cAgent::to_json() const {
  return {{"kind", kind()},
          {"config", agents::to_json(config_)},
          {"action_limit", action_limit_},
          {"n_max", n_max_},
          {"normalization", {{"n_active", 1.0 / n_max_}, {"workload", 1.0 / n_max_}}},
          {"rng_seed", seed_},
          {"actor", neural::to_json(actor_)},
          {"critic", neural::to_json(critic_)}};
}

A2cAgent A2cAgent::from_json(const nlohmann::json& j) {
  A2cAgent a(a2c_config_from_json(j.at("config")), j.at("action_limit").get<int>(),
             j.at("n_max").get<int>(), Rng(j.at("rng_seed").get<std::uint64_t>()));
  a.actor_ = neural::mlp_from_json(j.at("actor"));
  a.critic_ = neural::mlp_from_json(j.at("critic"));
  return a;
}

}  // namespace v2n::agents
