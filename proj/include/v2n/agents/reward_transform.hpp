#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace v2n::agents {

/// Monotone reshaping of the environment reward before it enters a learning
/// update. Reported metrics always use the untransformed reward.
enum class RewardTransform { kNone, kSymlog };

/// kSymlog: sign(r) * log(1 + |r|).
inline double transform_reward(RewardTransform t, double r) {
  if (t == RewardTransform::kSymlog) return std::copysign(std::log1p(std::abs(r)), r);
  return r;
}

inline std::string to_string(RewardTransform t) {
  return t == RewardTransform::kSymlog ? "symlog" : "none";
}

inline RewardTransform reward_transform_from_string(const std::string& s) {
  if (s == "none") return RewardTransform::kNone;
  if (s == "symlog") return RewardTransform::kSymlog;
  throw std::invalid_argument("unknown reward transform '" + s + "'");
}

}  // namespace v2n::agents
