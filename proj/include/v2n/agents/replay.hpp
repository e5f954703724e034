#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "v2n/rng.hpp"

namespace v2n::agents {

struct ReplayItem {
  std::array<double, 2> state{};
  double raw_action = 0.0;
  int action = 0;  // discrete action actually applied
  double reward = 0.0;
  std::array<double, 2> next_state{};
  bool done = false;
};

/// Fixed-capacity ring buffer with FIFO eviction.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const ReplayItem& item);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// i = 0 is the oldest retained item.
  const ReplayItem& at(std::size_t i) const;

  /// Uniform sample with replacement.
  std::vector<ReplayItem> sample(std::size_t batch, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  std::vector<ReplayItem> items_;
};

}  // namespace v2n::agents
