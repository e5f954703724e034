#include "v2n/agents/replay.hpp"

#include <stdexcept>

namespace v2n::agents {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(const ReplayItem& item) {
  if (items_.size() < capacity_) {
    items_.push_back(item);
    return;
  }
  items_[head_] = item;
  head_ = (head_ + 1) % capacity_;
}

const ReplayItem& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) throw std::out_of_range("replay index out of range");
  return items_[(head_ + i) % items_.size()];
}

std::vector<ReplayItem> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
  if (items_.empty()) throw std::logic_error("cannot sample an empty replay buffer");
  std::vector<ReplayItem> out;
  out.reserve(batch);
  const auto hi = static_cast<std::int64_t>(items_.size()) - 1;
  for (std::size_t k = 0; k < batch; ++k) {
    out.push_back(items_[static_cast<std::size_t>(rng.integer(0, hi))]);
  }
  return out;
}

}  // namespace v2n::agents
