#include "flightrl/sac/replay_buffer.hpp"

namespace flightrl::sac {

ReplayBuffer::ReplayBuffer(int state_dim, int action_dim, std::int64_t capacity)
    : capacity_(capacity) {
  if (state_dim <= 0 || action_dim <= 0 || capacity <= 0)
    throw ConfigError("ReplayBuffer: dimensions and capacity must be positive");
  s_.resize(state_dim, capacity);
  a_.resize(action_dim, capacity);
  s_next_.resize(state_dim, capacity);
  r_.resize(capacity);
}

void ReplayBuffer::push(const VectorXd& s, const VectorXd& a, double r,
                        const VectorXd& s_next) {
  if (s.size() != s_.rows() || s_next.size() != s_.rows() || a.size() != a_.rows())
    throw UsageError("ReplayBuffer::push: dimension mismatch");
  if (!s.allFinite() || !a.allFinite() || !s_next.allFinite() || !std::isfinite(r))
    throw NumericError("ReplayBuffer::push: non-finite transition");
  s_.col(head_) = s;
  a_.col(head_) = a;
  r_[head_] = r;
  s_next_.col(head_) = s_next;
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

Batch ReplayBuffer::sample(int batch_size, Rng& rng) const {
  if (size_ == 0) throw UsageError("ReplayBuffer::sample: buffer is empty");
  if (batch_size <= 0) throw UsageError("ReplayBuffer::sample: batch_size must be positive");
  Batch b;
  b.s.resize(s_.rows(), batch_size);
  b.a.resize(a_.rows(), batch_size);
  b.r.resize(batch_size);
  b.s_next.resize(s_.rows(), batch_size);
  for (int i = 0; i < batch_size; ++i) {
    const auto j = rng.uniform_int(size_);
    b.s.col(i) = s_.col(j);
    b.a.col(i) = a_.col(j);
    b.r[i] = r_[j];
    b.s_next.col(i) = s_next_.col(j);
  }
  return b;
}

}  // namespace flightrl::sac
