#pragma once

#include <cstdint>

#include "flightrl/rng.hpp"
#include "flightrl/types.hpp"

namespace flightrl::sac {

// Sampled minibatch, column-per-transition.
struct Batch {
  MatrixXd s;       // state_dim x B
  MatrixXd a;       // action_dim x B
  RowVectorXd r;    // 1 x B
  MatrixXd s_next;  // state_dim x B

  int size() const { return static_cast<int>(s.cols()); }
};

// Fixed-capacity ring of transitions stored as matrix columns so sampling a
// minibatch is a gather into dense blocks.
class ReplayBuffer {
 public:
  ReplayBuffer(int state_dim, int action_dim, std::int64_t capacity);

  // Oldest transition is overwritten once full. Throws UsageError on a
  // dimension mismatch, NumericError on non-finite entries.
  void push(const VectorXd& s, const VectorXd& a, double r, const VectorXd& s_next);

  // Uniform sampling with replacement; index draws consume `rng` in order.
  Batch sample(int batch_size, Rng& rng) const;

  std::int64_t size() const { return size_; }
  std::int64_t capacity() const { return capacity_; }
  bool full() const { return size_ == capacity_; }
  int state_dim() const { return static_cast<int>(s_.rows()); }
  int action_dim() const { return static_cast<int>(a_.rows()); }
  void clear() { size_ = 0; head_ = 0; }

 private:
  MatrixXd s_, a_, s_next_;
  RowVectorXd r_;
  std::int64_t capacity_ = 0;
  std::int64_t size_ = 0;
  std::int64_t head_ = 0;  // next write slot
};

}  // namespace flightrl::sac
