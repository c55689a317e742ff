#pragma once

#include <vector>

#include "rlcore/rng.hpp"
#include "rlcore/tensor.hpp"

namespace rlcore {

/// One environment interaction. done is true only on a genuine terminal,
/// never on a time-limit truncation. Goal fields are set only for
/// goal-conditioned environments; achieved_goal is the goal achieved in
/// next_state.
struct Transition {
    std::vector<double> state;
    std::vector<double> action;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
    std::vector<double> achieved_goal;
    std::vector<double> desired_goal;
};

struct Batch {
    Tensor2D states;
    Tensor2D actions;
    Tensor2D next_states;
    std::vector<double> rewards;
    std::vector<double> dones; // 0.0 or 1.0
    int size = 0;
};

/// Fixed-capacity FIFO ring with uniform sampling (with replacement).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    Batch sample(int n, Rng& rng) const;

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return storage_[i]; }

private:
    std::size_t capacity_;
    std::vector<Transition> storage_;
    std::size_t cursor_ = 0;
    std::size_t size_ = 0;
};

} // namespace rlcore
