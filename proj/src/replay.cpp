#include "rlcore/replay.hpp"

#include <cmath>

namespace rlcore {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw DimensionError("replay: capacity must be >= 1");
    storage_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
    if (!std::isfinite(t.reward)) throw NumericError("replay: non-finite reward");
    if (size_ > 0) {
        const Transition& first = storage_[0];
        if (t.state.size() != first.state.size() || t.action.size() != first.action.size() ||
            t.next_state.size() != first.next_state.size())
            throw DimensionError("replay: transition dims inconsistent with buffer contents");
    }
    if (size_ < capacity_) {
        storage_.push_back(std::move(t));
        size_ += 1;
    } else {
        storage_[cursor_] = std::move(t); // FIFO: oldest entry overwritten first
    }
    cursor_ = (cursor_ + 1) % capacity_;
}

Batch ReplayBuffer::sample(int n, Rng& rng) const {
    if (size_ == 0) throw DimensionError("replay: sample from empty buffer");
    if (n < 1) throw DimensionError("replay: sample size must be >= 1");
    const int state_dim = static_cast<int>(storage_[0].state.size());
    const int action_dim = static_cast<int>(storage_[0].action.size());
    Batch b;
    b.size = n;
    b.states = Tensor2D(n, state_dim);
    b.actions = Tensor2D(n, action_dim);
    b.next_states = Tensor2D(n, state_dim);
    b.rewards.resize(n);
    b.dones.resize(n);
    for (int i = 0; i < n; ++i) {
        const Transition& t = storage_[rng.uniform_int(static_cast<int>(size_))];
        for (int j = 0; j < state_dim; ++j) b.states.at(i, j) = t.state[j];
        for (int j = 0; j < action_dim; ++j) b.actions.at(i, j) = t.action[j];
        for (int j = 0; j < state_dim; ++j) b.next_states.at(i, j) = t.next_state[j];
        b.rewards[i] = t.reward;
        b.dones[i] = t.done ? 1.0 : 0.0;
    }
    return b;
}

} // namespace rlcore
