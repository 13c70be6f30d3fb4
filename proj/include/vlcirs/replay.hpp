// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <stdexcept>
#include <vector>

namespace vlcirs {

/// One stored interaction (s, a, r, s', done).
struct Transition {
    std::vector<double> state;
    std::vector<double> action;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

/// Fixed-capacity ring buffer; push overwrites the oldest entry, sample
/// draws uniformly with replacement across the stored entries.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
        storage_.reserve(capacity);
    }

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }

    void push(Transition t) {
        if (storage_.size() < capacity_) {
            storage_.push_back(std::move(t));
        } else {
            storage_[cursor_] = std::move(t);
        }
        cursor_ = (cursor_ + 1) % capacity_;
    }

    template <typename RngT>
    std::vector<const Transition*> sample(std::size_t batch, RngT& rng) const {
        if (storage_.size() < batch)
            throw std::logic_error("ReplayBuffer::sample: fewer stored transitions than batch size");
        std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
        std::vector<const Transition*> out(batch);
        for (std::size_t i = 0; i < batch; ++i) out[i] = &storage_[pick(rng)];
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t cursor_ = 0;
    std::vector<Transition> storage_;
};

} // namespace vlcirs
