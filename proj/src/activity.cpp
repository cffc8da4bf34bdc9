// SPDX-License-Identifier: Apache-2.0
#include "latsched/routing.hpp"

#include <stdexcept>

namespace latsched {

ActivityTracker::ActivityTracker(std::size_t num_ancilla, int window)
    : window_(window), ring_(static_cast<std::size_t>(window > 0 ? window : 1), std::vector<char>(num_ancilla, 0)),
      count_(num_ancilla, 0) {
    if (window <= 0) throw std::invalid_argument("activity window must be positive");
}

void ActivityTracker::record(std::int64_t cycle, std::span<const char> busy) {
    if (last_ && cycle <= *last_) {
        throw std::logic_error("activity already recorded for cycle " + std::to_string(cycle));
    }
    if (busy.size() != count_.size()) throw std::invalid_argument("busy vector size mismatch");
    // Cycles skipped since the last record count as idle.
    const std::int64_t steps = last_ ? std::min<std::int64_t>(cycle - *last_, window_) : 1;
    for (std::int64_t s = 0; s < steps; ++s) {
        auto& slot = ring_[slot_];
        const bool newest = s == steps - 1;
        for (std::size_t a = 0; a < count_.size(); ++a) {
            const char bit = newest && busy[a] ? 1 : 0;
            count_[a] += bit - slot[a];
            slot[a] = bit;
        }
        slot_ = (slot_ + 1) % ring_.size();
    }
    last_ = cycle;
}

std::vector<double> ActivityTracker::activities() const {
    std::vector<double> out(count_.size());
    for (std::size_t a = 0; a < count_.size(); ++a) out[a] = activity(static_cast<AncillaId>(a));
    return out;
}

}  // namespace latsched
