// SPDX-License-Identifier: Apache-2.0
#include "latsched/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latsched {

void TimingConfig::validate() const {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("code distance must be odd and >= 3");
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("physical error rate must be in [0,1)");
    if (cnot_cycles <= 0 || edge_rotation_cycles <= 0 || zz_injection_cycles <= 0 || cnot_injection_cycles <= 0 ||
        hadamard_cycles <= 0 || prep_attempt_rounds <= 0 || expansion_rounds < 0) {
        throw std::invalid_argument("operation durations must be positive");
    }
}

double RusModel::q_expand(const TimingConfig& t) const {
    return std::clamp(1.0 - expand_coeff * t.d * t.p, q_expand_floor, 1.0);
}

int RusModel::subpatches(int d) const {
    if (subpatch_override > 0) return subpatch_override;
    const int m = std::max(1, (d - 1) / 2);
    return m * (m + 1) / 2;
}

double RusModel::slot_success(const TimingConfig& t, int n_patches) const {
    const int attempts = n_patches * subpatches(t.d);
    return 1.0 - std::pow(1.0 - q_prep, attempts);
}

void RusModel::validate() const {
    if (!(q_prep > 0.0 && q_prep <= 1.0)) throw std::invalid_argument("q_prep must be in (0,1]");
    if (!(q_expand_floor > 0.0 && q_expand_floor <= 1.0)) throw std::invalid_argument("q_expand floor must be in (0,1]");
    if (expand_coeff < 0.0) throw std::invalid_argument("expansion coefficient must be >= 0");
}

Round sample_prep_duration(const RusModel& model, const TimingConfig& t, int n_patches, SimRng& rng) {
    if (n_patches < 1) throw std::invalid_argument("need at least one patch");
    const double slot = model.slot_success(t, n_patches);
    const double expand = model.q_expand(t);
    Round total = 0;
    for (;;) {
        do {
            total += t.prep_attempt_rounds;
        } while (!rng.bernoulli(slot));
        total += t.expansion();
        if (rng.bernoulli(expand)) return total;
    }
}

double prep_mean_rounds(const RusModel& model, const TimingConfig& t, int n_patches) {
    const double slots = 1.0 / model.slot_success(t, n_patches);
    return (slots * t.prep_attempt_rounds + static_cast<double>(t.expansion())) / model.q_expand(t);
}

InjectionResult sample_injection(SimRng& rng) {
    return rng.fair_bit() ? InjectionResult::Fail : InjectionResult::Success;
}

CliffordClass clifford_check(const Angle& theta) { return theta.clifford_class(); }

double expected_injections(const Angle& theta) {
    if (theta.is_clifford()) throw std::invalid_argument("Clifford rotation needs no injection");
    const int k = theta.doublings_to_clifford();
    if (k == 0) return 2.0;
    double sum = 0.0;
    for (int i = 1; i <= k; ++i) sum += i / std::ldexp(1.0, i);
    return sum + k / std::ldexp(1.0, k);
}

}  // namespace latsched
