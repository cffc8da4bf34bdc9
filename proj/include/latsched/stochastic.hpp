// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "latsched/angle.hpp"
#include "latsched/rng.hpp"

#include <cstdint>

namespace latsched {

/// Simulation time in syndrome-measurement rounds.
using Round = std::int64_t;

/// Operation durations. Lattice-surgery costs are in cycles; one cycle is d
/// rounds. Preparation timing is in rounds.
struct TimingConfig {
    int d = 7;
    double p = 1e-4;
    int cnot_cycles = 2;
    int edge_rotation_cycles = 3;
    int zz_injection_cycles = 1;
    int cnot_injection_cycles = 2;
    int hadamard_cycles = 3;
    int prep_attempt_rounds = 2;
    int expansion_rounds = 0;  // 0 means d

    Round cycle_rounds() const { return d; }
    Round rounds(int cycles) const { return static_cast<Round>(cycles) * d; }
    Round expansion() const { return expansion_rounds > 0 ? expansion_rounds : d; }
    /// Throws std::invalid_argument on an even or too small distance, a p
    /// outside [0,1) or a non-positive duration.
    void validate() const;
};

struct RusModel {
    double q_prep = 0.5;           // per-attempt success of one sub-patch
    double expand_coeff = 10.0;    // q_expand = 1 - expand_coeff * d * p
    double q_expand_floor = 0.5;   // clamp range [q_expand_floor, 1]
    int subpatch_override = 0;     // > 0 replaces subpatches(d)

    static constexpr double kInjectionFailProb = 0.5;

    double q_expand(const TimingConfig& t) const;
    /// Parallel sub-patches per patch: the triangular number T((d-1)/2),
    /// giving 3->1, 5->3, 7->6, 9->10, 11->15.
    int subpatches(int d) const;
    /// Success probability of one attempt slot over n_patches patches.
    double slot_success(const TimingConfig& t, int n_patches) const;
    void validate() const;
};

/// One preparation of |m_theta> over n_patches patches: geometric attempt
/// slots followed by expansion; an expansion failure restarts from scratch.
Round sample_prep_duration(const RusModel& model, const TimingConfig& t, int n_patches, SimRng& rng);

/// Analytic mean of sample_prep_duration.
double prep_mean_rounds(const RusModel& model, const TimingConfig& t, int n_patches);

enum class InjectionResult { Success, Fail };

/// Fails with probability exactly 1/2 (one random bit).
InjectionResult sample_injection(SimRng& rng);

CliffordClass clifford_check(const Angle& theta);

/// Expected number of injections for Rz(theta) including the correction
/// chain; the terminating Clifford fix-up is free. Throws
/// std::invalid_argument for Clifford angles.
double expected_injections(const Angle& theta);

}  // namespace latsched
