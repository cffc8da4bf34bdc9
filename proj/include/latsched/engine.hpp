// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "latsched/ancilla_queues.hpp"
#include "latsched/circuit.hpp"
#include "latsched/fabric.hpp"
#include "latsched/routing.hpp"
#include "latsched/stochastic.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latsched {

enum class Scheme { Dynamic, StaticGreedy, StaticLayered };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

struct EngineConfig {
    TimingConfig timing;
    RusModel rus;
    int k = 25;          // MST recomputation period (cycles)
    int c = 100;         // activity window (cycles)
    int tau_mst = 100;   // MST computation latency (cycles)
    MstMode mst_mode = MstMode::Full;
    std::uint64_t seed = 1;
    Round deadlock_rounds = 100000;
    std::vector<EdgeOrientation> initial_orientation;  // empty: all HorizontalZ
    bool queue_trace = false;                          // dump queues every cycle (dynamic only)

    void validate() const;
};

enum class GatePhase : std::uint8_t { Waiting, PathPending, Executing, Prep, Injecting, Done };

struct TraceRecord {
    GateId gate = 0;
    GateKind kind = GateKind::H;
    std::array<QubitId, 2> qubits{};
    bool clifford = false;  // Rz with a Clifford angle, or H/X/CNOT
    GatePhase phase = GatePhase::Waiting;
    Round scheduled_at = -1;
    Round started_at = -1;  // first operation touching the data qubit(s)
    Round finished_at = -1;
    std::vector<AncillaId> path;
    int edge_rotations = 0;
    int injections = 0;
    int zz_injections = 0;
    int preparations = 0;
    int prep_restarts = 0;

    /// ceil((finished - scheduled) / d).
    std::int64_t latency_cycles(int d) const;
};

struct Interval {
    Round start = 0;
    Round end = 0;
    GateId gate = 0;  // circuit gate (edge rotations report their CNOT)
    const char* what = "";
};

struct OccupancyLog {
    std::vector<std::vector<Interval>> ancilla;
    std::vector<std::vector<Interval>> data;
};

inline constexpr std::size_t kHistogramBins = 20;  // 1..20 cycles, then overflow

struct MetricsRecord {
    Scheme scheme = Scheme::Dynamic;
    EngineConfig config;
    std::size_t num_qubits = 0;
    std::size_t num_gates = 0;
    std::size_t num_cnot = 0;
    std::size_t num_rz_nonclifford = 0;
    std::size_t num_compressed = 0;
    Round total_rounds = 0;
    std::int64_t total_cycles = 0;
    std::vector<double> idle_fraction;
    double mean_idle_fraction = 0.0;
    std::array<std::uint64_t, kHistogramBins + 1> cnot_hist{};
    std::array<std::uint64_t, kHistogramBins + 1> rz_hist{};
    double mean_injections = 0.0;
    std::uint64_t edge_rotations = 0;
    std::uint64_t mst_computations = 0;
};

struct AuditReport {
    bool dependency_safe = true;
    bool ancilla_exclusive = true;
    bool data_exclusive = true;
    bool queues_empty = true;
    bool all_done = true;
    std::vector<std::string> violations;

    bool ok() const { return dependency_safe && ancilla_exclusive && data_exclusive && queues_empty && all_done; }
};

struct RunResult {
    MetricsRecord metrics;
    std::vector<TraceRecord> traces;
    OccupancyLog occupancy;
    AuditReport audit;
    std::vector<std::string> queue_trace;  // JSON lines
};

class DeadlockError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

RunResult run_dynamic(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config);
RunResult run_static_greedy(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config);
RunResult run_static_layered(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config);
RunResult run_scheme(Scheme scheme, const Circuit& circuit, const Fabric& fabric, const EngineConfig& config);

/// Metrics from a finished run. Throws std::logic_error on incomplete traces.
MetricsRecord collect_metrics(const std::vector<TraceRecord>& traces, const Circuit& circuit,
                              const OccupancyLog& occupancy, Round total_rounds, Scheme scheme,
                              const EngineConfig& config);

/// Post-run checks: dependency safety, per-ancilla and per-qubit interval
/// exclusivity, completion, and (for the dynamic scheme) empty queues.
AuditReport audit_run(const Circuit& circuit, const DependencyDag& dag, const std::vector<TraceRecord>& traces,
                      const OccupancyLog& occupancy, bool queues_empty);

/// Histogram bin for a latency: 0..19 for 1..20 cycles, 20 for overflow.
/// Latencies below 1 go to bin 0.
std::size_t histogram_bin(std::int64_t cycles);

double geometric_mean(const std::vector<double>& values);

/// Serialization (sorted keys, deterministic output).
std::string metrics_to_json(const MetricsRecord& metrics);
std::string trace_to_jsonl(const std::vector<TraceRecord>& traces, int d);
std::string config_to_json(const EngineConfig& config);

}  // namespace latsched
