// SPDX-License-Identifier: Apache-2.0
#include "latsched/engine.hpp"

#include <algorithm>
#include <cmath>

namespace latsched {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Dynamic: return "dynamic";
        case Scheme::StaticGreedy: return "static_greedy";
        case Scheme::StaticLayered: return "static_layered";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    if (name == "dynamic") return Scheme::Dynamic;
    if (name == "static_greedy") return Scheme::StaticGreedy;
    if (name == "static_layered") return Scheme::StaticLayered;
    return std::nullopt;
}

void EngineConfig::validate() const {
    timing.validate();
    rus.validate();
    if (k <= 0) throw std::invalid_argument("k must be positive");
    if (c <= 0) throw std::invalid_argument("activity window c must be positive");
    if (tau_mst < 0) throw std::invalid_argument("tau_mst must be non-negative");
    if (deadlock_rounds <= 0) throw std::invalid_argument("deadlock threshold must be positive");
}

std::int64_t TraceRecord::latency_cycles(int d) const {
    const Round span = finished_at - scheduled_at;
    return (span + d - 1) / d;
}

std::size_t histogram_bin(std::int64_t cycles) {
    if (cycles <= 1) return 0;
    if (cycles > static_cast<std::int64_t>(kHistogramBins)) return kHistogramBins;
    return static_cast<std::size_t>(cycles - 1);
}

double geometric_mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double log_sum = 0.0;
    for (double v : values) log_sum += std::log(v);
    return std::exp(log_sum / static_cast<double>(values.size()));
}

namespace {

Round union_length(std::vector<Interval> iv) {
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
    Round total = 0;
    Round cur_start = 0;
    Round cur_end = -1;
    for (const Interval& x : iv) {
        if (x.start > cur_end) {
            if (cur_end > cur_start) total += cur_end - cur_start;
            cur_start = x.start;
            cur_end = x.end;
        } else {
            cur_end = std::max(cur_end, x.end);
        }
    }
    if (cur_end > cur_start) total += cur_end - cur_start;
    return total;
}

}  // namespace

MetricsRecord collect_metrics(const std::vector<TraceRecord>& traces, const Circuit& circuit,
                              const OccupancyLog& occupancy, Round total_rounds, Scheme scheme,
                              const EngineConfig& config) {
    MetricsRecord m;
    m.scheme = scheme;
    m.config = config;
    m.num_qubits = circuit.num_qubits();
    m.num_gates = circuit.size();
    m.total_rounds = total_rounds;
    const int d = config.timing.d;
    m.total_cycles = (total_rounds + d - 1) / d;

    std::uint64_t injections = 0;
    for (const TraceRecord& t : traces) {
        if (t.phase != GatePhase::Done || t.finished_at < 0) {
            throw std::logic_error("gate " + std::to_string(t.gate) + " has no completed trace");
        }
        m.edge_rotations += static_cast<std::uint64_t>(t.edge_rotations);
        if (t.kind == GateKind::CNOT) {
            ++m.num_cnot;
            ++m.cnot_hist[histogram_bin(t.latency_cycles(d))];
        } else if (t.kind == GateKind::Rz && !t.clifford) {
            ++m.num_rz_nonclifford;
            ++m.rz_hist[histogram_bin(t.latency_cycles(d))];
            injections += static_cast<std::uint64_t>(t.injections);
        }
    }
    if (traces.size() != circuit.size()) throw std::logic_error("trace count does not match circuit");
    m.mean_injections =
        m.num_rz_nonclifford ? static_cast<double>(injections) / static_cast<double>(m.num_rz_nonclifford) : 0.0;

    m.idle_fraction.assign(circuit.num_qubits(), 1.0);
    double sum = 0.0;
    for (QubitId q = 0; q < circuit.num_qubits(); ++q) {
        if (total_rounds > 0) {
            const Round busy = q < occupancy.data.size() ? union_length(occupancy.data[q]) : 0;
            m.idle_fraction[q] = 1.0 - static_cast<double>(busy) / static_cast<double>(total_rounds);
        }
        sum += m.idle_fraction[q];
    }
    m.mean_idle_fraction = circuit.num_qubits() ? sum / static_cast<double>(circuit.num_qubits()) : 1.0;
    return m;
}

}  // namespace latsched
