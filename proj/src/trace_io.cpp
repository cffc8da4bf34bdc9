// SPDX-License-Identifier: Apache-2.0
#include "latsched/engine.hpp"

#include <json.hpp>

namespace latsched {
namespace {

using nlohmann::json;

std::string_view phase_name(GatePhase p) {
    switch (p) {
        case GatePhase::Waiting: return "waiting";
        case GatePhase::PathPending: return "path_pending";
        case GatePhase::Executing: return "executing";
        case GatePhase::Prep: return "prep";
        case GatePhase::Injecting: return "injecting";
        case GatePhase::Done: return "done";
    }
    return "?";
}

json config_json(const EngineConfig& c) {
    json j;
    j["d"] = c.timing.d;
    j["p"] = c.timing.p;
    j["k"] = c.k;
    j["c"] = c.c;
    j["tau_mst"] = c.tau_mst;
    j["mst_mode"] = c.mst_mode == MstMode::Full ? "full" : "incremental";
    j["seed"] = c.seed;
    j["deadlock_rounds"] = c.deadlock_rounds;
    json t;
    t["cycle_rounds"] = c.timing.cycle_rounds();
    t["cnot_cycles"] = c.timing.cnot_cycles;
    t["edge_rotation_cycles"] = c.timing.edge_rotation_cycles;
    t["zz_injection_cycles"] = c.timing.zz_injection_cycles;
    t["cnot_injection_cycles"] = c.timing.cnot_injection_cycles;
    t["hadamard_cycles"] = c.timing.hadamard_cycles;
    t["prep_attempt_rounds"] = c.timing.prep_attempt_rounds;
    t["expansion_rounds"] = c.timing.expansion();
    j["timing"] = std::move(t);
    json r;
    r["q_prep"] = c.rus.q_prep;
    r["expand_coeff"] = c.rus.expand_coeff;
    r["q_expand_floor"] = c.rus.q_expand_floor;
    r["q_expand"] = c.rus.q_expand(c.timing);
    r["subpatches"] = c.rus.subpatches(c.timing.d);
    r["injection_fail_prob"] = RusModel::kInjectionFailProb;
    r["prep_mean_rounds"] = prep_mean_rounds(c.rus, c.timing, 1);
    j["rus_model"] = std::move(r);
    return j;
}

}  // namespace

std::string config_to_json(const EngineConfig& config) { return config_json(config).dump(); }

std::string metrics_to_json(const MetricsRecord& m) {
    json j;
    j["scheme"] = std::string(to_string(m.scheme));
    j["seed"] = m.config.seed;
    j["config"] = config_json(m.config);
    j["num_qubits"] = m.num_qubits;
    j["num_gates"] = m.num_gates;
    j["num_cnot"] = m.num_cnot;
    j["num_rz_nonclifford"] = m.num_rz_nonclifford;
    j["num_compressed"] = m.num_compressed;
    j["total_rounds"] = m.total_rounds;
    j["total_cycles"] = m.total_cycles;
    j["idle_fraction"] = m.idle_fraction;
    j["mean_idle_fraction"] = m.mean_idle_fraction;
    j["cnot_hist"] = m.cnot_hist;
    j["rz_hist"] = m.rz_hist;
    j["hist_bins"] = "1..20 cycles, last entry overflow (>20)";
    j["mean_injections"] = m.mean_injections;
    j["edge_rotations"] = m.edge_rotations;
    j["mst_computations"] = m.mst_computations;
    return j.dump(2);
}

std::string trace_to_jsonl(const std::vector<TraceRecord>& traces, int d) {
    std::string out;
    for (const TraceRecord& t : traces) {
        json j;
        j["gate"] = t.gate;
        j["kind"] = std::string(to_string(t.kind));
        j["qubits"] = t.kind == GateKind::CNOT ? json::array({t.qubits[0], t.qubits[1]}) : json::array({t.qubits[0]});
        j["phase"] = std::string(phase_name(t.phase));
        j["scheduled_at"] = t.scheduled_at;
        j["started_at"] = t.started_at;
        j["finished_at"] = t.finished_at;
        j["latency_cycles"] = t.latency_cycles(d);
        j["path"] = t.path;
        j["edge_rotations"] = t.edge_rotations;
        j["injections"] = t.injections;
        j["zz_injections"] = t.zz_injections;
        j["preparations"] = t.preparations;
        j["prep_restarts"] = t.prep_restarts;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace latsched
