// SPDX-License-Identifier: Apache-2.0
#include "sim_core.hpp"

#include <algorithm>
#include <sstream>

namespace latsched::detail {

SimCore::SimCore(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config, Scheme scheme)
    : circuit_(circuit), fabric_(fabric), config_(config), scheme_(scheme), dag_(build_dag(circuit)),
      activity_(fabric.num_ancilla(), config.c) {
    config_.validate();
    if (fabric.num_data() < circuit.num_qubits()) {
        throw std::invalid_argument("fabric has " + std::to_string(fabric.num_data()) + " data tiles for " +
                                    std::to_string(circuit.num_qubits()) + " qubits");
    }
    const std::size_t n = circuit.size();
    traces_.resize(n);
    pending_preds_.resize(n);
    for (const Gate& g : circuit.gates()) {
        TraceRecord& t = traces_[g.id];
        t.gate = g.id;
        t.kind = g.kind;
        t.qubits = g.qubits;
        t.clifford = g.kind != GateKind::Rz || g.theta->is_clifford();
        pending_preds_[g.id] = static_cast<std::uint32_t>(dag_.predecessors[g.id].size());
        if (pending_preds_[g.id] == 0) ready_.push_back(g.id);
    }
    remaining_ = n;
    prep_rng_.resize(n);
    injection_rng_.resize(n);

    next_on_qubit_.assign(n, {});
    std::vector<GateId> last(circuit.num_qubits(), static_cast<GateId>(n));
    for (std::size_t i = n; i-- > 0;) {
        const Gate& g = circuit.gates()[i];
        next_on_qubit_[i].resize(g.arity());
        for (std::size_t j = 0; j < g.arity(); ++j) {
            next_on_qubit_[i][j] = last[g.qubits[j]];
            last[g.qubits[j]] = g.id;
        }
    }

    orientation_ = config_.initial_orientation;
    orientation_.resize(fabric.num_data(), EdgeOrientation::HorizontalZ);

    occupancy_.ancilla.assign(fabric.num_ancilla(), {});
    occupancy_.data.assign(fabric.num_data(), {});
    data_until_.assign(fabric.num_data(), 0);
    ancilla_until_.assign(fabric.num_ancilla(), 0);
    open_.assign(fabric.num_ancilla(), std::nullopt);
    busy_mark_.assign(fabric.num_ancilla(), 0);
}

void SimCore::post(Round time, EventKind kind, std::uint32_t a, std::uint64_t b) {
    events_.push(Event{time, kind, event_seq_++, a, b});
}

void SimCore::log_ancilla(AncillaId a, Round start, Round end, GateId gate, const char* what) {
    occupancy_.ancilla[a].push_back(Interval{start, end, gate, what});
    ancilla_until_[a] = std::max(ancilla_until_[a], end);
    busy_mark_[a] = 1;
}

void SimCore::log_data(QubitId q, Round start, Round end, GateId gate, const char* what) {
    occupancy_.data[q].push_back(Interval{start, end, gate, what});
    data_until_[q] = std::max(data_until_[q], end);
}

void SimCore::open_ancilla(AncillaId a, GateId gate, const char* what) {
    if (open_[a]) close_ancilla(a);
    open_[a] = Interval{now_, now_, gate, what};
    busy_mark_[a] = 1;
}

void SimCore::close_ancilla(AncillaId a) {
    if (!open_[a]) return;
    Interval iv = *open_[a];
    iv.end = now_;
    open_[a].reset();
    busy_mark_[a] = 1;
    if (iv.end > iv.start) occupancy_.ancilla[a].push_back(iv);
}

void SimCore::mark_scheduled(GateId g) {
    TraceRecord& t = traces_[g];
    if (t.scheduled_at < 0) t.scheduled_at = now_;
}

void SimCore::mark_started(GateId g) {
    TraceRecord& t = traces_[g];
    if (t.started_at < 0) t.started_at = now_;
    progress();
}

void SimCore::finish_gate(GateId g) {
    TraceRecord& t = traces_[g];
    if (t.phase == GatePhase::Done) throw std::logic_error("gate " + std::to_string(g) + " finished twice");
    mark_scheduled(g);
    if (t.started_at < 0) t.started_at = now_;
    t.finished_at = now_;
    t.phase = GatePhase::Done;
    --remaining_;
    progress();
    for (GateId s : dag_.successors[g]) {
        if (--pending_preds_[s] == 0) ready_.push_back(s);
    }
}

std::vector<GateId> SimCore::take_ready() {
    std::vector<GateId> out;
    out.swap(ready_);
    return out;
}

SimRng& SimCore::prep_rng(GateId g) {
    if (!prep_rng_[g]) prep_rng_[g] = std::make_unique<SimRng>(SimRng::derive(config_.seed, g, kPrepStream));
    return *prep_rng_[g];
}

SimRng& SimCore::injection_rng(GateId g) {
    if (!injection_rng_[g]) {
        injection_rng_[g] = std::make_unique<SimRng>(SimRng::derive(config_.seed, g, kInjectionStream));
    }
    return *injection_rng_[g];
}

GateId SimCore::next_on_qubit(GateId g, QubitId q) const {
    const Gate& gate = circuit_[g];
    for (std::size_t j = 0; j < gate.arity(); ++j) {
        if (gate.qubits[j] == q) return next_on_qubit_[g][j];
    }
    return static_cast<GateId>(circuit_.size());
}

void SimCore::handle_cycle_boundary() {
    const std::int64_t i = cycle();
    if (i > 0) {
        std::vector<char> busy(busy_mark_.size());
        for (std::size_t a = 0; a < busy.size(); ++a) {
            busy[a] = busy_mark_[a] || open_[a].has_value() || ancilla_until_[a] > now_ - d();
            busy_mark_[a] = 0;
        }
        activity_.record(i - 1, busy);
    }
    on_cycle(i);
    post(now_ + d(), EventKind::CycleBoundary, 0);
}

RunResult SimCore::run() {
    on_start();
    post(0, EventKind::CycleBoundary, 0);
    while (remaining_ > 0) {
        if (events_.empty()) throw DeadlockError("event queue drained with unfinished gates");
        now_ = events_.top().time;
        while (!events_.empty() && events_.top().time == now_) {
            const Event e = events_.top();
            events_.pop();
            switch (e.kind) {
                case EventKind::OpDone: on_op_done(e); break;
                case EventKind::PrepDone: on_prep_done(e); break;
                case EventKind::CycleBoundary: handle_cycle_boundary(); break;
            }
        }
        dispatch();
        if (remaining_ > 0 && now_ - last_progress_ > config_.deadlock_rounds) {
            std::ostringstream msg;
            msg << "no progress for " << (now_ - last_progress_) << " rounds at round " << now_ << "; waiting:";
            int shown = 0;
            for (const auto& t : traces_) {
                if (t.phase == GatePhase::Done) continue;
                msg << " g" << t.gate << '(' << to_string(t.kind) << ",phase=" << static_cast<int>(t.phase) << ')';
                if (++shown == 20) break;
            }
            throw DeadlockError(msg.str());
        }
    }
    for (AncillaId a = 0; a < open_.size(); ++a) close_ancilla(a);

    RunResult result;
    Round total = 0;
    for (const auto& t : traces_) total = std::max(total, t.finished_at);
    result.metrics = collect_metrics(traces_, circuit_, occupancy_, total, scheme_, config_);
    result.metrics.num_compressed = fabric_.num_compressed();
    result.audit = audit_run(circuit_, dag_, traces_, occupancy_, queues_empty());
    result.traces = std::move(traces_);
    result.occupancy = std::move(occupancy_);
    result.queue_trace = std::move(queue_trace_);
    return result;
}

}  // namespace latsched::detail
