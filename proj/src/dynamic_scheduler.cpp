// SPDX-License-Identifier: Apache-2.0
#include "sim_core.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace latsched {
namespace {

using detail::Event;
using detail::EventKind;

enum OpTag : std::uint64_t { kOpCnot = 1, kOpRotation = 2, kOpHadamard = 3, kOpInjection = 4 };

class DynamicScheduler final : public detail::SimCore {
  public:
    DynamicScheduler(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config)
        : SimCore(circuit, fabric, config, Scheme::Dynamic), queues_(fabric.num_ancilla()),
          graph_(AncillaGraph::from(fabric)), pipeline_(graph_, config.k, config.tau_mst, config.mst_mode),
          costs_(ExpectedCosts::from(config.timing, config.rus)), planned_(orientation_),
          seq_(circuit.size(), kUnqueued), cnot_(circuit.size()), rz_(circuit.size()), h_ancilla_(circuit.size(), 0) {}

    std::size_t mst_computations() const { return pipeline_.computations_started(); }

  protected:
    void on_cycle(std::int64_t cycle) override {
        pipeline_.tick(cycle, activity_.activities());
        if (config_.queue_trace) dump_queues(cycle);
    }

    bool queues_empty() const override { return queues_.all_empty(); }

    void on_prep_done(const Event& e) override {
        AncillaQueue& q = queues_[e.a];
        if (!q.prep || q.prep->epoch != e.b) return;  // aborted earlier
        q.prep->done = true;
        if (q.is_head(q.prep->gate)) q.status = QueueStatus::D;
        open_ancilla(e.a, q.prep->gate, "hold");
    }

    void on_op_done(const Event& e) override {
        switch (e.b) {
            case kOpRotation: finish_rotation(e.a); break;
            case kOpCnot: finish_cnot(e.a); break;
            case kOpHadamard: finish_hadamard(e.a); break;
            case kOpInjection: finish_injection(e.a); break;
            default: throw std::logic_error("unknown operation tag");
        }
    }

    void dispatch() override {
        for (auto ready = take_ready(); !ready.empty(); ready = take_ready()) {
            for (GateId g : tie_break(ready, dag_)) schedule(g);
        }
        pick_winners();
        if (aligned()) start_operations();
        start_preparations();
        for (AncillaId a = 0; a < queues_.size(); ++a) {
            if (ancilla_open(a) && !queues_[a].prep) close_ancilla(a);
        }
    }

  private:
    static constexpr std::uint64_t kUnqueued = ~std::uint64_t{0};

    struct SubGate {
        GateId parent = 0;
        QubitId qubit = 0;
        AncillaId ancilla = 0;
        bool started = false;
        bool done = false;
    };
    struct CnotPlan {
        std::vector<AncillaId> path;
        std::vector<GateId> rotations;
        bool started = false;
    };
    struct RzState {
        bool enqueued = false;
        Angle current;
        std::optional<AncillaId> winner;
        std::optional<AncillaId> helper;
        bool injecting = false;
    };

    bool is_subgate(GateId id) const { return id >= circuit_.size(); }
    SubGate& subgate(GateId id) { return subgates_[id - circuit_.size()]; }

    void activate(GateId id, std::uint64_t seq) { active_.insert({seq, id}); }
    void deactivate(GateId id, std::uint64_t seq) { active_.erase({seq, id}); }

    void enqueue_rz(GateId g) {
        const Gate& gate = circuit_[g];
        RzState& s = rz_[g];
        s.enqueued = true;
        s.current = *gate.theta;
        queues_.enqueue_rz(g, gate.qubits[0], s.current, fabric_, planned_[gate.qubits[0]]);
        seq_[g] = queues_[queues_.holders(g).front()].find(g)->seq;
        activate(g, seq_[g]);
    }

    // Rz gates are claimed one gate ahead, once the previous gate on the qubit
    // starts executing, so preparation overlaps that gate. Claiming earlier
    // (at scheduling) parks prepared states at queue heads while the previous
    // gate is still waiting for its own ancillas.
    void lookahead(GateId g) {
        const Gate& gate = circuit_[g];
        for (std::size_t j = 0; j < gate.arity(); ++j) {
            const GateId n = next_on_qubit(g, gate.qubits[j]);
            if (n >= circuit_.size()) continue;
            const Gate& next = circuit_[n];
            if (next.kind == GateKind::Rz && !next.theta->is_clifford() && !rz_[n].enqueued) enqueue_rz(n);
        }
    }

    void schedule(GateId g) {
        const Gate& gate = circuit_[g];
        mark_scheduled(g);
        switch (gate.kind) {
            case GateKind::X: finish_gate(g); break;
            case GateKind::Rz:
                if (gate.theta->is_clifford()) {
                    finish_gate(g);
                } else {
                    if (!rz_[g].enqueued) enqueue_rz(g);
                    traces_[g].phase = GatePhase::Prep;
                }
                break;
            case GateKind::H: schedule_hadamard(g); break;
            case GateKind::CNOT: schedule_cnot(g); break;
        }
    }

    void begin(GateId g) {
        mark_started(g);
        lookahead(g);
    }

    void schedule_hadamard(GateId g) {
        const QubitId q = circuit_[g].qubits[0];
        const Position p = fabric_.data_position(q);
        std::optional<AncillaId> best;
        double best_free = 0.0;
        for (Side s : kAllSides) {
            const auto a = fabric_.neighbor_ancilla(p, s);
            if (!a) continue;
            const double f = queues_.expected_free(*a, costs_);
            if (!best || f < best_free) {
                best = a;
                best_free = f;
            }
        }
        if (!best) throw std::logic_error("no ancilla adjacent to qubit " + std::to_string(q));
        const std::uint64_t seq = queues_.next_seq();
        queues_.push(*best, QueueEntry{g, QueueRole::HadamardHelper, q, std::nullopt, Angle{}, seq});
        h_ancilla_[g] = *best;
        seq_[g] = seq;
        activate(g, seq);
        traces_[g].phase = GatePhase::PathPending;
    }

    void schedule_cnot(GateId g) {
        const Gate& gate = circuit_[g];
        const QubitId c = gate.control();
        const QubitId t = gate.target();
        const std::vector<double> free = queues_.expected_free_all(costs_);
        const auto choice =
            select_best_path(fabric_, c, t, planned_[c], planned_[t], pipeline_.query(cycle()), free);
        if (!choice) throw std::logic_error("no route for CNOT " + std::to_string(g));

        const std::uint64_t seq = queues_.next_seq();
        CnotPlan& plan = cnot_[g];
        auto add_rotation = [&](QubitId q, AncillaId a) {
            const auto id = static_cast<GateId>(circuit_.size() + subgates_.size());
            subgates_.push_back(SubGate{g, q, a});
            queues_.push(a, QueueEntry{id, QueueRole::EdgeRotation, q, std::nullopt, Angle{}, seq});
            plan.rotations.push_back(id);
            planned_[q] = swapped(planned_[q]);
            activate(id, seq);
        };
        if (choice->rotate_control) add_rotation(c, choice->control_ancilla);
        if (choice->rotate_target) add_rotation(t, choice->target_ancilla);
        plan.path = choice->path;
        for (AncillaId a : plan.path) queues_.push(a, QueueEntry{g, QueueRole::RouteCnot, c, std::nullopt, Angle{}, seq});
        seq_[g] = seq;
        activate(g, seq);
        TraceRecord& tr = traces_[g];
        tr.path = plan.path;
        tr.edge_rotations = static_cast<int>(plan.rotations.size());
        tr.phase = GatePhase::PathPending;
    }

    // A senior entry is about to use the ancilla: background preparation
    // for a junior gate yields.
    void take(AncillaId a) {
        if (const auto g = queues_.reclaim(a)) {
            close_ancilla(a);
            ++traces_[*g].prep_restarts;
        }
    }

    bool head_ready(AncillaId a, GateId g) const {
        const AncillaQueue& q = queues_[a];
        return q.is_head(g) && q.status == QueueStatus::R && ancilla_op_free(a);
    }

    void pick_winners() {
        for (const auto& [seq, g] : active_) {
            if (is_subgate(g) || circuit_[g].kind != GateKind::Rz) continue;
            RzState& s = rz_[g];
            if (s.winner || s.injecting) continue;
            std::optional<AncillaId> best;
            bool best_zz = false;
            for (AncillaId a : queues_.holders(g)) {
                const AncillaQueue& q = queues_[a];
                if (!q.is_head(g) || q.status != QueueStatus::D || !(q.prep->angle == s.current)) continue;
                const bool zz = !q.head()->helper.has_value();
                if (!best || (zz && !best_zz)) {
                    best = a;
                    best_zz = zz;
                }
            }
            if (!best) continue;
            s.winner = best;
            s.helper = queues_[*best].head()->helper;
            const PromotionEffects fx = queues_.on_prep_success(g, *best, s.helper);
            for (AncillaId a : fx.aborted) close_ancilla(a);
            for (AncillaId a : fx.discarded) close_ancilla(a);
            for (AncillaId a : fx.released) close_ancilla(a);
            traces_[g].prep_restarts += static_cast<int>(fx.aborted.size());
        }
    }

    void start_operations() {
        // Snapshot: starting an operation never enables another in this pass.
        const std::vector<std::pair<std::uint64_t, GateId>> order(active_.begin(), active_.end());
        for (const auto& [seq, g] : order) {
            if (is_subgate(g)) {
                try_rotation(g);
                continue;
            }
            switch (circuit_[g].kind) {
                case GateKind::CNOT: try_cnot(g); break;
                case GateKind::H: try_hadamard(g); break;
                case GateKind::Rz: try_injection(g); break;
                case GateKind::X: break;
            }
        }
    }

    void try_rotation(GateId id) {
        SubGate& sg = subgate(id);
        if (sg.started || !head_ready(sg.ancilla, id) || !data_free(sg.qubit)) return;
        const Round end = now() + config_.timing.rounds(config_.timing.edge_rotation_cycles);
        sg.started = true;
        take(sg.ancilla);
        queues_[sg.ancilla].status = QueueStatus::E;
        log_ancilla(sg.ancilla, now(), end, sg.parent, "edge_rotation");
        log_data(sg.qubit, now(), end, sg.parent, "edge_rotation");
        begin(sg.parent);
        traces_[sg.parent].phase = GatePhase::Executing;
        post(end, EventKind::OpDone, id, kOpRotation);
    }

    void finish_rotation(GateId id) {
        SubGate& sg = subgate(id);
        sg.done = true;
        orientation_[sg.qubit] = swapped(orientation_[sg.qubit]);
        queues_.remove(sg.ancilla, id);
        deactivate(id, seq_[sg.parent]);
    }

    void try_cnot(GateId g) {
        CnotPlan& plan = cnot_[g];
        if (plan.started) return;
        for (GateId r : plan.rotations) {
            if (!subgate(r).done) return;
        }
        const Gate& gate = circuit_[g];
        if (!data_free(gate.control()) || !data_free(gate.target())) return;
        for (AncillaId a : plan.path) {
            if (!head_ready(a, g)) return;
        }
        const Round end = now() + config_.timing.rounds(config_.timing.cnot_cycles);
        plan.started = true;
        for (AncillaId a : plan.path) {
            take(a);
            queues_[a].status = QueueStatus::E;
            log_ancilla(a, now(), end, g, "cnot");
        }
        log_data(gate.control(), now(), end, g, "cnot");
        log_data(gate.target(), now(), end, g, "cnot");
        begin(g);
        traces_[g].phase = GatePhase::Executing;
        post(end, EventKind::OpDone, g, kOpCnot);
    }

    void finish_cnot(GateId g) {
        queues_.remove_all(g);
        deactivate(g, seq_[g]);
        finish_gate(g);
    }

    void try_hadamard(GateId g) {
        if (traces_[g].phase != GatePhase::PathPending) return;
        const AncillaId a = h_ancilla_[g];
        const QubitId q = circuit_[g].qubits[0];
        if (!head_ready(a, g) || !data_free(q)) return;
        const Round end = now() + config_.timing.rounds(config_.timing.hadamard_cycles);
        take(a);
        queues_[a].status = QueueStatus::E;
        log_ancilla(a, now(), end, g, "hadamard");
        log_data(q, now(), end, g, "hadamard");
        begin(g);
        traces_[g].phase = GatePhase::Executing;
        post(end, EventKind::OpDone, g, kOpHadamard);
    }

    void finish_hadamard(GateId g) {
        queues_.remove(h_ancilla_[g], g);
        deactivate(g, seq_[g]);
        finish_gate(g);
    }

    void try_injection(GateId g) {
        RzState& s = rz_[g];
        if (!s.winner || s.injecting || traces_[g].scheduled_at < 0) return;
        const QubitId q = circuit_[g].qubits[0];
        if (!data_free(q)) return;
        const AncillaId w = *s.winner;
        if (!queues_[w].is_head(g) || queues_[w].status != QueueStatus::D) return;
        if (s.helper && !head_ready(*s.helper, g)) return;

        const int cycles = s.helper ? config_.timing.cnot_injection_cycles : config_.timing.zz_injection_cycles;
        const Round end = now() + config_.timing.rounds(cycles);
        s.injecting = true;
        close_ancilla(w);
        queues_[w].status = QueueStatus::E;
        log_ancilla(w, now(), end, g, "injection");
        if (s.helper) {
            take(*s.helper);
            queues_[*s.helper].status = QueueStatus::E;
            log_ancilla(*s.helper, now(), end, g, "injection_helper");
        }
        log_data(q, now(), end, g, "injection");
        begin(g);
        TraceRecord& tr = traces_[g];
        tr.phase = GatePhase::Injecting;
        ++tr.injections;
        if (!s.helper) ++tr.zz_injections;
        post(end, EventKind::OpDone, g, kOpInjection);
    }

    void finish_injection(GateId g) {
        RzState& s = rz_[g];
        const AncillaId w = *s.winner;
        const InjectionResult result = sample_injection(injection_rng(g));
        const InjectionEffects fx = queues_.on_injection_result(g, result, w);
        for (AncillaId a : fx.released) close_ancilla(a);
        s.injecting = false;
        if (fx.gate_finished) {
            deactivate(g, seq_[g]);
            finish_gate(g);
            return;
        }
        if (s.helper && queues_[*s.helper].is_head(g)) queues_[*s.helper].status = QueueStatus::R;
        s.current = s.current.doubled();
        s.winner.reset();
        s.helper.reset();
        traces_[g].phase = GatePhase::Prep;
    }

    // Heads that want to prepare always do. An ancilla whose head is stalled
    // on something else prepares for the most senior PrepareRz entry behind
    // it instead; that preparation yields to any senior use of the ancilla.
    void start_preparations() {
        for (AncillaId a = 0; a < queues_.size(); ++a) {
            AncillaQueue& q = queues_[a];
            const QueueEntry* head = q.head();
            if (!head || q.status != QueueStatus::R || !ancilla_op_free(a)) continue;
            const QueueEntry* entry = nullptr;
            if (head->role == QueueRole::PrepareRz) {
                take(a);
                entry = head;
            } else if (!q.prep) {
                for (const QueueEntry& e : q.entries()) {
                    if (e.role == QueueRole::PrepareRz) {
                        entry = &e;
                        break;
                    }
                }
            }
            if (!entry) continue;
            const GateId g = entry->gate;
            const Round dur = sample_prep_duration(config_.rus, config_.timing, 1, prep_rng(g));
            const std::uint64_t epoch = queues_.next_epoch();
            if (entry == head) q.status = QueueStatus::P;
            q.prep = PrepState{g, entry->angle, now(), now() + dur, epoch};
            open_ancilla(a, g, "prep");
            ++traces_[g].preparations;
            post(now() + dur, EventKind::PrepDone, a, epoch);
        }
    }

    void dump_queues(std::int64_t cycle) {
        nlohmann::json line;
        line["cycle"] = cycle;
        nlohmann::json qs = nlohmann::json::array();
        for (AncillaId a = 0; a < queues_.size(); ++a) {
            const AncillaQueue& q = queues_[a];
            if (q.empty()) continue;
            nlohmann::json entries = nlohmann::json::array();
            for (const auto& e : q.entries()) {
                nlohmann::json je;
                je["gate"] = is_subgate(e.gate) ? subgates_[e.gate - circuit_.size()].parent : e.gate;
                je["role"] = std::string(to_string(e.role));
                if (e.role == QueueRole::PrepareRz) je["angle"] = e.angle.to_qasm();
                if (e.helper) je["helper"] = *e.helper;
                entries.push_back(std::move(je));
            }
            nlohmann::json jq;
            jq["ancilla"] = a;
            jq["status"] = std::string(1, to_char(q.status));
            jq["entries"] = std::move(entries);
            qs.push_back(std::move(jq));
        }
        line["queues"] = std::move(qs);
        queue_trace_.push_back(line.dump());
    }

    QueueSet queues_;
    AncillaGraph graph_;
    MstPipeline pipeline_;
    ExpectedCosts costs_;
    std::vector<EdgeOrientation> planned_;
    std::vector<std::uint64_t> seq_;
    std::vector<CnotPlan> cnot_;
    std::vector<RzState> rz_;
    std::vector<AncillaId> h_ancilla_;
    std::vector<SubGate> subgates_;
    std::set<std::pair<std::uint64_t, GateId>> active_;
};

}  // namespace

RunResult run_dynamic(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config) {
    DynamicScheduler sim(circuit, fabric, config);
    RunResult r = sim.run();
    r.metrics.mst_computations = sim.mst_computations();
    return r;
}

}  // namespace latsched
