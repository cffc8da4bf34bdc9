// SPDX-License-Identifier: Apache-2.0
#include "sim_core.hpp"

#include <algorithm>

namespace latsched {
namespace {

using detail::Event;
using detail::EventKind;

enum OpTag : std::uint64_t { kOpCnot = 1, kOpHadamard = 2, kOpInjection = 3, kOpRotation = 4 };

// ASAP layers; a layer starts only once every gate of the previous layer is
// done. CNOTs take BFS shortest paths over currently free ancillas, Rz gates
// prepare on one fixed tile with no parallel or early preparation.
class StaticScheduler final : public detail::SimCore {
  public:
    StaticScheduler(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config, bool layered)
        : SimCore(circuit, fabric, config, layered ? Scheme::StaticLayered : Scheme::StaticGreedy),
          layered_(layered), reserved_(fabric.num_ancilla(), 0), rz_(circuit.size()), started_(circuit.size(), 0) {
        const auto layer = asap_layers(dag_);
        for (GateId g = 0; g < circuit.size(); ++g) {
            if (layer[g] >= layers_.size()) layers_.resize(layer[g] + 1);
            layers_[layer[g]].push_back(g);
        }
        for (auto& l : layers_) l = tie_break(l, dag_);
    }

  protected:
    void on_prep_done(const Event& e) override {
        RzState& s = rz_[e.a];
        if (s.stage != Stage::Preparing) return;
        close_ancilla(s.prep_tile);
        s.stage = Stage::Holding;
        open_ancilla(s.prep_tile, e.a, "hold");
    }

    void on_op_done(const Event& e) override {
        switch (e.b) {
            case kOpCnot: {
                const Gate& g = circuit_[e.a];
                if (cnot_rot_[e.a].first) orientation_[g.control()] = swapped(orientation_[g.control()]);
                if (cnot_rot_[e.a].second) orientation_[g.target()] = swapped(orientation_[g.target()]);
                finish_gate(e.a);
                break;
            }
            case kOpHadamard: finish_gate(e.a); break;
            case kOpRotation: {
                RzState& s = rz_[e.a];
                const QubitId q = circuit_[e.a].qubits[0];
                orientation_[q] = swapped(orientation_[q]);
                s.stage = Stage::Idle;
                break;
            }
            case kOpInjection: finish_injection(e.a); break;
            default: throw std::logic_error("unknown operation tag");
        }
    }

    void dispatch() override {
        advance_layers();
        if (current_ >= layers_.size()) return;
        if (aligned()) {
            route_cnots();
            for (GateId g : layers_[current_]) {
                if (done(g) || started_[g]) continue;
                if (circuit_[g].kind == GateKind::H) try_hadamard(g);
            }
        }
        for (GateId g : layers_[current_]) {
            if (!done(g) && circuit_[g].kind == GateKind::Rz) step_rz(g);
        }
    }

  private:
    enum class Stage : std::uint8_t { Idle, Rotating, Preparing, Holding, Injecting };
    struct RzState {
        Stage stage = Stage::Idle;
        bool reserved = false;
        AncillaId prep_tile = 0;
        std::optional<AncillaId> helper;
        Angle current;
    };

    bool free_ancilla(AncillaId a) const { return !reserved_[a] && ancilla_op_free(a); }

    void advance_layers() {
        while (current_ < layers_.size()) {
            if (!layer_started_) {
                layer_started_ = true;
                for (GateId g : layers_[current_]) {
                    mark_scheduled(g);
                    const Gate& gate = circuit_[g];
                    if (gate.kind == GateKind::X || (gate.kind == GateKind::Rz && gate.theta->is_clifford())) {
                        finish_gate(g);
                    } else if (gate.kind == GateKind::Rz) {
                        rz_[g].current = *gate.theta;
                    }
                }
            }
            const auto& layer = layers_[current_];
            if (!std::all_of(layer.begin(), layer.end(), [this](GateId g) { return done(g); })) return;
            (void)take_ready();
            ++current_;
            layer_started_ = false;
        }
    }

    // Multi-source BFS from the control's free neighbours to any free
    // neighbour of the target. Deterministic: sources in side order,
    // neighbours in ascending id.
    std::optional<std::vector<AncillaId>> shortest_path(QubitId control, QubitId target) const {
        const Position pc = fabric_.data_position(control);
        const Position pt = fabric_.data_position(target);
        std::vector<char> goal(fabric_.num_ancilla(), 0);
        for (Side s : kAllSides) {
            if (auto a = fabric_.neighbor_ancilla(pt, s); a && free_ancilla(*a)) goal[*a] = 1;
        }
        constexpr AncillaId kNone = ~AncillaId{0};
        std::vector<AncillaId> prev(fabric_.num_ancilla(), kNone);
        std::vector<char> seen(fabric_.num_ancilla(), 0);
        std::vector<AncillaId> frontier;
        for (Side s : kAllSides) {
            if (auto a = fabric_.neighbor_ancilla(pc, s); a && free_ancilla(*a) && !seen[*a]) {
                seen[*a] = 1;
                frontier.push_back(*a);
            }
        }
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            const AncillaId u = frontier[i];
            if (goal[u]) {
                std::vector<AncillaId> path;
                for (AncillaId x = u; x != kNone; x = prev[x]) path.push_back(x);
                std::reverse(path.begin(), path.end());
                return path;
            }
            for (AncillaId v : fabric_.ancilla_adjacency()[u]) {
                if (seen[v] || !free_ancilla(v)) continue;
                seen[v] = 1;
                prev[v] = u;
                frontier.push_back(v);
            }
        }
        return std::nullopt;
    }

    void route_cnots() {
        std::vector<GateId> pending;
        for (GateId g : layers_[current_]) {
            if (!done(g) && !started_[g] && circuit_[g].kind == GateKind::CNOT) pending.push_back(g);
        }
        if (layered_) {
            // Shortest routes first: packs the most disjoint paths into the
            // layer; conflicting gates retry once resources free up.
            std::vector<std::pair<std::size_t, GateId>> order;
            for (GateId g : pending) {
                const auto p = shortest_path(circuit_[g].control(), circuit_[g].target());
                if (p) order.emplace_back(p->size(), g);
            }
            std::stable_sort(order.begin(), order.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            pending.clear();
            for (const auto& [len, g] : order) pending.push_back(g);
        }
        for (GateId g : pending) try_cnot(g);
    }

    void try_cnot(GateId g) {
        const Gate& gate = circuit_[g];
        if (!data_free(gate.control()) || !data_free(gate.target())) return;
        const auto path = shortest_path(gate.control(), gate.target());
        if (!path) return;
        const auto sc = fabric_.side_of(gate.control(), path->front());
        const auto st = fabric_.side_of(gate.target(), path->back());
        const bool rc = edge_type(orientation_[gate.control()], *sc) != EdgeType::Z;
        const bool rt = edge_type(orientation_[gate.target()], *st) != EdgeType::X;
        const auto& t = config_.timing;
        int cycles = t.cnot_cycles;
        if (rc && rt && path->front() == path->back()) {
            cycles += 2 * t.edge_rotation_cycles;
        } else if (rc || rt) {
            cycles += t.edge_rotation_cycles;
        }
        const Round end = now() + t.rounds(cycles);
        for (AncillaId a : *path) log_ancilla(a, now(), end, g, "cnot");
        log_data(gate.control(), now(), end, g, "cnot");
        log_data(gate.target(), now(), end, g, "cnot");
        cnot_rot_[g] = {rc, rt};
        started_[g] = 1;
        mark_started(g);
        TraceRecord& tr = traces_[g];
        tr.path = *path;
        tr.edge_rotations = static_cast<int>(rc) + static_cast<int>(rt);
        tr.phase = GatePhase::Executing;
        post(end, EventKind::OpDone, g, kOpCnot);
    }

    void try_hadamard(GateId g) {
        const QubitId q = circuit_[g].qubits[0];
        if (!data_free(q)) return;
        const Position p = fabric_.data_position(q);
        for (Side s : kAllSides) {
            const auto a = fabric_.neighbor_ancilla(p, s);
            if (!a || !free_ancilla(*a)) continue;
            const Round end = now() + config_.timing.rounds(config_.timing.hadamard_cycles);
            log_ancilla(*a, now(), end, g, "hadamard");
            log_data(q, now(), end, g, "hadamard");
            started_[g] = 1;
            mark_started(g);
            traces_[g].phase = GatePhase::Executing;
            post(end, EventKind::OpDone, g, kOpHadamard);
            return;
        }
    }

    // Helper for CNOT injection: an ancilla on an X edge of q that touches
    // the preparation tile.
    std::optional<AncillaId> injection_helper(QubitId q, AncillaId prep) const {
        const Position p = fabric_.data_position(q);
        for (Side s : kAllSides) {
            if (edge_type(orientation_[q], s) != EdgeType::X) continue;
            const auto a = fabric_.neighbor_ancilla(p, s);
            if (a && fabric_.adjacent(*a, prep)) return a;
        }
        return std::nullopt;
    }

    void start_prep(GateId g) {
        RzState& s = rz_[g];
        const Round dur = sample_prep_duration(config_.rus, config_.timing, 1, prep_rng(g));
        s.stage = Stage::Preparing;
        open_ancilla(s.prep_tile, g, "prep");
        ++traces_[g].preparations;
        traces_[g].phase = GatePhase::Prep;
        post(now() + dur, EventKind::PrepDone, g);
    }

    void step_rz(GateId g) {
        RzState& s = rz_[g];
        const QubitId q = circuit_[g].qubits[0];
        if (s.stage == Stage::Idle) {
            if (!s.reserved) {
                const auto tile = fabric_.star_prep_tile(q);
                if (!tile) throw std::logic_error("no preparation tile for qubit " + std::to_string(q));
                if (!free_ancilla(*tile)) return;
                s.prep_tile = *tile;
                s.reserved = true;
                reserved_[*tile] = 1;
            }
            const auto side = fabric_.side_of(q, s.prep_tile);
            const bool zz = side && edge_type(orientation_[q], *side) == EdgeType::Z;
            s.helper = zz ? std::nullopt : injection_helper(q, s.prep_tile);
            if (!zz && !s.helper) {
                // Neither injection works with the current edges: rotate
                // them first, using the preparation tile.
                if (!aligned() || !data_free(q)) return;
                const Round end = now() + config_.timing.rounds(config_.timing.edge_rotation_cycles);
                log_ancilla(s.prep_tile, now(), end, g, "edge_rotation");
                log_data(q, now(), end, g, "edge_rotation");
                mark_started(g);
                ++traces_[g].edge_rotations;
                s.stage = Stage::Rotating;
                post(end, EventKind::OpDone, g, kOpRotation);
                return;
            }
            start_prep(g);
            return;
        }
        if (s.stage != Stage::Holding || !aligned() || !data_free(q)) return;
        if (s.helper && !free_ancilla(*s.helper)) return;

        const int cycles = s.helper ? config_.timing.cnot_injection_cycles : config_.timing.zz_injection_cycles;
        const Round end = now() + config_.timing.rounds(cycles);
        close_ancilla(s.prep_tile);
        log_ancilla(s.prep_tile, now(), end, g, "injection");
        if (s.helper) log_ancilla(*s.helper, now(), end, g, "injection_helper");
        log_data(q, now(), end, g, "injection");
        mark_started(g);
        s.stage = Stage::Injecting;
        TraceRecord& tr = traces_[g];
        tr.phase = GatePhase::Injecting;
        ++tr.injections;
        if (!s.helper) ++tr.zz_injections;
        post(end, EventKind::OpDone, g, kOpInjection);
    }

    void finish_injection(GateId g) {
        RzState& s = rz_[g];
        const InjectionResult result = sample_injection(injection_rng(g));
        const Angle next = s.current.doubled();
        if (result == InjectionResult::Success || next.is_clifford()) {
            reserved_[s.prep_tile] = 0;
            s.reserved = false;
            s.stage = Stage::Idle;
            finish_gate(g);
            return;
        }
        // Restart from scratch for the 2-theta correction.
        s.current = next;
        ++traces_[g].prep_restarts;
        start_prep(g);
    }

    bool layered_;
    std::vector<std::vector<GateId>> layers_;
    std::size_t current_ = 0;
    bool layer_started_ = false;
    std::vector<char> reserved_;
    std::vector<RzState> rz_;
    std::vector<char> started_;
    std::unordered_map<GateId, std::pair<bool, bool>> cnot_rot_;
};

}  // namespace

RunResult run_static_greedy(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config) {
    return StaticScheduler(circuit, fabric, config, false).run();
}

RunResult run_static_layered(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config) {
    return StaticScheduler(circuit, fabric, config, true).run();
}

RunResult run_scheme(Scheme scheme, const Circuit& circuit, const Fabric& fabric, const EngineConfig& config) {
    switch (scheme) {
        case Scheme::Dynamic: return run_dynamic(circuit, fabric, config);
        case Scheme::StaticGreedy: return run_static_greedy(circuit, fabric, config);
        case Scheme::StaticLayered: return run_static_layered(circuit, fabric, config);
    }
    throw std::invalid_argument("unknown scheme");
}

}  // namespace latsched
