// SPDX-License-Identifier: Apache-2.0
#include "latsched/ancilla_queues.hpp"

#include <algorithm>
#include <stdexcept>

namespace latsched {

std::string_view to_string(QueueRole role) {
    switch (role) {
        case QueueRole::PrepareRz: return "prepare_rz";
        case QueueRole::RouteRz: return "route_rz";
        case QueueRole::RouteCnot: return "route_cnot";
        case QueueRole::EdgeRotation: return "edge_rotation";
        case QueueRole::HadamardHelper: return "hadamard";
    }
    return "?";
}

char to_char(QueueStatus status) {
    switch (status) {
        case QueueStatus::R: return 'R';
        case QueueStatus::E: return 'E';
        case QueueStatus::P: return 'P';
        case QueueStatus::D: return 'D';
        case QueueStatus::F: return 'F';
    }
    return '?';
}

QueueEntry* AncillaQueue::find(GateId gate) {
    for (auto& e : entries_) {
        if (e.gate == gate) return &e;
    }
    return nullptr;
}

const QueueEntry* AncillaQueue::find(GateId gate) const {
    for (const auto& e : entries_) {
        if (e.gate == gate) return &e;
    }
    return nullptr;
}

ExpectedCosts ExpectedCosts::from(const TimingConfig& t, const RusModel& rus) {
    ExpectedCosts c;
    c.cnot = t.cnot_cycles;
    c.edge_rotation = t.edge_rotation_cycles;
    c.hadamard = t.hadamard_cycles;
    c.zz_injection = t.zz_injection_cycles;
    c.cnot_injection = t.cnot_injection_cycles;
    c.prep = prep_mean_rounds(rus, t, 1) / static_cast<double>(t.cycle_rounds());
    return c;
}

double ExpectedCosts::of(const QueueEntry& e) const {
    switch (e.role) {
        case QueueRole::PrepareRz: return prep + (e.helper ? cnot_injection : zz_injection);
        case QueueRole::RouteRz: return cnot_injection;
        case QueueRole::RouteCnot: return cnot;
        case QueueRole::EdgeRotation: return edge_rotation;
        case QueueRole::HadamardHelper: return hadamard;
    }
    return 0.0;
}

QueueSet::QueueSet(std::size_t num_ancilla) {
    queues_.reserve(num_ancilla);
    for (std::size_t a = 0; a < num_ancilla; ++a) queues_.emplace_back(static_cast<AncillaId>(a));
}

void QueueSet::push(AncillaId a, QueueEntry entry) {
    AncillaQueue& q = queues_.at(a);
    if (q.find(entry.gate)) {
        throw std::logic_error("ancilla " + std::to_string(a) + " already queues gate " + std::to_string(entry.gate));
    }
    if (entry.helper && *entry.helper == a) throw std::logic_error("helper ancilla equals its own queue");
    q.entries_.push_back(entry);
    auto& h = holders_[entry.gate];
    h.insert(std::upper_bound(h.begin(), h.end(), a), a);
}

bool QueueSet::remove(AncillaId a, GateId gate) {
    AncillaQueue& q = queues_.at(a);
    auto it = std::find_if(q.entries_.begin(), q.entries_.end(), [gate](const QueueEntry& e) { return e.gate == gate; });
    if (it == q.entries_.end()) return false;
    const bool was_head = it == q.entries_.begin();
    q.entries_.erase(it);
    if (q.prep && q.prep->gate == gate) q.prep.reset();
    if (was_head) {
        q.status = QueueStatus::R;
        if (q.prep && q.is_head(q.prep->gate)) q.status = q.prep->done ? QueueStatus::D : QueueStatus::P;
    }
    auto h = holders_.find(gate);
    if (h != holders_.end()) {
        std::erase(h->second, a);
        if (h->second.empty()) holders_.erase(h);
    }
    return true;
}

std::optional<GateId> QueueSet::reclaim(AncillaId a) {
    AncillaQueue& q = queues_.at(a);
    if (!q.background_prep()) return std::nullopt;
    const GateId g = q.prep->gate;
    q.prep.reset();
    return g;
}

std::vector<AncillaId> QueueSet::remove_all(GateId gate) {
    std::vector<AncillaId> out = holders(gate);
    for (AncillaId a : out) remove(a, gate);
    return out;
}

std::vector<AncillaId> QueueSet::holders(GateId gate) const {
    auto it = holders_.find(gate);
    return it == holders_.end() ? std::vector<AncillaId>{} : it->second;
}

double QueueSet::expected_free(AncillaId a, const ExpectedCosts& costs) const {
    double total = 0.0;
    for (const auto& e : queues_.at(a).entries()) total += costs.of(e);
    return total;
}

std::vector<double> QueueSet::expected_free_all(const ExpectedCosts& costs) const {
    std::vector<double> out(queues_.size());
    for (AncillaId a = 0; a < queues_.size(); ++a) out[a] = expected_free(a, costs);
    return out;
}

bool QueueSet::all_empty() const {
    return std::all_of(queues_.begin(), queues_.end(), [](const AncillaQueue& q) { return q.empty(); });
}

RzClaims QueueSet::enqueue_rz(GateId gate, QubitId q, const Angle& theta, const Fabric& fabric,
                              EdgeOrientation orientation) {
    if (holders_.count(gate)) throw std::logic_error("Rz gate " + std::to_string(gate) + " already enqueued");
    RzClaims claims;
    std::vector<std::pair<AncillaId, std::optional<AncillaId>>> prepare;

    for (AncillaId a : fabric.edge_ancillas(q, orientation, EdgeType::Z)) prepare.emplace_back(a, std::nullopt);

    const Position p = fabric.data_position(q);
    for (int dr : {-1, 1}) {
        for (int dc : {-1, 1}) {
            const auto diag = fabric.ancilla_at({p.row + dr, p.col + dc});
            if (!diag) continue;
            // The diagonal touches one vertical and one horizontal side tile
            // of q; exactly one of them faces an X edge.
            const Side vertical = dr < 0 ? Side::Top : Side::Bottom;
            const Side horizontal = dc < 0 ? Side::Left : Side::Right;
            const Side x_side = edge_type(orientation, vertical) == EdgeType::X ? vertical : horizontal;
            const auto helper = fabric.neighbor_ancilla(p, x_side);
            if (!helper) continue;
            prepare.emplace_back(*diag, *helper);
            if (std::find(claims.route.begin(), claims.route.end(), *helper) == claims.route.end()) {
                claims.route.push_back(*helper);
            }
        }
    }
    std::sort(prepare.begin(), prepare.end());
    std::sort(claims.route.begin(), claims.route.end());
    if (prepare.empty()) {
        throw std::logic_error("no ancilla can prepare for Rz on qubit " + std::to_string(q));
    }

    const std::uint64_t seq = next_seq();
    for (const auto& [a, helper] : prepare) {
        push(a, QueueEntry{gate, QueueRole::PrepareRz, q, helper, theta, seq});
        claims.prepare.push_back(a);
    }
    for (AncillaId h : claims.route) {
        push(h, QueueEntry{gate, QueueRole::RouteRz, q, std::nullopt, Angle{}, seq});
    }
    return claims;
}

PromotionEffects QueueSet::on_prep_success(GateId gate, AncillaId winner, std::optional<AncillaId> keep_helper) {
    AncillaQueue& wq = queues_.at(winner);
    const QueueEntry* we = wq.find(gate);
    if (!we || !wq.is_head(gate) || wq.status != QueueStatus::D || we->role != QueueRole::PrepareRz) {
        throw std::logic_error("prep success on ancilla " + std::to_string(winner) + " without a prepared state");
    }
    const Angle next = we->angle.doubled();
    PromotionEffects fx;
    for (AncillaId a : holders(gate)) {
        if (a == winner) continue;
        AncillaQueue& q = queues_[a];
        QueueEntry* e = q.find(gate);
        if (e->role != QueueRole::PrepareRz) {
            if (next.is_clifford() && (!keep_helper || a != *keep_helper)) {
                remove(a, gate);
                fx.released.push_back(a);
            }
            continue;
        }
        if (next.is_clifford()) {
            remove(a, gate);
            fx.released.push_back(a);
            continue;
        }
        e->angle = next;
        if (q.prep && q.prep->gate == gate && !(q.prep->angle == next)) {
            (q.prep->done ? fx.discarded : fx.aborted).push_back(a);
            q.prep.reset();
            if (q.is_head(gate)) q.status = QueueStatus::R;
        }
    }
    return fx;
}

InjectionEffects QueueSet::on_injection_result(GateId gate, InjectionResult result, AncillaId winner) {
    AncillaQueue& wq = queues_.at(winner);
    QueueEntry* we = wq.find(gate);
    if (!we || we->role != QueueRole::PrepareRz) {
        throw std::logic_error("injection result for ancilla without the gate's entry");
    }
    InjectionEffects fx;
    const Angle next = we->angle.doubled();
    if (result == InjectionResult::Success || next.is_clifford()) {
        fx.gate_finished = true;
        fx.clifford_fixup = result == InjectionResult::Fail;
        fx.released = remove_all(gate);
        return fx;
    }
    we->angle = next;
    wq.status = QueueStatus::R;
    wq.prep.reset();
    return fx;
}

std::vector<GateId> tie_break(std::span<const GateId> candidates, const DependencyDag& dag) {
    std::vector<GateId> out(candidates.begin(), candidates.end());
    std::sort(out.begin(), out.end(), [&dag](GateId a, GateId b) {
        const auto da = dag.remaining_depth.at(a);
        const auto db = dag.remaining_depth.at(b);
        return da != db ? da > db : a < b;
    });
    return out;
}

}  // namespace latsched
