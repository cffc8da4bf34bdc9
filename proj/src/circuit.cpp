// SPDX-License-Identifier: Apache-2.0
#include "latsched/circuit.hpp"

#include <algorithm>
#include <filesystem>

namespace latsched {

std::string_view to_string(GateKind kind) {
    switch (kind) {
        case GateKind::Rz: return "rz";
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::CNOT: return "cx";
    }
    return "?";
}

GateId Circuit::push(Gate g) {
    for (std::size_t i = 0; i < g.arity(); ++i) {
        if (g.qubits[i] >= num_qubits_) {
            throw std::out_of_range("qubit index " + std::to_string(g.qubits[i]) +
                                    " out of range for " + std::to_string(num_qubits_) + " qubits");
        }
    }
    if (g.kind == GateKind::CNOT && g.qubits[0] == g.qubits[1]) {
        throw std::invalid_argument("cx with identical control and target");
    }
    g.id = static_cast<GateId>(gates_.size());
    gates_.push_back(g);
    return g.id;
}

GateId Circuit::add_rz(QubitId q, Angle theta) {
    return push(Gate{0, GateKind::Rz, {q, 0}, theta});
}
GateId Circuit::add_h(QubitId q) { return push(Gate{0, GateKind::H, {q, 0}, std::nullopt}); }
GateId Circuit::add_x(QubitId q) { return push(Gate{0, GateKind::X, {q, 0}, std::nullopt}); }
GateId Circuit::add_cnot(QubitId control, QubitId target) {
    return push(Gate{0, GateKind::CNOT, {control, target}, std::nullopt});
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

DependencyDag build_dag(const Circuit& circuit) {
    const std::size_t n = circuit.size();
    DependencyDag dag;
    dag.predecessors.assign(n, {});
    dag.successors.assign(n, {});
    dag.remaining_depth.assign(n, 1);

    constexpr GateId kNone = ~GateId{0};
    std::vector<GateId> last(circuit.num_qubits(), kNone);
    for (const Gate& g : circuit.gates()) {
        for (std::size_t i = 0; i < g.arity(); ++i) {
            const GateId prev = last[g.qubits[i]];
            if (prev != kNone) {
                auto& preds = dag.predecessors[g.id];
                if (std::find(preds.begin(), preds.end(), prev) == preds.end()) {
                    preds.push_back(prev);
                    dag.successors[prev].push_back(g.id);
                }
            }
            last[g.qubits[i]] = g.id;
        }
    }
    // Gate ids are a topological order.
    for (std::size_t i = n; i-- > 0;) {
        std::uint32_t best = 0;
        for (GateId s : dag.successors[i]) {
            best = std::max(best, dag.remaining_depth[s]);
        }
        dag.remaining_depth[i] = 1 + best;
    }
    return dag;
}

std::vector<std::uint32_t> asap_layers(const DependencyDag& dag) {
    std::vector<std::uint32_t> layer(dag.size(), 0);
    for (std::size_t i = 0; i < dag.size(); ++i) {
        for (GateId p : dag.predecessors[i]) {
            layer[i] = std::max(layer[i], layer[p] + 1);
        }
    }
    return layer;
}

Circuit load_circuit(const std::string& source) {
    const auto colon = source.find(':');
    if (colon != std::string::npos && !std::filesystem::exists(source)) {
        const auto family = parse_benchmark_family(source.substr(0, colon));
        if (!family) {
            throw std::invalid_argument("unknown benchmark family in '" + source + "'");
        }
        std::size_t n = 0;
        try {
            n = std::stoul(source.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad qubit count in '" + source + "'");
        }
        return generate_benchmark(*family, n);
    }
    return load_qasm_file(source);
}

}  // namespace latsched
