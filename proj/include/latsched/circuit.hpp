// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "latsched/angle.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latsched {

using QubitId = std::uint32_t;
using GateId = std::uint32_t;

enum class GateKind { Rz, H, X, CNOT };

std::string_view to_string(GateKind kind);

/// One gate of the program. For CNOT, qubits[0] is the control and qubits[1]
/// the target. theta is set iff kind == Rz.
struct Gate {
    GateId id = 0;
    GateKind kind = GateKind::H;
    std::array<QubitId, 2> qubits{};
    std::optional<Angle> theta;

    std::size_t arity() const { return kind == GateKind::CNOT ? 2 : 1; }
    QubitId control() const { return qubits[0]; }
    QubitId target() const { return qubits[1]; }
    bool touches(QubitId q) const {
        return qubits[0] == q || (kind == GateKind::CNOT && qubits[1] == q);
    }

    bool operator==(const Gate&) const = default;
};

class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(std::size_t num_qubits) : num_qubits_(num_qubits) {}

    std::size_t num_qubits() const { return num_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    const Gate& operator[](GateId id) const { return gates_.at(id); }

    GateId add_rz(QubitId q, Angle theta);
    GateId add_h(QubitId q);
    GateId add_x(QubitId q);
    GateId add_cnot(QubitId control, QubitId target);

    std::size_t count(GateKind kind) const;

  private:
    GateId push(Gate g);

    std::size_t num_qubits_ = 0;
    std::vector<Gate> gates_;
};

/// Per-gate predecessor/successor lists following program order on every
/// qubit, plus the remaining depth (longest path to any sink, counting the
/// gate itself).
struct DependencyDag {
    std::vector<std::vector<GateId>> predecessors;
    std::vector<std::vector<GateId>> successors;
    std::vector<std::uint32_t> remaining_depth;

    std::size_t size() const { return remaining_depth.size(); }
};

DependencyDag build_dag(const Circuit& circuit);

/// ASAP layer index per gate (0-based): 1 + max layer over predecessors.
std::vector<std::uint32_t> asap_layers(const DependencyDag& dag);

class QasmError : public std::runtime_error {
  public:
    QasmError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Parses the OpenQASM 2.0 subset used by the benchmark harness: qreg/creg,
/// rz/h/x/cx, measure and barrier (ignored), and t/tdg/s/sdg/z/p/u1
/// (rewritten to rz).
Circuit parse_qasm(std::string_view text);
Circuit load_qasm_file(const std::string& path);
std::string write_qasm(const Circuit& circuit);

enum class BenchmarkFamily { Qft, IsingTrotter, WState, Ghz };

std::optional<BenchmarkFamily> parse_benchmark_family(std::string_view name);
std::string_view to_string(BenchmarkFamily family);

/// Deterministic built-in approximations of the QASMBench families.
Circuit generate_benchmark(BenchmarkFamily family, std::size_t num_qubits);

/// "qft:18" style generator spec or a path to a .qasm file.
Circuit load_circuit(const std::string& source);

}  // namespace latsched
