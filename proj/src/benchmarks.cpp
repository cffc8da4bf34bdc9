// SPDX-License-Identifier: Apache-2.0
#include "latsched/circuit.hpp"

#include <cmath>

namespace latsched {

std::optional<BenchmarkFamily> parse_benchmark_family(std::string_view name) {
    if (name == "qft") return BenchmarkFamily::Qft;
    if (name == "ising" || name == "ising_trotter" || name == "ising-trotter") return BenchmarkFamily::IsingTrotter;
    if (name == "wstate") return BenchmarkFamily::WState;
    if (name == "ghz") return BenchmarkFamily::Ghz;
    return std::nullopt;
}

std::string_view to_string(BenchmarkFamily family) {
    switch (family) {
        case BenchmarkFamily::Qft: return "qft";
        case BenchmarkFamily::IsingTrotter: return "ising";
        case BenchmarkFamily::WState: return "wstate";
        case BenchmarkFamily::Ghz: return "ghz";
    }
    return "?";
}

namespace {

// cp(lambda) c,t as rz(l/2) c; cx c,t; rz(-l/2) t; cx c,t; rz(l/2) t
void controlled_phase(Circuit& c, QubitId control, QubitId target, const Angle& lambda_half) {
    c.add_rz(control, lambda_half);
    c.add_cnot(control, target);
    c.add_rz(target, lambda_half.negated());
    c.add_cnot(control, target);
    c.add_rz(target, lambda_half);
}

Circuit qft(std::size_t n) {
    Circuit c(n);
    for (QubitId i = 0; i < n; ++i) {
        c.add_h(i);
        for (QubitId j = i + 1; j < n; ++j) {
            // lambda = pi / 2^(j-i), so lambda/2 = pi / 2^(j-i+1)
            controlled_phase(c, j, i, Angle::pi_multiple(1, std::int64_t{1} << (j - i + 1)));
        }
    }
    return c;
}

// One Trotter step of a transverse-field Ising chain: ZZ couplings on even
// then odd bonds, a field rotation on every site and a longitudinal term on
// odd sites.
Circuit ising(std::size_t n) {
    Circuit c(n);
    const Angle coupling = Angle::radians(0.3);
    const Angle field = Angle::radians(-0.45);
    const Angle longitudinal = Angle::radians(0.17);
    for (QubitId q = 0; q < n; ++q) c.add_h(q);
    for (QubitId parity = 0; parity < 2; ++parity) {
        for (QubitId q = parity; q + 1 < n; q += 2) {
            c.add_cnot(q, q + 1);
            c.add_rz(q + 1, coupling);
            c.add_cnot(q, q + 1);
        }
    }
    for (QubitId q = 0; q < n; ++q) c.add_rz(q, field);
    const std::size_t extra = n / 2 >= 1 ? n / 2 - 1 : 0;
    for (std::size_t k = 0; k < extra; ++k) c.add_rz(static_cast<QubitId>(2 * k + 1), longitudinal);
    return c;
}

// Linear W-state preparation: X on qubit 0, then a controlled-Ry hop along
// the chain. cRy(t) is S . cRx(t) . Sdg with cRx built from H, Rz and CX.
Circuit wstate(std::size_t n) {
    Circuit c(n);
    c.add_x(0);
    for (QubitId i = 0; i + 1 < n; ++i) {
        const QubitId t = i + 1;
        const double theta = 2.0 * std::acos(std::sqrt(1.0 / static_cast<double>(n - i)));
        c.add_rz(t, Angle::pi_multiple(1, 2));
        c.add_h(t);
        c.add_rz(t, Angle::radians(theta / 2.0));
        c.add_cnot(i, t);
        c.add_rz(t, Angle::radians(-theta / 2.0));
        c.add_cnot(i, t);
        c.add_h(t);
        c.add_rz(t, Angle::pi_multiple(-1, 2));
    }
    return c;
}

Circuit ghz(std::size_t n) {
    Circuit c(n);
    c.add_h(0);
    for (QubitId i = 0; i + 1 < n; ++i) c.add_cnot(i, i + 1);
    return c;
}

}  // namespace

Circuit generate_benchmark(BenchmarkFamily family, std::size_t num_qubits) {
    if (num_qubits < 2) throw std::invalid_argument("benchmark generators need at least 2 qubits");
    switch (family) {
        case BenchmarkFamily::Qft:
            if (num_qubits > 60) throw std::invalid_argument("qft generator supports at most 60 qubits");
            return qft(num_qubits);
        case BenchmarkFamily::IsingTrotter: return ising(num_qubits);
        case BenchmarkFamily::WState: return wstate(num_qubits);
        case BenchmarkFamily::Ghz: return ghz(num_qubits);
    }
    throw std::invalid_argument("unknown benchmark family");
}

}  // namespace latsched
