// SPDX-License-Identifier: Apache-2.0
#include "latsched/engine.hpp"

#include <algorithm>

namespace latsched {
namespace {

// First overlapping pair, if any. Touching intervals ([a,b) then [b,c)) are fine.
std::optional<std::pair<Interval, Interval>> find_overlap(std::vector<Interval> iv) {
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
        return a.start != b.start ? a.start < b.start : a.end < b.end;
    });
    for (std::size_t i = 1; i < iv.size(); ++i) {
        if (iv[i].start < iv[i - 1].end) return std::make_pair(iv[i - 1], iv[i]);
    }
    return std::nullopt;
}

std::string describe(const Interval& x) {
    return std::string(x.what) + "(g" + std::to_string(x.gate) + ")[" + std::to_string(x.start) + "," +
           std::to_string(x.end) + ")";
}

}  // namespace

AuditReport audit_run(const Circuit& circuit, const DependencyDag& dag, const std::vector<TraceRecord>& traces,
                      const OccupancyLog& occupancy, bool queues_empty) {
    AuditReport r;
    r.queues_empty = queues_empty;
    if (!queues_empty) r.violations.push_back("ancilla queues not empty after the run");

    for (const TraceRecord& t : traces) {
        if (t.phase != GatePhase::Done) {
            r.all_done = false;
            r.violations.push_back("gate " + std::to_string(t.gate) + " not done");
            continue;
        }
        for (GateId p : dag.predecessors[t.gate]) {
            if (traces[p].finished_at < 0 || t.started_at < traces[p].finished_at) {
                r.dependency_safe = false;
                r.violations.push_back("gate " + std::to_string(t.gate) + " started at " + std::to_string(t.started_at) +
                                       " before predecessor " + std::to_string(p) + " finished");
            }
        }
    }
    // Data-qubit intervals must also respect program order.
    for (QubitId q = 0; q < occupancy.data.size(); ++q) {
        for (const Interval& x : occupancy.data[q]) {
            if (x.gate < circuit.size() && x.start < traces[x.gate].scheduled_at) {
                r.dependency_safe = false;
                r.violations.push_back("qubit " + std::to_string(q) + " used by gate " + std::to_string(x.gate) +
                                       " before it was scheduled");
            }
        }
        if (auto o = find_overlap(occupancy.data[q])) {
            r.data_exclusive = false;
            r.violations.push_back("qubit " + std::to_string(q) + ": " + describe(o->first) + " overlaps " +
                                   describe(o->second));
        }
    }
    for (AncillaId a = 0; a < occupancy.ancilla.size(); ++a) {
        if (auto o = find_overlap(occupancy.ancilla[a])) {
            r.ancilla_exclusive = false;
            r.violations.push_back("ancilla " + std::to_string(a) + ": " + describe(o->first) + " overlaps " +
                                   describe(o->second));
        }
    }
    return r;
}

}  // namespace latsched
