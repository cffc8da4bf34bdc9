// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "latsched/engine.hpp"
#include "latsched/rng.hpp"

#include <memory>
#include <queue>
#include <vector>

namespace latsched::detail {

enum class EventKind : std::uint8_t { OpDone = 0, PrepDone = 1, CycleBoundary = 2 };

struct Event {
    Round time = 0;
    EventKind kind = EventKind::OpDone;
    std::uint64_t seq = 0;
    std::uint32_t a = 0;  // gate / ancilla
    std::uint64_t b = 0;  // op tag / epoch
};

struct EventLater {
    bool operator()(const Event& x, const Event& y) const {
        if (x.time != y.time) return x.time > y.time;
        if (x.kind != y.kind) return x.kind > y.kind;
        return x.seq > y.seq;
    }
};

enum RngTag : std::uint64_t { kInjectionStream = 1, kPrepStream = 2 };

/// Event loop, clock, gate bookkeeping, occupancy logging and activity
/// accounting shared by all schemes.
class SimCore {
  public:
    SimCore(const Circuit& circuit, const Fabric& fabric, const EngineConfig& config, Scheme scheme);
    virtual ~SimCore() = default;

    RunResult run();

  protected:
    virtual void on_start() {}
    virtual void on_op_done(const Event& e) = 0;
    virtual void on_prep_done(const Event& e) = 0;
    virtual void on_cycle(std::int64_t /*cycle*/) {}
    virtual void dispatch() = 0;
    virtual bool queues_empty() const { return true; }

    Round now() const { return now_; }
    Round d() const { return config_.timing.cycle_rounds(); }
    bool aligned() const { return now_ % d() == 0; }
    std::int64_t cycle() const { return now_ / d(); }

    void post(Round time, EventKind kind, std::uint32_t a, std::uint64_t b = 0);

    /// Closed interval on an ancilla / data qubit (operation with known end).
    void log_ancilla(AncillaId a, Round start, Round end, GateId gate, const char* what);
    void log_data(QubitId q, Round start, Round end, GateId gate, const char* what);
    /// Open-ended ancilla interval (preparation, holding a state).
    void open_ancilla(AncillaId a, GateId gate, const char* what);
    void close_ancilla(AncillaId a);
    bool ancilla_open(AncillaId a) const { return open_[a].has_value(); }

    bool data_free(QubitId q) const { return data_until_[q] <= now_; }
    bool ancilla_op_free(AncillaId a) const { return ancilla_until_[a] <= now_; }

    /// Marks the gate scheduled at the current time.
    void mark_scheduled(GateId g);
    void mark_started(GateId g);
    /// Completes the gate now; successors whose predecessors are all done
    /// become ready.
    void finish_gate(GateId g);
    std::vector<GateId> take_ready();
    bool done(GateId g) const { return traces_[g].phase == GatePhase::Done; }
    void progress() { last_progress_ = now_; }

    SimRng& prep_rng(GateId g);
    SimRng& injection_rng(GateId g);

    /// Next gate on qubit q after gate g (none: circuit.size()).
    GateId next_on_qubit(GateId g, QubitId q) const;

    const Circuit& circuit_;
    const Fabric& fabric_;
    EngineConfig config_;
    Scheme scheme_;
    DependencyDag dag_;
    std::vector<TraceRecord> traces_;
    std::vector<EdgeOrientation> orientation_;
    ActivityTracker activity_;
    std::vector<std::string> queue_trace_;

  private:
    void handle_cycle_boundary();

    Round now_ = 0;
    Round last_progress_ = 0;
    std::uint64_t event_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, EventLater> events_;
    std::vector<std::uint32_t> pending_preds_;
    std::vector<GateId> ready_;
    std::size_t remaining_ = 0;
    std::vector<std::unique_ptr<SimRng>> prep_rng_;
    std::vector<std::unique_ptr<SimRng>> injection_rng_;
    std::vector<std::vector<GateId>> next_on_qubit_;

    OccupancyLog occupancy_;
    std::vector<Round> data_until_;
    std::vector<Round> ancilla_until_;
    std::vector<std::optional<Interval>> open_;
    std::vector<char> busy_mark_;
};

}  // namespace latsched::detail
