// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "latsched/angle.hpp"
#include "latsched/circuit.hpp"
#include "latsched/fabric.hpp"
#include "latsched/stochastic.hpp"

#include <deque>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace latsched {

enum class QueueRole : std::uint8_t { PrepareRz, RouteRz, RouteCnot, EdgeRotation, HadamardHelper };

/// Head-of-queue status: Ready, Executing, Preparing, Done preparing,
/// Finished.
enum class QueueStatus : std::uint8_t { R, E, P, D, F };

std::string_view to_string(QueueRole role);
char to_char(QueueStatus status);

struct QueueEntry {
    GateId gate = 0;  // circuit gate id, or a synthetic id for edge rotations
    QueueRole role = QueueRole::RouteCnot;
    QubitId qubit = 0;
    std::optional<AncillaId> helper;  // CNOT-injection helper for PrepareRz
    Angle angle;                      // PrepareRz only
    std::uint64_t seq = 0;            // global enqueue order
};

struct PrepState {
    GateId gate = 0;
    Angle angle;
    Round started = 0;
    Round done_at = 0;
    std::uint64_t epoch = 0;
    bool done = false;  // state prepared and held
};

class AncillaQueue {
  public:
    explicit AncillaQueue(AncillaId id = 0) : id_(id) {}

    AncillaId id() const { return id_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::deque<QueueEntry>& entries() const { return entries_; }
    const QueueEntry* head() const { return entries_.empty() ? nullptr : &entries_.front(); }
    QueueEntry* find(GateId gate);
    const QueueEntry* find(GateId gate) const;
    bool is_head(GateId gate) const { return !entries_.empty() && entries_.front().gate == gate; }

    QueueStatus status = QueueStatus::R;
    /// The ancilla's preparation, in progress or held. Usually for the head
    /// (status P or D); a non-head PrepareRz entry may prepare in the
    /// background while the head is stalled, leaving status R.
    std::optional<PrepState> prep;

    bool background_prep() const { return prep && !is_head(prep->gate); }

  private:
    friend class QueueSet;
    AncillaId id_;
    std::deque<QueueEntry> entries_;
};

/// Expected durations (cycles) used for expected free times.
struct ExpectedCosts {
    double cnot = 2.0;
    double edge_rotation = 3.0;
    double hadamard = 3.0;
    double zz_injection = 1.0;
    double cnot_injection = 2.0;
    double prep = 0.0;  // analytic preparation mean in cycles

    static ExpectedCosts from(const TimingConfig& t, const RusModel& rus);
    double of(const QueueEntry& e) const;
};

struct RzClaims {
    std::vector<AncillaId> prepare;  // PrepareRz entries
    std::vector<AncillaId> route;    // RouteRz entries (helpers)
};

struct PromotionEffects {
    std::vector<AncillaId> aborted;    // preparation stopped, entry now holds the new angle
    std::vector<AncillaId> discarded;  // held a state for a stale angle
    std::vector<AncillaId> released;   // entry removed (next angle is Clifford)
};

struct InjectionEffects {
    bool gate_finished = false;
    bool clifford_fixup = false;
    std::vector<AncillaId> released;  // ancillas whose entry for the gate was removed
};

/// All per-ancilla queues of one simulation.
class QueueSet {
  public:
    explicit QueueSet(std::size_t num_ancilla);

    std::size_t size() const { return queues_.size(); }
    AncillaQueue& operator[](AncillaId a) { return queues_.at(a); }
    const AncillaQueue& operator[](AncillaId a) const { return queues_.at(a); }

    /// Appends an entry; throws std::logic_error if the queue already holds
    /// an entry for the same gate id or the helper is the ancilla itself.
    void push(AncillaId a, QueueEntry entry);
    /// Removes the gate's entry from one queue, dropping its preparation. If
    /// it was the head the status resets to R, or to P/D when the new head
    /// already has a background preparation.
    bool remove(AncillaId a, GateId gate);
    /// Aborts a background preparation so a senior entry can use the
    /// ancilla; returns the gate whose preparation was dropped.
    std::optional<GateId> reclaim(AncillaId a);
    /// Removes the gate from every queue holding it; returns those ancillas.
    std::vector<AncillaId> remove_all(GateId gate);
    /// Ancillas whose queue holds an entry for the gate, ascending.
    std::vector<AncillaId> holders(GateId gate) const;

    std::uint64_t next_seq() { return seq_++; }
    std::uint64_t next_epoch() { return ++epoch_; }

    double expected_free(AncillaId a, const ExpectedCosts& costs) const;
    std::vector<double> expected_free_all(const ExpectedCosts& costs) const;
    bool all_empty() const;

    /// Claims for Rz(theta) on data qubit q: every ancilla on q's Z edges
    /// prepares (ZZ injection); every diagonal ancilla of the 3x3
    /// neighbourhood that touches an X-edge ancilla of q prepares with that
    /// ancilla as CNOT-injection helper, and the helper gets a RouteRz entry.
    /// Entries are pushed atomically (one sequence number).
    RzClaims enqueue_rz(GateId gate, QubitId q, const Angle& theta, const Fabric& fabric,
                        EdgeOrientation orientation);

    /// The winner's preparation succeeded (status D): every other PrepareRz
    /// entry of the gate is updated in place to twice the winner's angle.
    /// Siblings preparing or holding another angle abort, at the head or in
    /// the background. If the doubled
    /// angle is Clifford the sibling entries are removed instead, keeping
    /// only the winner and keep_helper.
    PromotionEffects on_prep_success(GateId gate, AncillaId winner, std::optional<AncillaId> keep_helper);

    /// Injection by `winner` finished. Success (or a failure whose correction
    /// is Clifford) removes all entries of the gate. Otherwise the winner's
    /// entry is promoted to the doubled angle and its status reset to R.
    InjectionEffects on_injection_result(GateId gate, InjectionResult result, AncillaId winner);

  private:
    std::vector<AncillaQueue> queues_;
    std::unordered_map<GateId, std::vector<AncillaId>> holders_;
    std::uint64_t seq_ = 0;
    std::uint64_t epoch_ = 0;
};

/// Scheduling order for gates that became ready together: remaining depth
/// descending, then gate id ascending.
std::vector<GateId> tie_break(std::span<const GateId> candidates, const DependencyDag& dag);

}  // namespace latsched
