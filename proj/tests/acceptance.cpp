// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
#include "latsched/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>

using namespace latsched;

namespace {

// Pinned tolerances.
constexpr int kRzSamples = 10000;
constexpr double kIrrationalLo = 1.95, kIrrationalHi = 2.05;
constexpr double kEighthLo = 1.45, kEighthHi = 1.55;
constexpr int kMinimaxAssignments = 200;
constexpr int kIncrementalUpdates = 1000;
constexpr double kWeightTol = 1e-9;
constexpr int kSeeds = 10;
constexpr double kMinSpeedup = 1.5;
constexpr double kMinWithin2 = 0.50;
constexpr double kMinWithin6 = 0.85;
constexpr double kMaxKSpread = 0.10;
constexpr double kMinCompressedSpeedup = 1.3;
constexpr double kMaxCompressionSlowdown = 0.50;
constexpr double kBudgetCrit1 = 10.0, kBudgetCrit3 = 60.0, kBudgetCrit4 = 10.0, kBudgetCrit5 = 900.0;

const char* const kSubset[] = {"qft:18", "ising:34", "wstate:27", "ghz:27"};

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("CRITERION %d %s: %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// ---- 1: RUS expectation --------------------------------------------------

double mean_injections(const Angle& theta, bool& exact_one) {
    Circuit c(1);
    c.add_rz(0, theta);
    const Fabric f = build_star_grid(1);
    double sum = 0.0;
    exact_one = true;
    for (int s = 1; s <= kRzSamples; ++s) {
        EngineConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(s);
        const auto r = run_dynamic(c, f, cfg);
        sum += r.traces[0].injections;
        exact_one = exact_one && r.traces[0].injections == 1;
    }
    return sum / kRzSamples;
}

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    bool unused = false, quarter_exact = false;
    const double tiny = mean_injections(Angle::pi_multiple(1, 1024), unused);
    const double eighth = mean_injections(Angle::pi_multiple(1, 8), unused);
    const double quarter = mean_injections(Angle::pi_multiple(1, 4), quarter_exact);
    const double t = seconds_since(t0);
    const bool ok = tiny >= kIrrationalLo && tiny <= kIrrationalHi && eighth >= kEighthLo && eighth <= kEighthHi &&
                    quarter == 1.0 && quarter_exact && t < kBudgetCrit1;
    report(1, ok,
           "mean injections pi/1024 " + fmt("%.4f", tiny) + ", pi/8 " + fmt("%.4f", eighth) + ", pi/4 " +
               fmt("%.4f", quarter) + " over " + std::to_string(kRzSamples) + " runs each, " + fmt("%.2f s", t));
}

// ---- 2: CNOT cost table ----------------------------------------------------

void criterion2() {
    const Fabric f = Fabric::from_roles(1, 3, {TileRole::Data, TileRole::Ancilla, TileRole::Data}, {0, 1});
    Circuit c(2);
    c.add_cnot(0, 1);
    using O = EdgeOrientation;
    struct Case {
        O control, target;
        std::int64_t expected;
    };
    const Case cases[] = {{O::VerticalZ, O::HorizontalZ, 2}, {O::VerticalZ, O::VerticalZ, 5},
                          {O::HorizontalZ, O::HorizontalZ, 5}, {O::HorizontalZ, O::VerticalZ, 8}};
    bool ok = true;
    std::string got;
    for (Scheme s : {Scheme::Dynamic, Scheme::StaticGreedy, Scheme::StaticLayered}) {
        for (const Case& k : cases) {
            EngineConfig cfg;
            cfg.initial_orientation = {k.control, k.target};
            const auto r = run_scheme(s, c, f, cfg);
            const auto cycles = r.traces[0].latency_cycles(cfg.timing.d);
            ok = ok && cycles == k.expected && r.audit.ok();
            if (s == Scheme::Dynamic) got += (got.empty() ? "" : "/") + std::to_string(cycles);
        }
    }
    report(2, ok, "correct/one wrong/one wrong/both wrong edges = " + got + " cycles (expected 2/5/5/8, all schemes)");
}

// ---- 3: minimax routing oracle --------------------------------------------

// Smallest threshold at which a and b become connected, for every pair.
std::vector<double> brute_minimax_all(const AncillaGraph& g, const std::vector<double>& w) {
    const std::size_t n = g.num_nodes;
    std::vector<double> out(n * n, -1.0);
    for (std::size_t a = 0; a < n; ++a) out[a * n + a] = 0.0;
    std::vector<double> levels(w);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (double t : levels) {
        std::vector<AncillaId> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<AncillaId(AncillaId)> find = [&](AncillaId x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            if (w[e] <= t) parent[find(g.edges[e].first)] = find(g.edges[e].second);
        }
        for (AncillaId a = 0; a < n; ++a) {
            for (AncillaId b = 0; b < n; ++b) {
                if (out[a * n + b] < 0.0 && find(a) == find(b)) out[a * n + b] = t;
            }
        }
    }
    return out;
}

void criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    SimRng rng(SimRng::derive_seed(3, 0));
    std::size_t checked = 0, bad = 0;
    for (int side : {4, 5}) {
        const auto g = AncillaGraph::grid(side, side);
        const std::size_t n = g.num_nodes;
        for (int trial = 0; trial < kMinimaxAssignments; ++trial) {
            std::vector<double> w(g.edges.size());
            // Alternate continuous weights with coarse activity-like levels (many ties).
            for (auto& x : w) x = trial % 2 ? rng.uniform() : static_cast<double>(rng.uniform_index(5)) / 4.0;
            const auto snap = compute_mst(g, w);
            const auto oracle = brute_minimax_all(g, w);
            for (AncillaId a = 0; a < n; ++a) {
                for (AncillaId b = 0; b < n; ++b) {
                    const auto p = minimax_path(snap, a, b);
                    double m = 0.0;
                    for (auto e : p.edges) m = std::max(m, w[e]);
                    ++checked;
                    if (m != oracle[a * n + b] || snap.tree.bottleneck(a, b) != oracle[a * n + b]) ++bad;
                }
            }
        }
    }
    const double t = seconds_since(t0);
    report(3, bad == 0 && t < kBudgetCrit3,
           std::to_string(checked) + " (pair, assignment) checks on 4x4 and 5x5 grids, " + std::to_string(bad) +
               " mismatches, " + fmt("%.2f s", t));
}

// ---- 4: incremental MST ----------------------------------------------------

void criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = AncillaGraph::grid(10, 10);
    SimRng rng(SimRng::derive_seed(4, 0));
    std::vector<double> w(g.edges.size());
    for (auto& x : w) x = rng.uniform();
    auto snap = compute_mst(g, w);
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < kIncrementalUpdates; ++i) {
        const auto e = static_cast<std::uint32_t>(rng.uniform_index(g.edges.size()));
        w[e] = rng.uniform();
        snap = incremental_update(snap, g, e, w[e]);
        const double diff = std::abs(snap.tree.total_weight() - compute_mst(g, w).tree.total_weight());
        worst = std::max(worst, diff);
        if (diff > kWeightTol || snap.tree.edge_ids().size() != g.num_nodes - 1) ++bad;
    }
    const double t = seconds_since(t0);
    report(4, bad == 0 && t < kBudgetCrit4,
           std::to_string(kIncrementalUpdates) + " chained updates on 10x10, " + std::to_string(bad) +
               " weight mismatches (max diff " + fmt("%.2e", worst) + "), " + fmt("%.2f s", t));
}

// ---- 5-9: benchmark subset -------------------------------------------------

struct SuiteRuns {
    // [benchmark][seed] per configuration
    std::map<std::string, std::vector<std::vector<RunResult>>> runs;
    std::size_t audits = 0;
    std::size_t audit_failures = 0;
    std::string first_violation;
};

std::vector<std::vector<RunResult>> run_subset(Scheme scheme, double compression, int k, SuiteRuns& suite) {
    std::vector<std::vector<RunResult>> out;
    for (const char* src : kSubset) {
        const Circuit c = load_circuit(src);
        Fabric f = build_star_grid(c.num_qubits());
        if (compression > 0.0) f = compress(f, compression, 1).first;
        std::vector<RunResult> per_seed;
        for (int s = 1; s <= kSeeds; ++s) {
            EngineConfig cfg;
            cfg.k = k;
            cfg.seed = static_cast<std::uint64_t>(s);
            RunResult r = run_scheme(scheme, c, f, cfg);
            ++suite.audits;
            if (!r.audit.ok()) {
                ++suite.audit_failures;
                if (suite.first_violation.empty() && !r.audit.violations.empty()) {
                    suite.first_violation = std::string(src) + ": " + r.audit.violations[0];
                }
            }
            r.traces.clear();
            r.occupancy = {};
            per_seed.push_back(std::move(r));
        }
        out.push_back(std::move(per_seed));
    }
    return out;
}

double mean_cycles(const std::vector<RunResult>& v) {
    double s = 0.0;
    for (const auto& r : v) s += static_cast<double>(r.metrics.total_cycles);
    return s / static_cast<double>(v.size());
}

// Geomean over benchmarks of mean(reference) / mean(subject).
double geomean_speedup(const std::vector<std::vector<RunResult>>& subject,
                       const std::vector<std::vector<RunResult>>& reference, std::string& detail) {
    std::vector<double> s;
    for (std::size_t b = 0; b < subject.size(); ++b) {
        s.push_back(mean_cycles(reference[b]) / mean_cycles(subject[b]));
        detail += std::string(b ? ", " : "") + kSubset[b] + " " + fmt("%.2f", s.back());
    }
    return geometric_mean(s);
}

double geomean_time(const std::vector<std::vector<RunResult>>& runs) {
    std::vector<double> t;
    for (const auto& b : runs) t.push_back(mean_cycles(b));
    return geometric_mean(t);
}

void criteria5to9() {
    SuiteRuns suite;
    const auto t0 = std::chrono::steady_clock::now();
    const auto dyn = run_subset(Scheme::Dynamic, 0.0, 25, suite);
    const auto greedy = run_subset(Scheme::StaticGreedy, 0.0, 25, suite);
    const double t5 = seconds_since(t0);

    // 5
    std::string detail;
    const double speedup = geomean_speedup(dyn, greedy, detail);
    report(5, speedup >= kMinSpeedup && t5 < kBudgetCrit5,
           "geomean dynamic speedup vs static_greedy " + fmt("%.3f", speedup) + " (" + detail + "), " +
               std::to_string(kSeeds) + " seeds, " + fmt("%.2f s", t5));

    // 6
    std::array<std::uint64_t, kHistogramBins + 1> dh{}, sh{};
    for (std::size_t b = 0; b < dyn.size(); ++b) {
        for (int s = 0; s < kSeeds; ++s) {
            for (std::size_t i = 0; i <= kHistogramBins; ++i) {
                dh[i] += dyn[b][static_cast<std::size_t>(s)].metrics.cnot_hist[i];
                sh[i] += greedy[b][static_cast<std::size_t>(s)].metrics.cnot_hist[i];
            }
        }
    }
    const double total = static_cast<double>(std::accumulate(dh.begin(), dh.end(), std::uint64_t{0}));
    const double within2 = static_cast<double>(dh[0] + dh[1]) / total;
    double w6 = 0.0;
    for (std::size_t i = 0; i < 6; ++i) w6 += static_cast<double>(dh[i]);
    const double within6 = w6 / total;
    const auto mode_bin = static_cast<std::size_t>(std::max_element(sh.begin(), sh.end()) - sh.begin());
    const std::size_t mode_cycles = mode_bin + 1;
    std::string hist = "dynamic histogram (1..20,>20):";
    for (auto v : dh) hist += " " + std::to_string(v);
    hist += "; static_greedy:";
    for (auto v : sh) hist += " " + std::to_string(v);
    report(6, within2 >= kMinWithin2 && within6 >= kMinWithin6 && (mode_cycles == 5 || mode_cycles == 8),
           "dynamic CNOTs within 2 cycles " + fmt("%.3f", within2) + ", within 6 " + fmt("%.3f", within6) +
               ", static_greedy mode " + std::to_string(mode_cycles) + " cycles; " + hist);

    // 7
    const auto dyn200 = run_subset(Scheme::Dynamic, 0.0, 200, suite);
    const double g25 = geomean_time(dyn);
    const double g200 = geomean_time(dyn200);
    const double spread = std::abs(g25 - g200) / std::min(g25, g200);
    report(7, spread <= kMaxKSpread,
           "dynamic geomean cycles k=25 " + fmt("%.2f", g25) + ", k=200 " + fmt("%.2f", g200) + ", spread " +
               fmt("%.3f", spread));

    // 8
    const auto dync = run_subset(Scheme::Dynamic, 1.0, 25, suite);
    const auto greedyc = run_subset(Scheme::StaticGreedy, 1.0, 25, suite);
    std::string cdetail;
    const double cspeedup = geomean_speedup(dync, greedyc, cdetail);
    const double slowdown = geomean_time(dync) / g25 - 1.0;
    report(8, cspeedup >= kMinCompressedSpeedup && slowdown <= kMaxCompressionSlowdown,
           "100% compression: geomean speedup " + fmt("%.3f", cspeedup) + " (" + cdetail + "), dynamic slowdown " +
               fmt("%.3f", slowdown) + " vs uncompressed");

    // 9: replay every benchmark, scheme and compression level with one seed.
    std::size_t replays = 0, mismatches = 0;
    for (const char* src : kSubset) {
        const Circuit c = load_circuit(src);
        for (double frac : {0.0, 1.0}) {
            Fabric f = build_star_grid(c.num_qubits());
            if (frac > 0.0) f = compress(f, frac, 1).first;
            for (Scheme s : {Scheme::Dynamic, Scheme::StaticGreedy, Scheme::StaticLayered}) {
                EngineConfig cfg;
                cfg.seed = 7;
                const auto a = run_scheme(s, c, f, cfg);
                const auto b = run_scheme(s, c, f, cfg);
                suite.audits += 2;
                suite.audit_failures += !a.audit.ok() + !b.audit.ok();
                ++replays;
                if (metrics_to_json(a.metrics) != metrics_to_json(b.metrics) ||
                    trace_to_jsonl(a.traces, cfg.timing.d) != trace_to_jsonl(b.traces, cfg.timing.d)) {
                    ++mismatches;
                }
            }
        }
    }
    report(9, mismatches == 0 && suite.audit_failures == 0,
           std::to_string(replays) + " replays, " + std::to_string(mismatches) + " non-identical; " +
               std::to_string(suite.audits) + " audited runs, " + std::to_string(suite.audit_failures) + " failed" +
               (suite.first_violation.empty() ? "" : " (" + suite.first_violation + ")"));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criteria5to9();
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
