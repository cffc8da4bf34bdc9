// SPDX-License-Identifier: Apache-2.0
#include "latsched/cli.hpp"

#include <json.hpp>

#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

namespace latsched::cli {
namespace fs = std::filesystem;
namespace {

std::string fmt(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

// Circuit sources may be file paths; keep directory names flat.
std::string path_component(const std::string& s) {
    std::string base = s;
    if (s.find('/') != std::string::npos || (s.size() > 5 && s.ends_with(".qasm"))) {
        base = fs::path(s).stem().string();
    }
    for (char& ch : base) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                        ch == '.' || ch == '-' || ch == '_';
        if (!ok) ch = '_';
    }
    return base.empty() ? "circuit" : base;
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct Task {
    RunConfig config;  // resolved for this point
    std::string circuit;
    Scheme scheme = Scheme::Dynamic;
    std::uint64_t seed = 1;
    fs::path dir;  // per-run file directory
};

struct Prepared {
    Circuit circuit;
    Fabric fabric;
};

using PreparedKey = std::tuple<std::string, double, std::uint64_t>;

class PreparedCache {
  public:
    std::shared_ptr<const Prepared> get(const std::string& source, double compression, std::uint64_t cseed) {
        std::lock_guard lock(mu_);
        auto& slot = cache_[{source, compression, cseed}];
        if (!slot) {
            auto p = std::make_shared<Prepared>();
            p->circuit = load_circuit(source);
            p->fabric = build_star_grid(p->circuit.num_qubits());
            if (compression > 0.0) p->fabric = compress(p->fabric, compression, cseed).first;
            slot = std::move(p);
        }
        return slot;
    }

  private:
    std::mutex mu_;
    std::map<PreparedKey, std::shared_ptr<const Prepared>> cache_;
};

std::string run_json(const Task& t, const RunRecord& r, const std::string& config_text) {
    auto j = nlohmann::json::parse(metrics_to_json(r.metrics));
    j["circuit"] = t.circuit;
    j["compression"] = t.config.compression;
    j["compression_seed"] = t.config.compression_seed;
    j["audit_ok"] = r.audit_ok;
    j["resolved_config"] = config_text;
    return j.dump(2) + "\n";
}

RunRecord execute(const Task& t, PreparedCache& cache, std::ostream& log, std::mutex& log_mu) {
    const auto prepared = cache.get(t.circuit, t.config.compression, t.config.compression_seed);
    EngineConfig engine = t.config.engine;
    engine.seed = t.seed;
    RunResult result = run_scheme(t.scheme, prepared->circuit, prepared->fabric, engine);

    RunRecord rec;
    rec.circuit = t.circuit;
    rec.scheme = t.scheme;
    rec.compression = t.config.compression;
    rec.compression_seed = t.config.compression_seed;
    rec.metrics = std::move(result.metrics);
    rec.audit_ok = result.audit.ok();

    RunConfig resolved = t.config;
    resolved.schemes = {t.scheme};
    resolved.circuits = {t.circuit};
    resolved.seeds = {t.seed};
    const std::string stem = "seed_" + std::to_string(t.seed);
    write_atomic(t.dir / (stem + ".metrics.json"), run_json(t, rec, to_config_text(resolved)));
    if (t.config.traces) {
        write_atomic(t.dir / (stem + ".trace.jsonl"), trace_to_jsonl(result.traces, engine.timing.d));
    }
    if (engine.queue_trace && !result.queue_trace.empty()) {
        std::string q;
        for (const auto& line : result.queue_trace) q += line + "\n";
        write_atomic(t.dir / (stem + ".queues.jsonl"), q);
    }

    std::lock_guard lock(log_mu);
    log << t.circuit << " " << to_string(t.scheme) << " seed " << t.seed << ": " << rec.metrics.total_cycles
        << " cycles" << (rec.audit_ok ? "" : " AUDIT FAILED") << "\n";
    for (const auto& v : result.audit.violations) log << "  " << v << "\n";
    return rec;
}

std::vector<RunRecord> execute_all(const std::vector<Task>& tasks, int jobs, std::ostream& log) {
    PreparedCache cache;
    std::mutex log_mu;
    std::vector<std::optional<RunRecord>> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        while (!failed) {
            const std::size_t i = next++;
            if (i >= tasks.size()) return;
            try {
                results[i] = execute(tasks[i], cache, log, log_mu);
            } catch (...) {
                errors[i] = std::current_exception();
                failed = true;
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::max(1, jobs));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < std::min(n, tasks.size()); ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<RunRecord> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

void append_tasks(std::vector<Task>& tasks, const RunConfig& config, const fs::path& root) {
    for (const auto& circuit : config.circuits) {
        for (Scheme s : config.schemes) {
            for (auto seed : config.seeds) {
                tasks.push_back({config, circuit, s, seed, root / path_component(circuit) / std::string(to_string(s))});
            }
        }
    }
}

std::string csv_text(const std::vector<RunRecord>& records) {
    std::string out = csv_header() + "\n";
    for (const auto& r : records) out += csv_row(r) + "\n";
    return out;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c{"circuit",
                                   "scheme",
                                   "seed",
                                   "d",
                                   "p",
                                   "k",
                                   "c",
                                   "tau_mst",
                                   "mst_mode",
                                   "compression",
                                   "compression_seed",
                                   "deadlock_rounds",
                                   "q_prep",
                                   "expand_coeff",
                                   "q_expand_floor",
                                   "subpatches",
                                   "prep_attempt_rounds",
                                   "expansion_rounds",
                                   "cnot_cycles",
                                   "edge_rotation_cycles",
                                   "zz_injection_cycles",
                                   "cnot_injection_cycles",
                                   "hadamard_cycles",
                                   "num_qubits",
                                   "num_gates",
                                   "num_cnot",
                                   "num_rz_nonclifford",
                                   "num_compressed",
                                   "total_rounds",
                                   "total_cycles",
                                   "mean_idle_fraction",
                                   "mean_injections",
                                   "edge_rotations",
                                   "mst_computations",
                                   "audit_ok"};
        for (const char* h : {"cnot", "rz"}) {
            for (std::size_t b = 1; b <= kHistogramBins; ++b) c.push_back(std::string(h) + "_h" + std::to_string(b));
            c.push_back(std::string(h) + "_hover");
        }
        return c;
    }();
    return cols;
}

std::string csv_header() {
    std::string out;
    for (const auto& c : csv_columns()) out += (out.empty() ? "" : ",") + c;
    return out;
}

std::string csv_row(const RunRecord& r) {
    const EngineConfig& e = r.metrics.config;
    const TimingConfig& t = e.timing;
    std::vector<std::string> f{r.circuit,
                               std::string(to_string(r.scheme)),
                               std::to_string(e.seed),
                               std::to_string(t.d),
                               fmt(t.p),
                               std::to_string(e.k),
                               std::to_string(e.c),
                               std::to_string(e.tau_mst),
                               e.mst_mode == MstMode::Full ? "full" : "incremental",
                               fmt(r.compression),
                               std::to_string(r.compression_seed),
                               std::to_string(e.deadlock_rounds),
                               fmt(e.rus.q_prep),
                               fmt(e.rus.expand_coeff),
                               fmt(e.rus.q_expand_floor),
                               std::to_string(e.rus.subpatches(t.d)),
                               std::to_string(t.prep_attempt_rounds),
                               std::to_string(t.expansion()),
                               std::to_string(t.cnot_cycles),
                               std::to_string(t.edge_rotation_cycles),
                               std::to_string(t.zz_injection_cycles),
                               std::to_string(t.cnot_injection_cycles),
                               std::to_string(t.hadamard_cycles),
                               std::to_string(r.metrics.num_qubits),
                               std::to_string(r.metrics.num_gates),
                               std::to_string(r.metrics.num_cnot),
                               std::to_string(r.metrics.num_rz_nonclifford),
                               std::to_string(r.metrics.num_compressed),
                               std::to_string(r.metrics.total_rounds),
                               std::to_string(r.metrics.total_cycles),
                               fmt(r.metrics.mean_idle_fraction),
                               fmt(r.metrics.mean_injections),
                               std::to_string(r.metrics.edge_rotations),
                               std::to_string(r.metrics.mst_computations),
                               r.audit_ok ? "1" : "0"};
    for (auto v : r.metrics.cnot_hist) f.push_back(std::to_string(v));
    for (auto v : r.metrics.rz_hist) f.push_back(std::to_string(v));
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char ch : f[i]) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            f[i] = q + "\"";
        }
        out += (i ? "," : "") + f[i];
    }
    return out;
}

RunOutcome cmd_run(const RunConfig& config, std::ostream& log) {
    validate(config);
    const fs::path root(config.output_dir);
    std::vector<Task> tasks;
    append_tasks(tasks, config, root);
    RunOutcome out;
    out.records = execute_all(tasks, config.jobs, log);
    write_atomic(root / "summary.csv", csv_text(out.records));
    write_atomic(root / "config.txt", to_config_text(config));
    return out;
}

RunOutcome cmd_sweep(const RunConfig& config, const std::vector<SweepAxis>& axes, std::ostream& log) {
    validate(config);
    for (const auto& a : axes) {
        if (a.values.empty()) throw ConfigError("axis '" + a.key + "' has no values");
    }
    const fs::path root(config.output_dir);

    // Odometer over the axes, last axis fastest.
    std::vector<Task> tasks;
    std::vector<std::size_t> idx(axes.size(), 0);
    auto advance = [&] {
        for (std::size_t i = axes.size(); i-- > 0;) {
            if (++idx[i] < axes[i].values.size()) return true;
            idx[i] = 0;
        }
        return false;
    };
    std::size_t point = 0;
    do {
        RunConfig pc = config;
        std::string label;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            apply_setting(pc, axes[i].key, axes[i].values[idx[i]]);
            label += (label.empty() ? "" : "_") + axes[i].key + "=" + axes[i].values[idx[i]];
        }
        validate(pc);
        const fs::path dir = root / "sweep" / (std::to_string(point) + (label.empty() ? "" : "_" + path_component(label)));
        append_tasks(tasks, pc, dir);
        ++point;
    } while (advance());

    RunOutcome out;
    out.records = execute_all(tasks, config.jobs, log);
    write_atomic(root / "sweep.csv", csv_text(out.records));
    std::string cfg = to_config_text(config);
    for (const auto& a : axes) {
        std::string v;
        for (const auto& x : a.values) v += (v.empty() ? "" : ",") + x;
        cfg += "# axis " + a.key + " = " + v + "\n";
    }
    write_atomic(root / "sweep_config.txt", cfg);
    return out;
}

}  // namespace latsched::cli
