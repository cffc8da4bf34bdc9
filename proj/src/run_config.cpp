// SPDX-License-Identifier: Apache-2.0
#include "latsched/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace latsched::cli {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || v.empty()) {
        throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("bad boolean for " + std::string(key) + ": '" + std::string(v) + "'");
}

std::string fmt(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Setting {
    std::string key;
    Setter set;
    Getter get;
};

Setting int_field(std::string key, int& (*ref)(RunConfig&)) {
    return {key, [ref](RunConfig& c, std::string_view k, std::string_view v) { ref(c) = parse_number<int>(k, v); },
            [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }};
}

Setting double_field(std::string key, double& (*ref)(RunConfig&)) {
    return {key, [ref](RunConfig& c, std::string_view k, std::string_view v) { ref(c) = parse_number<double>(k, v); },
            [ref](const RunConfig& c) { return fmt(ref(const_cast<RunConfig&>(c))); }};
}

const std::vector<Setting>& settings() {
    static const std::vector<Setting> table = [] {
        std::vector<Setting> t;
        t.push_back({"scheme",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         std::vector<Scheme> out;
                         if (v == "all") {
                             out = {Scheme::Dynamic, Scheme::StaticGreedy, Scheme::StaticLayered};
                         } else {
                             for (auto part : split(v, ',')) {
                                 const auto s = parse_scheme(part);
                                 if (!s) throw ConfigError("bad value for " + std::string(k) + ": '" + std::string(part) + "'");
                                 if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
                             }
                         }
                         c.schemes = std::move(out);
                     },
                     [](const RunConfig& c) {
                         std::string s;
                         for (Scheme x : c.schemes) s += (s.empty() ? "" : ",") + std::string(to_string(x));
                         return s;
                     }});
        t.push_back({"circuit",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         std::vector<std::string> out;
                         for (auto part : split(v, ',')) {
                             if (part.empty()) throw ConfigError("empty entry in " + std::string(k));
                             out.emplace_back(part);
                         }
                         c.circuits = std::move(out);
                     },
                     [](const RunConfig& c) {
                         std::string s;
                         for (const auto& x : c.circuits) s += (s.empty() ? "" : ",") + x;
                         return s;
                     }});
        t.push_back(int_field("d", [](RunConfig& c) -> int& { return c.engine.timing.d; }));
        t.push_back(double_field("p", [](RunConfig& c) -> double& { return c.engine.timing.p; }));
        t.push_back(int_field("k", [](RunConfig& c) -> int& { return c.engine.k; }));
        t.push_back(int_field("c", [](RunConfig& c) -> int& { return c.engine.c; }));
        t.push_back(int_field("tau_mst", [](RunConfig& c) -> int& { return c.engine.tau_mst; }));
        t.push_back({"mst_mode",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         if (v == "full") {
                             c.engine.mst_mode = MstMode::Full;
                         } else if (v == "incremental") {
                             c.engine.mst_mode = MstMode::Incremental;
                         } else {
                             throw ConfigError("bad value for " + std::string(k) + ": '" + std::string(v) + "'");
                         }
                     },
                     [](const RunConfig& c) {
                         return std::string(c.engine.mst_mode == MstMode::Full ? "full" : "incremental");
                     }});
        t.push_back(double_field("compression", [](RunConfig& c) -> double& { return c.compression; }));
        t.push_back({"compression_seed",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         c.compression_seed = parse_number<std::uint64_t>(k, v);
                     },
                     [](const RunConfig& c) { return std::to_string(c.compression_seed); }});
        t.push_back({"seeds", [](RunConfig& c, std::string_view, std::string_view v) { c.seeds = parse_seeds(v); },
                     [](const RunConfig& c) {
                         std::string s;
                         for (auto x : c.seeds) s += (s.empty() ? "" : ",") + std::to_string(x);
                         return s;
                     }});
        t.push_back({"output_dir", [](RunConfig& c, std::string_view, std::string_view v) { c.output_dir = v; },
                     [](const RunConfig& c) { return c.output_dir; }});
        t.push_back({"traces", [](RunConfig& c, std::string_view k, std::string_view v) { c.traces = parse_bool(k, v); },
                     [](const RunConfig& c) { return std::string(c.traces ? "true" : "false"); }});
        t.push_back({"queue_trace",
                     [](RunConfig& c, std::string_view k, std::string_view v) { c.engine.queue_trace = parse_bool(k, v); },
                     [](const RunConfig& c) { return std::string(c.engine.queue_trace ? "true" : "false"); }});
        t.push_back(int_field("jobs", [](RunConfig& c) -> int& { return c.jobs; }));
        t.push_back({"deadlock_rounds",
                     [](RunConfig& c, std::string_view k, std::string_view v) {
                         c.engine.deadlock_rounds = parse_number<Round>(k, v);
                     },
                     [](const RunConfig& c) { return std::to_string(c.engine.deadlock_rounds); }});
        t.push_back(double_field("q_prep", [](RunConfig& c) -> double& { return c.engine.rus.q_prep; }));
        t.push_back(double_field("expand_coeff", [](RunConfig& c) -> double& { return c.engine.rus.expand_coeff; }));
        t.push_back(double_field("q_expand_floor", [](RunConfig& c) -> double& { return c.engine.rus.q_expand_floor; }));
        t.push_back(int_field("subpatches", [](RunConfig& c) -> int& { return c.engine.rus.subpatch_override; }));
        t.push_back(int_field("prep_attempt_rounds", [](RunConfig& c) -> int& { return c.engine.timing.prep_attempt_rounds; }));
        t.push_back(int_field("expansion_rounds", [](RunConfig& c) -> int& { return c.engine.timing.expansion_rounds; }));
        t.push_back(int_field("cnot_cycles", [](RunConfig& c) -> int& { return c.engine.timing.cnot_cycles; }));
        t.push_back(int_field("edge_rotation_cycles", [](RunConfig& c) -> int& { return c.engine.timing.edge_rotation_cycles; }));
        t.push_back(int_field("zz_injection_cycles", [](RunConfig& c) -> int& { return c.engine.timing.zz_injection_cycles; }));
        t.push_back(int_field("cnot_injection_cycles", [](RunConfig& c) -> int& { return c.engine.timing.cnot_injection_cycles; }));
        t.push_back(int_field("hadamard_cycles", [](RunConfig& c) -> int& { return c.engine.timing.hadamard_cycles; }));
        return t;
    }();
    return table;
}

const Setting* find_setting(std::string_view key) {
    for (const auto& s : settings()) {
        if (s.key == key) return &s;
    }
    return nullptr;
}

}  // namespace

const std::vector<std::string>& setting_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& s : settings()) k.push_back(s.key);
        return k;
    }();
    return keys;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    const Setting* s = find_setting(key);
    if (!s) throw ConfigError("unknown setting '" + std::string(key) + "'");
    s->set(config, key, trim(value));
}

void apply_config_text(RunConfig& config, std::string_view text, const std::string& origin) {
    std::size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        auto line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str(), path);
}

void apply_env(RunConfig& config) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) config.output_dir = dir;
}

void validate(const RunConfig& config) {
    if (config.schemes.empty()) throw ConfigError("no scheme selected");
    if (config.circuits.empty()) throw ConfigError("no circuit given");
    if (config.seeds.empty()) throw ConfigError("no seeds given");
    if (!(config.compression >= 0.0 && config.compression <= 1.0)) throw ConfigError("compression must be in [0,1]");
    if (config.jobs < 1) throw ConfigError("jobs must be at least 1");
    if (config.output_dir.empty()) throw ConfigError("output_dir is empty");
    try {
        config.engine.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
    text = trim(text);
    std::vector<std::uint64_t> out;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const auto lo = parse_number<std::uint64_t>("seeds", trim(text.substr(0, dots)));
        const auto hi = parse_number<std::uint64_t>("seeds", trim(text.substr(dots + 2)));
        if (hi < lo) throw ConfigError("empty seed range '" + std::string(text) + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
    } else if (text.find(',') != std::string_view::npos) {
        for (auto part : split(text, ',')) out.push_back(parse_number<std::uint64_t>("seeds", part));
    } else {
        const auto n = parse_number<std::uint64_t>("seeds", text);
        if (n == 0) throw ConfigError("seed count must be positive");
        for (std::uint64_t s = 1; s <= n; ++s) out.push_back(s);
    }
    return out;
}

std::string to_config_text(const RunConfig& config) {
    std::string out;
    for (const auto& s : settings()) out += s.key + " = " + s.get(config) + "\n";
    return out;
}

SweepAxis parse_axis(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("axis must look like key=v1,v2,...: '" + std::string(text) + "'");
    SweepAxis axis;
    axis.key = std::string(trim(text.substr(0, eq)));
    if (!find_setting(axis.key)) throw ConfigError("unknown axis '" + axis.key + "'");
    if (axis.key == "seeds" || axis.key == "scheme" || axis.key == "output_dir" || axis.key == "jobs") {
        throw ConfigError("'" + axis.key + "' cannot be a sweep axis");
    }
    const auto values = trim(text.substr(eq + 1));
    if (values.empty()) throw ConfigError("axis '" + axis.key + "' has no values");
    for (auto v : split(values, ',')) {
        if (v.empty()) throw ConfigError("axis '" + axis.key + "' has an empty value");
        axis.values.emplace_back(v);
    }
    return axis;
}

}  // namespace latsched::cli
