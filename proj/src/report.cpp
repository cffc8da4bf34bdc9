// SPDX-License-Identifier: Apache-2.0
#include "latsched/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

namespace latsched::cli {
namespace fs = std::filesystem;
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                out.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back();
        } else {
            out.back() += ch;
        }
    }
    return out;
}

double to_double(const std::string& s, const std::string& column) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("column " + column + ": not a number: '" + s + "'");
    }
    return v;
}

std::string fmt(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string fixed2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

using Row = std::map<std::string, std::string>;

// Columns that identify an experimental setting apart from circuit, scheme
// and seed. Results are normalized within (setting, circuit).
const std::vector<std::string>& setting_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> out;
        for (const auto& c : csv_columns()) {
            if (c == "circuit" || c == "scheme" || c == "seed") continue;
            if (c == "num_qubits") break;
            out.push_back(c);
        }
        return out;
    }();
    return cols;
}

std::string setting_key(const Row& r) {
    std::string k;
    for (const auto& c : setting_columns()) k += c + "=" + r.at(c) + ";";
    return k;
}

// Setting columns whose value differs across the loaded rows.
std::vector<std::string> varying_columns(const std::vector<Row>& rows) {
    std::vector<std::string> out;
    for (const auto& c : setting_columns()) {
        std::set<std::string> values;
        for (const auto& r : rows) values.insert(r.at(c));
        if (values.size() > 1) out.push_back(c);
    }
    return out;
}

struct Cell {
    std::vector<double> cycles;
    double mean() const {
        double s = 0.0;
        for (double v : cycles) s += v;
        return cycles.empty() ? 0.0 : s / static_cast<double>(cycles.size());
    }
    double min() const { return *std::min_element(cycles.begin(), cycles.end()); }
    double max() const { return *std::max_element(cycles.begin(), cycles.end()); }
};

void write_file(const fs::path& path, const std::string& content) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

std::vector<Row> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    const auto header = split_csv_line(line);
    const auto& known = csv_columns();
    for (const auto& h : header) {
        if (std::find(known.begin(), known.end(), h) == known.end()) {
            throw ConfigError(path + ": unknown column '" + h + "'");
        }
    }
    for (const auto& k : known) {
        if (std::find(header.begin(), header.end(), k) == header.end()) {
            throw ConfigError(path + ": missing column '" + k + "'");
        }
    }
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                              " fields, got " + std::to_string(fields.size()));
        }
        Row r;
        for (std::size_t i = 0; i < header.size(); ++i) r[header[i]] = fields[i];
        rows.push_back(std::move(r));
    }
    return rows;
}

void cmd_report(const std::vector<std::string>& csv_paths, const std::string& out_dir, std::ostream& out) {
    if (csv_paths.empty()) throw ConfigError("report needs at least one CSV file");
    std::vector<Row> rows;
    for (const auto& p : csv_paths) {
        auto r = read_results_csv(p);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (rows.empty()) throw ConfigError("no result rows");

    const auto varying = varying_columns(rows);
    auto label = [&](const Row& r) {
        std::string s;
        for (const auto& c : varying) s += (s.empty() ? "" : " ") + c + "=" + r.at(c);
        return s;
    };

    // setting -> circuit -> scheme -> cycles
    std::map<std::string, std::map<std::string, std::map<std::string, Cell>>> cells;
    std::map<std::string, const Row*> setting_rep;
    std::vector<std::string> setting_order;
    for (const auto& r : rows) {
        const auto key = setting_key(r);
        if (!setting_rep.count(key)) {
            setting_rep[key] = &r;
            setting_order.push_back(key);
        }
        cells[key][r.at("circuit")][r.at("scheme")].cycles.push_back(to_double(r.at("total_cycles"), "total_cycles"));
    }

    auto reference = [&](const std::string& key, const std::string& circuit) {
        const auto& by_scheme = cells[key][circuit];
        const auto it = by_scheme.find("static_greedy");
        return it == by_scheme.end() ? std::numeric_limits<double>::quiet_NaN() : it->second.mean();
    };

    std::string varying_header;
    for (const auto& c : varying) varying_header += c + ",";

    // normalized.csv: mean and min/max over seeds, divided by the static_greedy mean.
    std::string norm = varying_header +
                       "circuit,scheme,n,mean_cycles,min_cycles,max_cycles,norm_mean,norm_min,norm_max\n";
    for (const auto& key : setting_order) {
        std::string prefix;
        for (const auto& c : varying) prefix += setting_rep[key]->at(c) + ",";
        for (const auto& [circuit, by_scheme] : cells[key]) {
            const double ref = reference(key, circuit);
            for (const auto& [scheme, cell] : by_scheme) {
                norm += prefix + circuit + "," + scheme + "," + std::to_string(cell.cycles.size()) + "," +
                        fmt(cell.mean()) + "," + fmt(cell.min()) + "," + fmt(cell.max()) + "," +
                        (std::isnan(ref) ? std::string(",,") :
                                           fmt(cell.mean() / ref) + "," + fmt(cell.min() / ref) + "," +
                                               fmt(cell.max() / ref)) +
                        "\n";
            }
        }
    }

    // histograms.csv: counts summed over seeds.
    std::map<std::tuple<std::string, std::string, std::string, std::string>, std::vector<double>> hist;
    for (const auto& r : rows) {
        for (const char* kind : {"cnot", "rz"}) {
            auto& h = hist[{setting_key(r), r.at("circuit"), r.at("scheme"), kind}];
            h.resize(kHistogramBins + 1, 0.0);
            for (std::size_t b = 0; b < kHistogramBins; ++b) {
                const auto col = std::string(kind) + "_h" + std::to_string(b + 1);
                h[b] += to_double(r.at(col), col);
            }
            const auto over = std::string(kind) + "_hover";
            h[kHistogramBins] += to_double(r.at(over), over);
        }
    }
    std::string hcsv = varying_header + "circuit,scheme,kind,bin,count,fraction\n";
    for (const auto& [k, h] : hist) {
        const auto& [key, circuit, scheme, kind] = k;
        std::string prefix;
        for (const auto& c : varying) prefix += setting_rep[key]->at(c) + ",";
        double total = 0.0;
        for (double v : h) total += v;
        for (std::size_t b = 0; b <= kHistogramBins; ++b) {
            const std::string bin = b < kHistogramBins ? std::to_string(b + 1) : ">" + std::to_string(kHistogramBins);
            hcsv += prefix + circuit + "," + scheme + "," + kind + "," + bin + "," + fmt(h[b]) + "," +
                    fmt(total > 0 ? h[b] / total : 0.0) + "\n";
        }
    }

    // samples.csv: one line per run for violin plots.
    std::string scsv = varying_header + "circuit,scheme,seed,total_cycles,normalized,mean_idle_fraction\n";
    for (const auto& r : rows) {
        std::string prefix;
        for (const auto& c : varying) prefix += r.at(c) + ",";
        const double ref = reference(setting_key(r), r.at("circuit"));
        const double cyc = to_double(r.at("total_cycles"), "total_cycles");
        scsv += prefix + r.at("circuit") + "," + r.at("scheme") + "," + r.at("seed") + "," + r.at("total_cycles") +
                "," + (std::isnan(ref) ? std::string() : fmt(cyc / ref)) + "," + r.at("mean_idle_fraction") + "\n";
    }

    const fs::path dir(out_dir);
    write_file(dir / "normalized.csv", norm);
    write_file(dir / "histograms.csv", hcsv);
    write_file(dir / "samples.csv", scsv);

    // Text summary: per-circuit speedups and the geomean line per setting.
    out << "normalized to static_greedy mean per circuit\n";
    for (const auto& key : setting_order) {
        const std::string lab = label(*setting_rep[key]);
        if (!lab.empty()) out << "[" << lab << "]\n";
        for (const char* scheme : {"dynamic", "static_layered"}) {
            std::vector<double> speedups;
            for (const auto& [circuit, by_scheme] : cells[key]) {
                const auto it = by_scheme.find(scheme);
                const double ref = reference(key, circuit);
                if (it == by_scheme.end() || std::isnan(ref)) continue;
                const double s = ref / it->second.mean();
                speedups.push_back(s);
                out << "  " << circuit << " " << scheme << " speedup " << fixed2(s) << "\n";
            }
            if (!speedups.empty()) {
                out << scheme << " vs static_greedy: " << fixed2(geometric_mean(speedups)) << "\n";
            }
        }
    }
    int failed_audits = 0;
    for (const auto& r : rows) failed_audits += r.at("audit_ok") == "1" ? 0 : 1;
    out << rows.size() << " runs, " << failed_audits << " failed audits\n";
}

}  // namespace latsched::cli
