#pragma once

// Instance ingestion, seeded batch orchestration, and benchmark statistics:
// best/avg energy, success rate against a recorded lower bound, relative
// improvement against a reference method, and plot-ready progress traces.

#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lws/errors.hpp"
#include "lws/hp.hpp"
#include "lws/search.hpp"

namespace lws {

struct Instance {
    std::string name;
    HPSequence sequence;
    std::optional<int> lower_bound;  // recorded energy bound, <= 0 when present
    std::string bound_note;          // "" exact, "*" unconverged bound, "?" unknown
    std::string source_note;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Parses an optional "[El=...]" token out of a header remainder. Accepts an
// integer, an integer with a trailing '*', or '?'.
inline void parse_bound_token(const std::string& text, int line_no, Instance& inst,
                              std::string& note_out) {
    const std::size_t open = text.find("[El=");
    if (open == std::string::npos) {
        note_out = trim(text);
        return;
    }
    const std::size_t close = text.find(']', open);
    if (close == std::string::npos) throw ParseError(line_no, "unterminated [El=...] token");
    std::string value = trim(text.substr(open + 4, close - open - 4));
    note_out = trim(text.substr(0, open) + text.substr(close + 1));
    if (value == "?") {
        inst.bound_note = "?";
        return;
    }
    if (!value.empty() && value.back() == '*') {
        inst.bound_note = "*";
        value = trim(value.substr(0, value.size() - 1));
    }
    try {
        std::size_t used = 0;
        const int bound = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        inst.lower_bound = bound;
    } catch (const std::exception&) {
        throw ParseError(line_no, "malformed El value '" + value + "'");
    }
}

}  // namespace detail

// Loads a FASTA-like instance file: '>' header lines carry the instance name
// and an optional recorded bound, body lines carry the HP (or amino-acid,
// with convert) string and are concatenated.
inline std::vector<Instance> load_instances(const std::filesystem::path& path,
                                            bool convert = false,
                                            const HydroTable& table = HydroTable::standard()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file " + path.string());

    std::vector<Instance> out;
    std::map<std::string, int> seen;
    std::string line;
    int line_no = 0;

    Instance current;
    std::string body;
    int body_line = 0;
    bool open = false;

    const auto finalize = [&] {
        if (!open) return;
        if (detail::trim(body).empty())
            throw ParseError(body_line ? body_line : line_no, "record '" + current.name + "' has no sequence");
        try {
            current.sequence = convert ? convert_aa_to_hp(body, table) : HPSequence::parse(body);
        } catch (const Error& e) {
            throw ParseError(body_line, std::string(e.what()) + " in record '" + current.name + "'");
        }
        if (!seen.emplace(current.name, 1).second) throw DuplicateNameError(current.name);
        out.push_back(std::move(current));
        current = Instance{};
        body.clear();
        body_line = 0;
        open = false;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t[0] == '>') {
            finalize();
            std::string rest = detail::trim(t.substr(1));
            if (rest.empty()) throw ParseError(line_no, "header with no name");
            const std::size_t sp = rest.find_first_of(" \t");
            current.name = rest.substr(0, sp);
            std::string remainder = sp == std::string::npos ? "" : rest.substr(sp + 1);
            detail::parse_bound_token(remainder, line_no, current, current.source_note);
            open = true;
        } else {
            if (!open) throw ParseError(line_no, "sequence data before any header");
            if (body.empty()) body_line = line_no;
            body += t;
        }
    }
    finalize();
    return out;
}

struct RunRecord {
    std::string instance;
    std::uint64_t seed = 0;
    long long best_energy = 0;
    double wall_ms = 0;
    long long iterations = 0;
    std::vector<TraceRecord> trace;
    std::string error;  // non-empty marks a failed run

    bool ok() const { return error.empty(); }
};

// Runs runs_per_instance independent searches per instance, seeded
// params.rng_seed + run index. Runs may execute concurrently up to
// `parallelism`; results are deterministic given the seed base and params,
// independent of scheduling. Per-run failures become failed records.
inline std::vector<RunRecord> run_batch(const std::vector<Instance>& instances,
                                        const SearchParams& params, int runs_per_instance,
                                        int parallelism) {
    const std::size_t total = instances.size() * static_cast<std::size_t>(runs_per_instance);
    std::vector<RunRecord> records(total);

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            const std::size_t inst_idx = task / static_cast<std::size_t>(runs_per_instance);
            const int run_idx = static_cast<int>(task % static_cast<std::size_t>(runs_per_instance));
            const Instance& inst = instances[inst_idx];

            RunRecord& rec = records[task];
            rec.instance = inst.name;
            rec.seed = params.rng_seed + static_cast<std::uint64_t>(run_idx);
            try {
                SearchParams p = params;
                p.rng_seed = rec.seed;
                const RunResult r = lws_run(inst.sequence, p);
                rec.best_energy = r.best_energy;
                rec.wall_ms = r.wall_ms;
                rec.iterations = r.iterations;
                rec.trace = r.trace;
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
        }
    };

    const int threads = std::max(1, std::min<int>(parallelism, static_cast<int>(total)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return records;
}

// (E_o - E_r) / (E_l - E_r) * 100: progress toward the bound E_l relative to
// a reference method's result E_r.
inline double relative_improvement(double e_ours, double e_reference, double e_lower) {
    if (e_lower == e_reference) throw DegenerateDenominatorError();
    return (e_ours - e_reference) / (e_lower - e_reference) * 100.0;
}

inline double relative_improvement(double e_ours, double e_reference,
                                   std::optional<double> e_lower) {
    if (!e_lower) throw UndefinedBoundError();
    return relative_improvement(e_ours, e_reference, *e_lower);
}

// Percentage of records whose best energy reached the target.
inline double success_rate(const std::vector<RunRecord>& records, long long target_energy) {
    if (records.empty()) throw Error("success rate over zero records");
    std::size_t hits = 0;
    for (const RunRecord& r : records)
        if (r.best_energy <= target_energy) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
}

struct AggregateStats {
    std::string instance;
    std::optional<int> lower_bound;
    std::string bound_note;
    long long best = 0;
    double avg = 0;
    std::optional<double> success;          // vs lower_bound, when recorded
    std::optional<double> rel_improvement;  // vs reference avg, when provided
    int runs = 0;
    int failed = 0;
};

inline std::vector<AggregateStats> aggregate_stats(
    const std::vector<Instance>& instances, const std::vector<RunRecord>& records,
    const std::map<std::string, double>* reference_avg = nullptr) {
    std::vector<AggregateStats> stats;
    for (const Instance& inst : instances) {
        AggregateStats s;
        s.instance = inst.name;
        s.lower_bound = inst.lower_bound;
        s.bound_note = inst.bound_note;

        std::vector<RunRecord> mine;
        for (const RunRecord& r : records) {
            if (r.instance != inst.name) continue;
            ++s.runs;
            if (r.ok())
                mine.push_back(r);
            else
                ++s.failed;
        }
        if (mine.empty()) {
            stats.push_back(std::move(s));
            continue;
        }

        long long best = 0;
        double sum = 0;
        for (const RunRecord& r : mine) {
            best = std::min(best, r.best_energy);
            sum += static_cast<double>(r.best_energy);
        }
        s.best = best;
        s.avg = sum / static_cast<double>(mine.size());
        if (s.lower_bound) s.success = success_rate(mine, *s.lower_bound);
        if (reference_avg && s.lower_bound) {
            const auto it = reference_avg->find(inst.name);
            if (it != reference_avg->end() && static_cast<double>(*s.lower_bound) != it->second)
                s.rel_improvement =
                    relative_improvement(s.avg, it->second, static_cast<double>(*s.lower_bound));
        }
        stats.push_back(std::move(s));
    }
    return stats;
}

enum class ExportFormat { Csv, Json };

namespace detail {

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::string bound_cell(const std::optional<int>& bound, const std::string& note) {
    if (bound) return std::to_string(*bound) + note;
    return note;  // "?" or empty
}

inline std::string sanitize_filename(const std::string& name) {
    std::string out;
    for (char c : name)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
    return out;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw IoError("cannot write " + p.string());
    return f;
}

}  // namespace detail

// Writes the stats table (CSV or JSON), the per-run records, and one trace
// CSV per run with columns iteration,elapsed_ms,current_energy,best_energy.
inline void export_results(const std::filesystem::path& outdir,
                           const std::vector<RunRecord>& records,
                           const std::vector<AggregateStats>& stats, ExportFormat format,
                           bool include_ri_column = false) {
    std::filesystem::create_directories(outdir);

    if (format == ExportFormat::Csv) {
        std::ofstream f = detail::open_out(outdir / "stats.csv");
        f << "instance,E_l,best,avg,success_rate";
        if (include_ri_column) f << ",R.I.";
        f << "\n";
        for (const AggregateStats& s : stats) {
            f << s.instance << ',' << detail::bound_cell(s.lower_bound, s.bound_note) << ','
              << s.best << ',' << detail::format_fixed(s.avg, 2) << ','
              << (s.success ? detail::format_fixed(*s.success, 1) : "");
            if (include_ri_column)
                f << ',' << (s.rel_improvement ? detail::format_fixed(*s.rel_improvement, 2) : "");
            f << "\n";
        }

        std::ofstream r = detail::open_out(outdir / "runs.csv");
        r << "instance,seed,best,iterations,wall_ms,error\n";
        for (const RunRecord& rec : records)
            r << rec.instance << ',' << rec.seed << ',' << rec.best_energy << ','
              << rec.iterations << ',' << detail::format_fixed(rec.wall_ms, 1) << ','
              << rec.error << "\n";
    } else {
        nlohmann::json jstats = nlohmann::json::array();
        for (const AggregateStats& s : stats) {
            nlohmann::json row;
            row["instance"] = s.instance;
            if (s.lower_bound)
                row["E_l"] = *s.lower_bound;
            else
                row["E_l"] = nullptr;
            row["E_l_note"] = s.bound_note;
            row["best"] = s.best;
            row["avg"] = s.avg;
            if (s.success)
                row["success_rate"] = *s.success;
            else
                row["success_rate"] = nullptr;
            if (include_ri_column) row["R.I."] = s.rel_improvement ? nlohmann::json(*s.rel_improvement) : nlohmann::json(nullptr);
            jstats.push_back(std::move(row));
        }
        detail::open_out(outdir / "stats.json") << jstats.dump(2) << "\n";

        nlohmann::json jruns = nlohmann::json::array();
        for (const RunRecord& rec : records) {
            nlohmann::json row;
            row["instance"] = rec.instance;
            row["seed"] = rec.seed;
            row["best"] = rec.best_energy;
            row["iterations"] = rec.iterations;
            row["wall_ms"] = rec.wall_ms;
            row["error"] = rec.error;
            jruns.push_back(std::move(row));
        }
        detail::open_out(outdir / "runs.json") << jruns.dump(2) << "\n";
    }

    for (const RunRecord& rec : records) {
        const std::string name =
            "trace_" + detail::sanitize_filename(rec.instance) + "_s" + std::to_string(rec.seed) + ".csv";
        std::ofstream t = detail::open_out(outdir / name);
        t << "iteration,elapsed_ms,current_energy,best_energy\n";
        for (const TraceRecord& tr : rec.trace)
            t << tr.iteration << ',' << tr.elapsed_ms << ',' << tr.current_energy << ','
              << tr.best_energy << "\n";
    }
}

// Residue classification table from a two-column data file: residue letter,
// then H or P. '#' starts a comment.
inline HydroTable load_hydro_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open classification table " + path.string());
    HydroTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        std::string residue, cls;
        if (!(ss >> residue >> cls) || residue.size() != 1 || cls.size() != 1)
            throw ParseError(line_no, "expected '<residue> <H|P>'");
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(cls[0])));
        if (c != 'H' && c != 'P') throw ParseError(line_no, "class must be H or P");
        table.set(residue[0], c == 'H' ? Monomer::H : Monomer::P);
    }
    return table;
}

}  // namespace lws
