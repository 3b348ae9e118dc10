// Command-line front end: solve one instance, benchmark a set, enumerate
// exact optima for tiny chains, or convert amino-acid FASTA to HP FASTA.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>

#include "lws/lws.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Bad flags, bad values, unreadable inputs named on the command line.
struct ConfigError : lws::Error {
    using Error::Error;
};

struct CommonOptions {
    lws::SearchParams params;
    std::string budget = "0";
    std::string pin;  // "", "h1", "h2", "h3"
    long long target = 1;  // > 0 means unset (all energies are <= 0)
};

std::chrono::milliseconds parse_duration(const std::string& text) {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    std::string unit = text.substr(used);
    double ms = 0;
    if (unit.empty() || unit == "s")
        ms = value * 1000.0;
    else if (unit == "ms")
        ms = value;
    else if (unit == "m" || unit == "min")
        ms = value * 60'000.0;
    else if (unit == "h")
        ms = value * 3'600'000.0;
    else
        throw ConfigError("unknown duration unit '" + unit + "'");
    return std::chrono::milliseconds(static_cast<long long>(ms));
}

void add_search_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--segment-size", opt.params.initial_segment_size,
                    "Initial segment size")
        ->capture_default_str();
    cmd->add_option("--max-stable", opt.params.initial_max_stable,
                    "Initial stagnation threshold (steps without improvement)")
        ->capture_default_str();
    cmd->add_option("--factor", opt.params.stable_factor,
                    "Stagnation threshold multiplier")
        ->capture_default_str();
    cmd->add_option("--tenure-min", opt.params.tenure_min,
                    "Tabu tenure lower bound; tenure is drawn uniformly from [4, n/8]")
        ->capture_default_str();
    cmd->add_option("--tenure-divisor", opt.params.tenure_max_divisor,
                    "Tabu tenure upper bound divisor (upper bound = n/8 by default)")
        ->capture_default_str();
    cmd->add_option("--max-single-segment", opt.params.max_single_segment_size,
                    "Cap on contiguous segment enumeration size")
        ->capture_default_str();
    cmd->add_option("--max-iters", opt.params.max_iterations, "Iteration budget per run")
        ->capture_default_str();
    cmd->add_option("--budget", opt.budget,
                    "Wall-clock budget per run (e.g. 30s, 10m, 2h; 0 = none)")
        ->capture_default_str();
    cmd->add_option("--seed", opt.params.rng_seed, "Random seed (bench: seed base)")
        ->capture_default_str();
    cmd->add_option("--warmup-iters", opt.params.warmup_iterations,
                    "Greedy single-residue warm-up iterations before the main loop")
        ->capture_default_str();
    cmd->add_option("--pin-heuristic", opt.pin, "Guide every iteration with one heuristic (h1|h2|h3)")
        ->check(CLI::IsMember({"h1", "h2", "h3"}));
    cmd->add_option("--target", opt.target, "Stop a run once this energy is reached");
    cmd->add_option("--max-candidates", opt.params.max_candidates_per_iteration,
                    "Per-iteration cap on evaluated candidate moves (0 = unlimited)")
        ->capture_default_str();
    cmd->add_flag("--validate-each-step", opt.params.validate_each_step,
                  "Full feasibility audit after every executed move");
}

void finalize_params(CommonOptions& opt) {
    opt.params.wall_clock_budget = parse_duration(opt.budget);
    if (opt.target <= 0) opt.params.target_energy = opt.target;
    if (opt.pin == "h1") opt.params.pinned_heuristic = lws::HeuristicKind::H1Contacts;
    if (opt.pin == "h2") opt.params.pinned_heuristic = lws::HeuristicKind::H2AllPairDist;
    if (opt.pin == "h3") opt.params.pinned_heuristic = lws::HeuristicKind::H3CentroidDist;
    if (opt.params.initial_segment_size < 1 || opt.params.initial_max_stable < 1 ||
        opt.params.stable_factor < 1.0 || opt.params.tenure_min < 1 ||
        opt.params.tenure_max_divisor < 1 || opt.params.max_single_segment_size < 1)
        throw ConfigError("search parameters must be positive (and factor >= 1)");
}

lws::HydroTable table_from_option(const std::string& path) {
    if (path.empty()) return lws::HydroTable::standard();
    try {
        return lws::load_hydro_table(path);
    } catch (const lws::IoError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<lws::Instance> load_instances_checked(const std::string& path, bool convert,
                                                  const lws::HydroTable& table) {
    try {
        return lws::load_instances(path, convert, table);
    } catch (const lws::IoError& e) {
        throw ConfigError(e.what());
    }
}

void write_conformation(const std::filesystem::path& path, const lws::HPSequence& seq,
                        const std::vector<lws::Vec3>& positions) {
    std::ofstream f(path);
    if (!f) throw lws::IoError("cannot write " + path.string());
    f << seq.to_string() << "\n";
    for (const lws::Vec3& p : positions) f << p.x << ' ' << p.y << ' ' << p.z << "\n";
}

void write_trace(const std::filesystem::path& path, const std::vector<lws::TraceRecord>& trace) {
    std::ofstream f(path);
    if (!f) throw lws::IoError("cannot write " + path.string());
    f << "iteration,elapsed_ms,current_energy,best_energy\n";
    for (const lws::TraceRecord& t : trace)
        f << t.iteration << ',' << t.elapsed_ms << ',' << t.current_energy << ','
          << t.best_energy << "\n";
}

// --- solve -----------------------------------------------------------------

struct SolveOptions {
    CommonOptions common;
    std::string seq_text;
    std::string instances_path;
    std::string name;
    std::string table_path;
    std::string out_dir = ".";
    bool convert = false;
};

int cmd_solve(SolveOptions& opt) {
    finalize_params(opt.common);
    lws::HPSequence seq;
    std::string label = "seq";
    if (!opt.seq_text.empty()) {
        seq = lws::HPSequence::parse(opt.seq_text);
        if (!opt.name.empty()) label = opt.name;
    } else if (!opt.instances_path.empty()) {
        const auto instances =
            load_instances_checked(opt.instances_path, opt.convert, table_from_option(opt.table_path));
        if (instances.empty()) throw ConfigError("instance file has no records");
        const lws::Instance* chosen = &instances.front();
        if (!opt.name.empty()) {
            chosen = nullptr;
            for (const lws::Instance& inst : instances)
                if (inst.name == opt.name) chosen = &inst;
            if (!chosen) throw ConfigError("no instance named '" + opt.name + "'");
        }
        seq = chosen->sequence;
        label = chosen->name;
    } else {
        throw ConfigError("provide --seq or --instances");
    }

    const lws::RunResult result = lws::lws_run(seq, opt.common.params);
    std::cout << "instance " << label << " n=" << seq.size() << "\n";
    std::cout << "best energy " << result.best_energy << " after " << result.iterations
              << " iterations (" << lws::detail::format_fixed(result.wall_ms / 1000.0, 1)
              << " s)\n";

    std::filesystem::create_directories(opt.out_dir);
    const std::filesystem::path base = std::filesystem::path(opt.out_dir) /
                                       lws::detail::sanitize_filename(label);
    write_conformation(base.string() + ".conf.txt", seq, result.best_positions);
    write_trace(base.string() + ".trace.csv", result.trace);
    std::cout << "wrote " << base.string() + ".conf.txt" << " and " << base.string() + ".trace.csv"
              << "\n";
    return kExitOk;
}

// --- bench -----------------------------------------------------------------

struct BenchOptions {
    CommonOptions common;
    std::string instances_path;
    std::string table_path;
    std::string reference_path;
    std::string out_dir = "bench_out";
    std::string format = "csv";
    int runs = 5;
    int parallelism = static_cast<int>(std::thread::hardware_concurrency());
    bool convert = false;
};

std::map<std::string, double> load_reference(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw lws::IoError("cannot open reference file " + path.string());
    std::map<std::string, double> ref;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = lws::detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t comma = t.find(',');
        if (comma == std::string::npos) throw lws::ParseError(line_no, "expected 'name,avg'");
        const std::string name = lws::detail::trim(t.substr(0, comma));
        if (name == "instance" || name == "name") continue;  // header row
        try {
            ref[name] = std::stod(t.substr(comma + 1));
        } catch (const std::exception&) {
            throw lws::ParseError(line_no, "malformed reference value");
        }
    }
    return ref;
}

int cmd_bench(BenchOptions& opt) {
    finalize_params(opt.common);
    if (opt.runs < 1) throw ConfigError("--runs must be at least 1");
    if (opt.parallelism < 1) opt.parallelism = 1;

    const auto instances =
        load_instances_checked(opt.instances_path, opt.convert, table_from_option(opt.table_path));
    if (instances.empty()) throw ConfigError("instance file has no records");

    std::map<std::string, double> reference;
    if (!opt.reference_path.empty()) reference = load_reference(opt.reference_path);

    const auto records = lws::run_batch(instances, opt.common.params, opt.runs, opt.parallelism);
    const auto stats =
        lws::aggregate_stats(instances, records, reference.empty() ? nullptr : &reference);
    lws::export_results(opt.out_dir, records, stats,
                        opt.format == "json" ? lws::ExportFormat::Json : lws::ExportFormat::Csv,
                        !reference.empty());

    std::printf("%-12s %8s %8s %10s %14s", "instance", "E_l", "best", "avg", "success_rate");
    if (!reference.empty()) std::printf(" %8s", "R.I.");
    std::printf("\n");
    for (const lws::AggregateStats& s : stats) {
        std::printf("%-12s %8s %8lld %10.2f %14s", s.instance.c_str(),
                    lws::detail::bound_cell(s.lower_bound, s.bound_note).c_str(), s.best, s.avg,
                    s.success ? lws::detail::format_fixed(*s.success, 1).c_str() : "-");
        if (!reference.empty())
            std::printf(" %8s",
                        s.rel_improvement ? lws::detail::format_fixed(*s.rel_improvement, 2).c_str()
                                          : "-");
        std::printf("\n");
    }
    std::cout << "results written to " << opt.out_dir << "\n";

    for (const lws::RunRecord& r : records)
        if (!r.ok()) {
            std::cerr << "run failed: " << r.instance << " seed " << r.seed << ": " << r.error
                      << "\n";
            return kExitRuntime;
        }
    return kExitOk;
}

// --- enumerate ---------------------------------------------------------------

struct EnumerateOptions {
    std::string seq_text;
    bool no_symmetry = false;
};

int cmd_enumerate(EnumerateOptions& opt) {
    const lws::HPSequence seq = lws::HPSequence::parse(opt.seq_text);
    const lws::OracleResult r = lws::enumerate_optimal(seq, !opt.no_symmetry);
    std::cout << "optimal energy " << r.optimal_energy << "\n";
    std::cout << "optimizers " << r.optimizer_count << " (examined " << r.enumerated
              << " walks)\n";
    return kExitOk;
}

// --- convert -----------------------------------------------------------------

struct ConvertOptions {
    std::string in_path;
    std::string out_path;
    std::string table_path;
};

int cmd_convert(ConvertOptions& opt) {
    const auto instances = load_instances_checked(opt.in_path, true, table_from_option(opt.table_path));
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!opt.out_path.empty()) {
        file.open(opt.out_path);
        if (!file) throw lws::IoError("cannot write " + opt.out_path);
        out = &file;
    }
    for (const lws::Instance& inst : instances) {
        *out << '>' << inst.name;
        if (inst.lower_bound) *out << " [El=" << *inst.lower_bound << inst.bound_note << "]";
        else if (inst.bound_note == "?") *out << " [El=?]";
        if (!inst.source_note.empty()) *out << ' ' << inst.source_note;
        *out << "\n" << inst.sequence.to_string() << "\n";
    }
    return kExitOk;
}

bool is_usage_error(const std::exception& e) {
    return dynamic_cast<const ConfigError*>(&e) != nullptr ||
           dynamic_cast<const lws::ParseError*>(&e) != nullptr ||
           dynamic_cast<const lws::InvalidCharacterError*>(&e) != nullptr ||
           dynamic_cast<const lws::UnknownResidueError*>(&e) != nullptr ||
           dynamic_cast<const lws::EmptySequenceError*>(&e) != nullptr ||
           dynamic_cast<const lws::TooLongError*>(&e) != nullptr ||
           dynamic_cast<const lws::DuplicateNameError*>(&e) != nullptr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HP-model protein structure search on the FCC lattice"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "Run the search once on one instance");
    solve->add_option("--seq", solve_opt.seq_text, "HP sequence literal");
    solve->add_option("--instances", solve_opt.instances_path, "FASTA-like instance file");
    solve->add_option("--name", solve_opt.name, "Instance name (default: first record)");
    solve->add_flag("--convert", solve_opt.convert, "Treat instance bodies as amino-acid strings");
    solve->add_option("--table", solve_opt.table_path, "Residue classification table file");
    solve->add_option("--out", solve_opt.out_dir, "Output directory")->capture_default_str();
    add_search_options(solve, solve_opt.common);

    BenchOptions bench_opt;
    CLI::App* bench = app.add_subcommand("bench", "Batch runs over an instance file plus statistics");
    bench->add_option("--instances", bench_opt.instances_path, "FASTA-like instance file")
        ->required();
    bench->add_option("--runs", bench_opt.runs, "Independent runs per instance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench->add_option("--parallelism", bench_opt.parallelism, "Concurrent runs")
        ->capture_default_str();
    bench->add_flag("--convert", bench_opt.convert, "Treat instance bodies as amino-acid strings");
    bench->add_option("--table", bench_opt.table_path, "Residue classification table file");
    bench->add_option("--reference", bench_opt.reference_path,
                      "CSV of name,avg reference energies for the R.I. column");
    bench->add_option("--out", bench_opt.out_dir, "Output directory")->capture_default_str();
    bench->add_option("--format", bench_opt.format, "Stats format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    add_search_options(bench, bench_opt.common);

    EnumerateOptions enum_opt;
    CLI::App* enumerate = app.add_subcommand(
        "enumerate", "Exhaustive exact optimum for a short sequence (length <= 9)");
    enumerate->add_option("--seq", enum_opt.seq_text, "HP sequence literal")->required();
    enumerate->add_flag("--no-symmetry", enum_opt.no_symmetry,
                        "Disable canonical-orientation reduction");

    ConvertOptions conv_opt;
    CLI::App* convert = app.add_subcommand("convert", "Convert amino-acid FASTA to HP FASTA");
    convert->add_option("--in", conv_opt.in_path, "Input FASTA file")->required();
    convert->add_option("--out", conv_opt.out_path, "Output file (default: stdout)");
    convert->add_option("--table", conv_opt.table_path, "Residue classification table file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_opt);
        if (bench->parsed()) return cmd_bench(bench_opt);
        if (enumerate->parsed()) return cmd_enumerate(enum_opt);
        if (convert->parsed()) return cmd_convert(conv_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_usage_error(e) ? kExitUsage : kExitRuntime;
    }
    return kExitUsage;
}
