// mpoeq: MPO-based equivalence checking of quantum circuits.
//
// Exit codes: 0 equivalent, 1 non-equivalent, 2 usage/parse error,
// 3 numeric error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpoeq/bench.hpp"
#include "mpoeq/checker.hpp"
#include "mpoeq/dense.hpp"
#include "mpoeq/qasm.hpp"

namespace {

constexpr int kExitEquivalent = 0;
constexpr int kExitNonEquivalent = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

mpoeq::Circuit load_circuit(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw mpoeq::Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    try {
        return mpoeq::parse_qasm(buf.str());
    } catch (const mpoeq::ParseError& e) {
        // the ParseError message already carries line/column; prefix the file
        throw mpoeq::Error(path + ": " + std::string(e.what()));
    }
}

void write_circuit(const mpoeq::Circuit& c, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << mpoeq::emit_qasm(c);
        return;
    }
    std::ofstream f(path);
    if (!f) throw mpoeq::Error("cannot open output file: " + path);
    f << mpoeq::emit_qasm(c);
}

int run_check(const std::string& path1, const std::string& path2,
              const mpoeq::CheckConfig& cfg, bool json, bool with_oracle) {
    const mpoeq::Circuit g = load_circuit(path1);
    const mpoeq::Circuit g_prime = load_circuit(path2);
    const mpoeq::CheckReport report = mpoeq::check_equivalence(g, g_prime, cfg);

    bool oracle_agrees = true;
    nlohmann::json j = mpoeq::to_json(report);
    if (with_oracle) {
        const auto oracle = mpoeq::oracle_equivalent(g, g_prime, 1e-9);
        oracle_agrees =
            oracle.equivalent == (report.verdict == mpoeq::Verdict::equivalent);
        j["oracle"] = {{"equivalent", oracle.equivalent},
                       {"phase", oracle.phase},
                       {"agreement", oracle_agrees}};
    }

    if (json) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "verdict:          " << mpoeq::to_string(report.verdict) << '\n'
                  << "|trace ratio|:    " << report.trace_ratio_magnitude << '\n'
                  << "max bond:         " << report.max_bond_seen << '\n'
                  << "gates applied:    " << report.gates_applied << '\n'
                  << "wall time:        " << report.total_ms << " ms\n";
        if (report.early_stopped_at >= 0)
            std::cout << "early stop:       qubit " << report.early_stopped_at << '\n';
        if (with_oracle)
            std::cout << "oracle agreement: " << (oracle_agrees ? "true" : "false") << '\n';
    }
    return report.verdict == mpoeq::Verdict::equivalent ? kExitEquivalent
                                                        : kExitNonEquivalent;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MPO-based quantum circuit equivalence checker"};
    app.require_subcommand(1);

    // check
    auto* check = app.add_subcommand("check", "Check two QASM circuits for equivalence");
    std::string c1, c2;
    mpoeq::CheckConfig cfg;
    bool no_early_stop = false, json_out = false, with_oracle = false;
    check->add_option("circuit1", c1, "first circuit (QASM)")->required();
    check->add_option("circuit2", c2, "second circuit (QASM)")->required();
    check->add_option("--svd-threshold", cfg.svd_threshold,
                      "relative singular-value cutoff (default 1e-3)");
    check->add_option("--tolerance", cfg.trace_tolerance,
                      "trace-ratio tolerance epsilon (default 1e-13)");
    check->add_option("--max-bond", cfg.max_bond, "hard bond-dimension cap (0 = none)");
    check->add_flag("--no-early-stop", no_early_stop, "disable the early-exit heuristic");
    check->add_flag("--json", json_out, "emit the report as JSON");
    check->add_flag("--oracle", with_oracle,
                    "also run the dense oracle (n <= 12) and report agreement");

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a seeded two-local circuit");
    int gen_n = 4, gen_reps = 0;
    std::string gen_pattern = "linear", gen_out;
    std::uint64_t gen_seed = 0;
    bool gen_heron = false;
    gen->add_option("-n,--qubits", gen_n, "qubit count")->required();
    gen->add_option("--pattern", gen_pattern, "linear | sca | full");
    gen->add_option("--reps", gen_reps, "layer repetitions (default: n)");
    gen->add_option("--seed", gen_seed, "PRNG seed");
    gen->add_flag("--heron", gen_heron, "rewrite to the {I,X,SX,SXdg,Rz,CZ} basis");
    gen->add_option("-o,--output", gen_out, "output path (default: stdout)");

    // inject
    auto* inj = app.add_subcommand("inject", "Inject an error into a QASM circuit");
    std::string inj_in, inj_out, inj_kind;
    double inj_severity = 0.0;
    std::uint64_t inj_seed = 0;
    inj->add_option("circuit", inj_in, "input circuit (QASM)")->required();
    inj->add_option("--kind", inj_kind, "missing_gates | rotation_offset | permutation")
        ->required();
    inj->add_option("--severity", inj_severity,
                    "gate count / theta offset (radians) / swap count")
        ->required();
    inj->add_option("--seed", inj_seed, "PRNG seed");
    inj->add_option("-o,--output", inj_out, "output path (default: stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a seeded scaling study (JSON lines)");
    std::vector<int> bench_ns{4};
    std::string bench_pattern = "linear", bench_out, bench_error = "none";
    int bench_reps = 0, bench_samples = 10, bench_jobs = 1;
    double bench_severity = 0.0;
    std::uint64_t bench_seed = 0;
    double bench_threshold = 1e-3, bench_tolerance = 1e-13;
    bench->add_option("-n,--qubits", bench_ns, "qubit counts (grid axis)")->required();
    bench->add_option("--pattern", bench_pattern, "linear | sca | full");
    bench->add_option("--reps", bench_reps, "layer repetitions (default: n)");
    bench->add_option("--samples", bench_samples, "samples per grid point (default 10)");
    bench->add_option("--seed", bench_seed, "base PRNG seed");
    bench->add_option("--error", bench_error,
                      "none | missing_gates | rotation_offset | permutation");
    bench->add_option("--severity", bench_severity, "error severity");
    bench->add_option("--svd-threshold", bench_threshold, "checker SVD threshold");
    bench->add_option("--tolerance", bench_tolerance, "checker trace tolerance");
    bench->add_option("--jobs", bench_jobs, "parallel samples (default 1)");
    bench->add_option("-o,--output", bench_out, "JSONL output path (default: stdout)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Dense-matrix equivalence check (n <= 12)");
    std::string o1, o2;
    double oracle_tol = 1e-9;
    oracle->add_option("circuit1", o1, "first circuit (QASM)")->required();
    oracle->add_option("circuit2", o2, "second circuit (QASM)")->required();
    oracle->add_option("--tolerance", oracle_tol, "max-norm tolerance (default 1e-9)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*check) {
            cfg.early_stop = !no_early_stop;
            return run_check(c1, c2, cfg, json_out, with_oracle);
        }
        if (*gen) {
            mpoeq::Circuit c = mpoeq::generate_two_local(
                gen_n, mpoeq::pattern_from_name(gen_pattern),
                gen_reps > 0 ? gen_reps : gen_n, gen_seed);
            if (gen_heron) c = mpoeq::rewrite_to_heron(c);
            write_circuit(c, gen_out);
            return 0;
        }
        if (*inj) {
            const mpoeq::Circuit in = load_circuit(inj_in);
            mpoeq::ErrorSpec err;
            if (inj_kind == "missing_gates")
                err.kind = mpoeq::ErrorKind::missing_gates;
            else if (inj_kind == "rotation_offset")
                err.kind = mpoeq::ErrorKind::rotation_offset;
            else if (inj_kind == "permutation")
                err.kind = mpoeq::ErrorKind::permutation;
            else
                throw mpoeq::Error("unknown error kind: " + inj_kind);
            err.severity = inj_severity;
            write_circuit(mpoeq::apply_error(in, err, inj_seed), inj_out);
            return 0;
        }
        if (*bench) {
            std::vector<mpoeq::BenchSpec> grid;
            for (int n : bench_ns) {
                mpoeq::BenchSpec spec;
                spec.n = n;
                spec.pattern = mpoeq::pattern_from_name(bench_pattern);
                spec.reps = bench_reps;
                spec.seed = bench_seed;
                if (bench_error != "none") {
                    if (bench_error == "missing_gates")
                        spec.error.kind = mpoeq::ErrorKind::missing_gates;
                    else if (bench_error == "rotation_offset")
                        spec.error.kind = mpoeq::ErrorKind::rotation_offset;
                    else if (bench_error == "permutation")
                        spec.error.kind = mpoeq::ErrorKind::permutation;
                    else
                        throw mpoeq::Error("unknown error kind: " + bench_error);
                    spec.error.severity = bench_severity;
                }
                spec.check.svd_threshold = bench_threshold;
                spec.check.trace_tolerance = bench_tolerance;
                grid.push_back(spec);
            }
            if (bench_out.empty() || bench_out == "-")
                mpoeq::run_scaling_study(grid, bench_samples, std::cout, bench_jobs);
            else
                mpoeq::run_scaling_study(grid, bench_samples, bench_out, bench_jobs);
            return 0;
        }
        if (*oracle) {
            const auto verdict =
                mpoeq::oracle_equivalent(load_circuit(o1), load_circuit(o2), oracle_tol);
            std::cout << "verdict: "
                      << (verdict.equivalent ? "equivalent" : "non_equivalent") << '\n';
            if (verdict.equivalent) std::cout << "phase:   " << verdict.phase << '\n';
            return verdict.equivalent ? kExitEquivalent : kExitNonEquivalent;
        }
    } catch (const mpoeq::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const mpoeq::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const mpoeq::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}
