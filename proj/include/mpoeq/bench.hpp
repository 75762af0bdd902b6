#pragma once

// Benchmark harness: seeded two-local circuit generation (linear / sca / full
// entanglement), a deterministic rewrite into the {I, X, SX, SXdg, Rz, CZ}
// basis, three error-injection models, and a scaling study that emits
// JSON-lines records.
//
// PRNG contract: all randomness comes from std::mt19937_64 seeded directly
// with the given 64-bit seed. Angles are drawn as
//     theta = -pi + 2*pi * ((rng() >> 11) * 0x1.0p-53)
// i.e. the top 53 bits mapped to [0, 1), so fixtures are bit-portable across
// platforms (std::uniform_real_distribution is not pinned by the standard).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpoeq/checker.hpp"
#include "mpoeq/circuit.hpp"
#include "mpoeq/gates.hpp"

namespace mpoeq {

enum class Pattern { linear, sca, full };

inline const char* to_string(Pattern p) {
    switch (p) {
        case Pattern::linear: return "linear";
        case Pattern::sca: return "sca";
        case Pattern::full: return "full";
    }
    throw Error("unknown pattern");
}

inline Pattern pattern_from_name(const std::string& s) {
    if (s == "linear") return Pattern::linear;
    if (s == "sca") return Pattern::sca;
    if (s == "full") return Pattern::full;
    throw Error("unknown entanglement pattern: " + s);
}

enum class ErrorKind { none, missing_gates, rotation_offset, permutation };

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::none: return "none";
        case ErrorKind::missing_gates: return "missing_gates";
        case ErrorKind::rotation_offset: return "rotation_offset";
        case ErrorKind::permutation: return "permutation";
    }
    throw Error("unknown error kind");
}

struct ErrorSpec {
    ErrorKind kind = ErrorKind::none;
    // missing_gates: gate count; permutation: swap count; rotation_offset:
    // theta_error in [-pi, pi]
    double severity = 0.0;
};

struct BenchSpec {
    int n = 2;
    Pattern pattern = Pattern::linear;
    int reps = 0;  // 0 = default: square circuit, reps = n
    std::uint64_t seed = 0;
    ErrorSpec error;
    CheckConfig check;

    int effective_reps() const { return reps > 0 ? reps : n; }

    void validate() const {
        if (n < 2) throw Error("bench: n must be >= 2");
        if (reps < 0) throw Error("bench: reps must be >= 0");
        if (error.kind == ErrorKind::rotation_offset &&
            std::abs(error.severity) > std::numbers::pi + 1e-12)
            throw Error("bench: rotation offset must lie in [-pi, pi]");
        if (error.kind != ErrorKind::rotation_offset && error.severity < 0)
            throw Error("bench: error severity must be >= 0");
    }
};

namespace bench_detail {

inline double draw_angle(std::mt19937_64& rng) {
    return -std::numbers::pi + 2.0 * std::numbers::pi * ((rng() >> 11) * 0x1.0p-53);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace bench_detail

/// Two-local circuit: `reps` blocks of [Rx layer, Rzz entanglement layer,
/// Rx layer]. Entanglement layers: linear = (q, q+1) ascending; full = all
/// (i, j) with i < j in lexicographic order; sca = the linear layer with its
/// pair order reversed on odd blocks, plus one circular Rzz(0, n-1) whose
/// position inside the layer advances by one slot per block (block index mod
/// layer-size + 1). Angles are drawn in emission order.
inline Circuit generate_two_local(int n, Pattern pattern, int reps, std::uint64_t seed) {
    if (n < 2) throw Error("generate_two_local: n must be >= 2");
    if (reps < 1) throw Error("generate_two_local: reps must be >= 1");
    std::mt19937_64 rng(seed);
    Circuit c;
    c.num_qubits = n;

    auto rx_layer = [&] {
        for (int q = 0; q < n; ++q)
            c.gates.push_back(make_gate(GateKind::Rx, {q}, {bench_detail::draw_angle(rng)}));
    };

    for (int block = 0; block < reps; ++block) {
        rx_layer();
        switch (pattern) {
            case Pattern::linear:
                for (int q = 0; q + 1 < n; ++q)
                    c.gates.push_back(make_gate(GateKind::Rzz, {q, q + 1},
                                                {bench_detail::draw_angle(rng)}));
                break;
            case Pattern::sca: {
                std::vector<std::pair<int, int>> pairs;
                for (int q = 0; q + 1 < n; ++q) pairs.emplace_back(q, q + 1);
                if (block % 2 == 1) std::reverse(pairs.begin(), pairs.end());
                const std::size_t slot = static_cast<std::size_t>(block) % (pairs.size() + 1);
                pairs.insert(pairs.begin() + slot, {0, n - 1});
                for (auto [a, b] : pairs)
                    c.gates.push_back(
                        make_gate(GateKind::Rzz, {a, b}, {bench_detail::draw_angle(rng)}));
                break;
            }
            case Pattern::full:
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        c.gates.push_back(make_gate(GateKind::Rzz, {i, j},
                                                    {bench_detail::draw_angle(rng)}));
                break;
        }
        rx_layer();
    }
    return c;
}

inline Circuit generate_two_local(const BenchSpec& spec) {
    spec.validate();
    return generate_two_local(spec.n, spec.pattern, spec.effective_reps(), spec.seed);
}

namespace bench_detail {

inline void emit_h(std::vector<Gate>& out, int q) {
    const double half_pi = std::numbers::pi / 2.0;
    out.push_back(make_gate(GateKind::Rz, {q}, {half_pi}));
    out.push_back(make_gate(GateKind::SX, {q}));
    out.push_back(make_gate(GateKind::Rz, {q}, {half_pi}));
}

inline void emit_rx(std::vector<Gate>& out, double theta, int q) {
    const double half_pi = std::numbers::pi / 2.0;
    out.push_back(make_gate(GateKind::Rz, {q}, {half_pi}));
    out.push_back(make_gate(GateKind::SX, {q}));
    out.push_back(make_gate(GateKind::Rz, {q}, {theta + std::numbers::pi}));
    out.push_back(make_gate(GateKind::SX, {q}));
    out.push_back(make_gate(GateKind::Rz, {q}, {half_pi}));
}

inline void emit_cx(std::vector<Gate>& out, int control, int target) {
    emit_h(out, target);
    out.push_back(make_gate(GateKind::CZ, {control, target}));
    emit_h(out, target);
}

inline void emit_rzz(std::vector<Gate>& out, double theta, int a, int b) {
    emit_cx(out, a, b);
    out.push_back(make_gate(GateKind::Rz, {b}, {theta}));
    emit_cx(out, a, b);
}

inline void emit_swap(std::vector<Gate>& out, int a, int b) {
    emit_cx(out, a, b);
    emit_cx(out, b, a);
    emit_cx(out, a, b);
}

} // namespace bench_detail

/// Rewrite into the {I, X, SX, SXdg, Rz, CZ} basis. Equal to the input up to
/// a global phase (each rule is an up-to-phase identity, covered by tests).
inline Circuit rewrite_to_heron(const Circuit& c) {
    c.validate();
    Circuit out;
    out.num_qubits = c.num_qubits;
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::I:
            case GateKind::X:
            case GateKind::SX:
            case GateKind::SXdg:
            case GateKind::Rz:
            case GateKind::CZ:
                out.gates.push_back(g);
                break;
            case GateKind::H:
                bench_detail::emit_h(out.gates, g.qubits[0]);
                break;
            case GateKind::Rx:
                bench_detail::emit_rx(out.gates, g.params[0], g.qubits[0]);
                break;
            case GateKind::CX:
                bench_detail::emit_cx(out.gates, g.qubits[0], g.qubits[1]);
                break;
            case GateKind::Rzz:
                bench_detail::emit_rzz(out.gates, g.params[0], g.qubits[0], g.qubits[1]);
                break;
            case GateKind::Swap:
                bench_detail::emit_swap(out.gates, g.qubits[0], g.qubits[1]);
                break;
            default:
                throw CatalogError("rewrite_to_heron: no rewrite rule for gate " +
                                   std::string(gate_info(g.kind).name));
        }
    }
    return out;
}

/// Remove `count` gates at uniformly chosen distinct positions (partial
/// Fisher-Yates over the index list), preserving the order of the rest.
inline Circuit inject_missing_gates(const Circuit& c, int count, std::uint64_t seed) {
    if (count < 0 || count > static_cast<int>(c.gates.size()))
        throw Error("inject_missing_gates: count out of range");
    std::mt19937_64 rng(seed);
    std::vector<int> idx(c.gates.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(idx.size()) - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::vector<bool> removed(c.gates.size(), false);
    for (int i = 0; i < count; ++i) removed[idx[i]] = true;
    Circuit out;
    out.num_qubits = c.num_qubits;
    for (std::size_t i = 0; i < c.gates.size(); ++i)
        if (!removed[i]) out.gates.push_back(c.gates[i]);
    return out;
}

/// Add theta_error to every angle of every parameterized gate.
inline Circuit inject_rotation_offset(const Circuit& c, double theta_error) {
    Circuit out = c;
    for (Gate& g : out.gates)
        for (double& p : g.params) p += theta_error;
    return out;
}

/// Prepend n_swap nearest-neighbor SWAP(q, q+1) gates, q uniform in [0, n-2].
inline Circuit inject_permutation(const Circuit& c, int n_swap, std::uint64_t seed) {
    if (c.num_qubits < 2) throw Error("inject_permutation: need at least 2 qubits");
    if (n_swap < 0) throw Error("inject_permutation: n_swap must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, c.num_qubits - 2);
    Circuit out;
    out.num_qubits = c.num_qubits;
    for (int i = 0; i < n_swap; ++i) {
        const int q = pick(rng);
        out.gates.push_back(make_gate(GateKind::Swap, {q, q + 1}));
    }
    out.gates.insert(out.gates.end(), c.gates.begin(), c.gates.end());
    return out;
}

/// Apply the spec's error model to the rewritten circuit.
inline Circuit apply_error(const Circuit& c, const ErrorSpec& e, std::uint64_t seed) {
    switch (e.kind) {
        case ErrorKind::none: return c;
        case ErrorKind::missing_gates:
            return inject_missing_gates(c, static_cast<int>(e.severity), seed);
        case ErrorKind::rotation_offset: return inject_rotation_offset(c, e.severity);
        case ErrorKind::permutation:
            return inject_permutation(c, static_cast<int>(e.severity), seed);
    }
    throw Error("apply_error: unknown error kind");
}

struct BenchSample {
    BenchSpec spec;
    int sample_index = 0;
    std::uint64_t sample_seed = 0;
    CheckReport report;
};

/// One harness run: G = two-local circuit, G' = its basis rewrite with the
/// spec's error injected, then the MPO check.
inline BenchSample run_bench_sample(const BenchSpec& spec, int sample_index) {
    spec.validate();
    BenchSample out;
    out.spec = spec;
    out.sample_index = sample_index;
    // per-sample seed: splitmix64 of the spec seed xor'ed with sample_index+1,
    // so sample 0 of seed s differs from sample 1 of seed s-1
    out.sample_seed =
        bench_detail::splitmix64(spec.seed ^ (static_cast<std::uint64_t>(sample_index) + 1));

    const Circuit g = generate_two_local(spec.n, spec.pattern, spec.effective_reps(),
                                         out.sample_seed);
    Circuit g_prime = rewrite_to_heron(g);
    g_prime = apply_error(g_prime, spec.error, bench_detail::splitmix64(out.sample_seed));
    out.report = check_equivalence(g, g_prime, spec.check);
    return out;
}

inline nlohmann::json sample_record(const BenchSample& s) {
    return nlohmann::json{
        {"n", s.spec.n},
        {"pattern", to_string(s.spec.pattern)},
        {"reps", s.spec.effective_reps()},
        {"error_kind", to_string(s.spec.error.kind)},
        {"severity", s.spec.error.severity},
        {"seed", s.sample_seed},
        {"sample", s.sample_index},
        {"verdict", to_string(s.report.verdict)},
        {"trace_ratio_mag", s.report.trace_ratio_magnitude},
        {"max_bond", s.report.max_bond_seen},
        {"wall_ms", s.report.total_ms},
    };
}

/// Run `samples` seeded checks per grid point; write one JSON-lines record per
/// sample followed by an aggregate record {mean_ms, std_ms} per point.
/// `jobs` > 1 runs samples concurrently; output order stays deterministic.
inline void run_scaling_study(const std::vector<BenchSpec>& grid, int samples,
                              std::ostream& out, int jobs = 1) {
    if (samples < 1) throw Error("run_scaling_study: samples must be >= 1");
    if (jobs < 1) jobs = 1;

    for (const BenchSpec& spec : grid) {
        std::vector<BenchSample> results(samples);
        if (jobs == 1) {
            for (int s = 0; s < samples; ++s) results[s] = run_bench_sample(spec, s);
        } else {
            std::vector<std::future<BenchSample>> futures;
            futures.reserve(samples);
            for (int s = 0; s < samples; ++s)
                futures.push_back(
                    std::async(std::launch::async, [&spec, s] { return run_bench_sample(spec, s); }));
            for (int s = 0; s < samples; ++s) results[s] = futures[s].get();
        }

        double sum = 0.0;
        for (const auto& r : results) sum += r.report.total_ms;
        const double mean = sum / samples;
        double var = 0.0;
        for (const auto& r : results) {
            const double d = r.report.total_ms - mean;
            var += d * d;
        }
        const double std_ms = samples > 1 ? std::sqrt(var / (samples - 1)) : 0.0;

        for (const auto& r : results) out << sample_record(r).dump() << '\n';
        nlohmann::json agg{
            {"n", spec.n},
            {"pattern", to_string(spec.pattern)},
            {"reps", spec.effective_reps()},
            {"error_kind", to_string(spec.error.kind)},
            {"severity", spec.error.severity},
            {"seed", spec.seed},
            {"aggregate", true},
            {"samples", samples},
            {"mean_ms", mean},
            {"std_ms", std_ms},
        };
        out << agg.dump() << '\n';
    }
    out.flush();
}

inline void run_scaling_study(const std::vector<BenchSpec>& grid, int samples,
                              const std::string& out_path, int jobs = 1) {
    std::ofstream f(out_path);
    if (!f) throw Error("run_scaling_study: cannot open " + out_path);
    run_scaling_study(grid, samples, f, jobs);
    if (!f) throw Error("run_scaling_study: write failed for " + out_path);
}

} // namespace mpoeq
