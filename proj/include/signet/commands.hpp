#pragma once

// Command implementations behind the CLI. Everything here is callable from
// tests: each command takes plain arguments, writes its files, and returns
// the data it printed.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "signet/analysis.hpp"
#include "signet/config.hpp"
#include "signet/csv.hpp"
#include "signet/errors.hpp"
#include "signet/excitation.hpp"
#include "signet/rng.hpp"
#include "signet/sim.hpp"

namespace signet {

inline constexpr const char* kToolVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// The 12-node benchmark network: 20 fixed edges (11 cooperative, 9
/// antagonistic); magnitudes drawn uniformly from [0.3, 1.0] in edge order
/// from the seed's weight stream.
inline SignedGraph reference_network(std::uint64_t seed) {
    struct Slot {
        int i, j, sign;
    };
    // Lexicographic edge order; sign +1 = cooperative, -1 = antagonistic.
    static constexpr Slot slots[] = {
        {1, 3, -1}, {1, 4, +1}, {1, 5, +1},  {1, 6, -1},  {1, 8, +1},  {1, 10, +1}, {1, 11, -1},
        {1, 12, +1}, {2, 5, +1}, {2, 6, -1}, {3, 4, +1},  {3, 6, +1},  {4, 7, -1},  {4, 8, -1},
        {4, 9, +1},  {4, 10, -1}, {7, 8, -1}, {8, 9, +1}, {9, 10, -1}, {9, 11, +1},
    };
    Rng rng(seed ^ kWeightStreamTag);
    std::vector<SignedEdge> edges;
    edges.reserve(std::size(slots));
    for (const auto& s : slots)
        edges.push_back({s.i, s.j, s.sign * rng.uniform(0.3, 1.0)});
    return SignedGraph(12, std::move(edges), true);
}

/// Default seed for the benchmark run. Chosen so the recorded trajectory
/// demonstrates both regimes the analysis tooling measures: |x - x_hat|
/// holds above 0.1 through full 2 s stretches of the early transient
/// (delta-qualified excitation windows with a positive edge-form floor),
/// and the late-run synchronization collapse lands inside the 200 s
/// horizon. Early windows of most seeds are direction-degenerate because
/// saturated tanh feedback moves x_hat along a fixed sign pattern.
inline constexpr std::uint64_t kBenchmarkSeed = 9;

/// Benchmark run configuration: the reference network, saturating cubic
/// drift, c1 = 13 under the topology-free gain rule, the seven-term
/// excitation, dt = 1e-3 over 200 s.
inline SimConfig reference_config(std::uint64_t seed) {
    SimConfig cfg{PlantSpec(reference_network(seed), {NodeDynamics::cubic_soft()})};
    cfg.gains.c1 = 13.0;
    cfg.gain_mode = GainMode::prop2;
    cfg.signal = SignalConfig::defaults();
    cfg.dt = 1e-3;
    cfg.horizon = 200.0;
    cfg.record_stride = 10;
    cfg.seed = seed;
    return cfg;
}

struct RunManifest {
    std::string tool = "signet";
    std::string version = kToolVersion;
    std::string command;
    std::string config_source;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
    std::optional<std::string> warning;
};

namespace cmd_detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline void write_metrics_csv(const MetricsSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "t,v1,v1_dot_measured,v1_dot_predicted,est_err_norm,est_err_max,sync_spread,"
           "aux_norm\n";
    const std::size_t s_count = series.v1.size();
    for (std::size_t s = 0; s < s_count; ++s) {
        // Derivative columns cover intervals, so the final sample has none.
        const bool has_rate = s + 1 < s_count;
        out << format_sig17(series.times[s]) << ',' << format_sig17(series.v1[s]) << ','
            << (has_rate ? format_sig17(series.v1_dot_measured[s]) : "nan") << ','
            << (has_rate ? format_sig17(series.v1_dot_predicted[s]) : "nan") << ','
            << format_sig17(series.est_err_norm[s]) << ',' << format_sig17(series.est_err_max[s])
            << ',' << format_sig17(series.sync_spread[s]) << ','
            << format_sig17(series.aux_norm[s]) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

inline void write_pair_csv(const std::filesystem::path& path, const std::string& value_name,
                           const Vec& times, const Vec& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "t," << value_name << "\n";
    for (std::size_t s = 0; s < times.size(); ++s)
        out << format_sig17(times[s]) << ',' << format_sig17(values[s]) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

inline void write_weights_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "t";
    for (int k = 1; k <= traj.m_bar; ++k) out << ",what_" << k;
    out << "\n";
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        out << format_sig17(traj.times[s]);
        for (int k = 0; k < traj.m_bar; ++k) out << ',' << format_sig17(traj.w_hat(s, k));
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

inline Json topology_json(const RecoveredTopology& rec) {
    Json edges = Json::array();
    for (const auto& e : rec.edges)
        edges.push_back({{"i", e.i},
                         {"j", e.j},
                         {"sign", e.sign},
                         {"weight_estimate", e.weight_estimate}});
    return Json{{"threshold", rec.threshold},
                {"precision", rec.precision},
                {"recall", rec.recall},
                {"sign_accuracy", rec.sign_accuracy},
                {"edge_count", rec.edges.size()},
                {"edges", std::move(edges)}};
}

inline Json manifest_json(const RunManifest& m) {
    Json j{{"tool", m.tool},
           {"version", m.version},
           {"command", m.command},
           {"config_source", m.config_source},
           {"seed", m.seed},
           {"outputs", m.outputs},
           {"wall_seconds", m.wall_seconds}};
    j["warning"] = m.warning ? Json(*m.warning) : Json(nullptr);
    return j;
}

/// Shared tail of simulate/reproduce: run, analyze, write the output set.
inline RunManifest run_and_write(const SimConfig& cfg, const std::string& out_dir,
                                 const std::string& command, const std::string& config_source) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    const fs::path dir(out_dir);

    RunManifest manifest;
    manifest.command = command;
    manifest.config_source = config_source;
    manifest.seed = cfg.seed;
    manifest.warning = gain_warning(cfg);

    const auto t_begin = std::chrono::steady_clock::now();
    const Trajectory traj = simulate(cfg);
    const MetricsSeries series =
        lyapunov_series(traj, cfg.plant.true_weights(), cfg.gains, cfg.plant.laplacian());
    const ConvergenceSummary summary = convergence_summary(series, 0.1, 1e-6);
    const LyapunovGap gap = lyapunov_identity_gap(series, 1e-3);
    const RecoveredTopology recovered =
        recover_topology(row_copy(traj.w_hat, traj.samples() - 1), 0.1, cfg.plant.graph());

    write_trajectory_csv(traj, (dir / "trajectory.csv").string());
    write_metrics_csv(series, dir / "metrics.csv");
    write_pair_csv(dir / "fig_estimation_errors.csv", "max_weight_error", series.times,
                   series.est_err_max);
    write_pair_csv(dir / "fig_sync_errors.csv", "sync_spread", series.times,
                   series.sync_spread);
    write_weights_csv(traj, dir / "fig_estimated_weights.csv");
    write_text_file(dir / "config_resolved.toml", emit_config_toml(cfg, resolve_init(cfg)));

    Json metrics{{"n_nodes", traj.n_nodes},
                 {"m_bar", traj.m_bar},
                 {"c1", cfg.gains.c1},
                 {"kappa", cfg.signal.kappa},
                 {"dt", cfg.dt},
                 {"horizon", cfg.horizon},
                 {"record_stride", cfg.record_stride},
                 {"seed", cfg.seed},
                 {"samples", traj.samples()},
                 {"final_est_err", summary.final_est_err},
                 {"final_sync_err", summary.final_sync_err},
                 {"v1_monotone_violations", summary.v1_monotone_violations},
                 {"lyapunov_max_gap", gap.max_abs_gap},
                 {"lyapunov_gap_violations", gap.violations},
                 {"recovered", topology_json(recovered)}};
    write_json_file(dir / "metrics.json", metrics);

    manifest.outputs = {"trajectory.csv",
                        "metrics.csv",
                        "metrics.json",
                        "fig_estimation_errors.csv",
                        "fig_sync_errors.csv",
                        "fig_estimated_weights.csv",
                        "config_resolved.toml",
                        "manifest.json"};
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    write_json_file(dir / "manifest.json", manifest_json(manifest));
    return manifest;
}

}  // namespace cmd_detail

inline RunManifest cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const SimConfig cfg = read_config_file(config_path);
    return cmd_detail::run_and_write(cfg, out_dir, "simulate", config_path);
}

inline RunManifest cmd_reproduce(const std::string& out_dir, std::uint64_t seed) {
    return cmd_detail::run_and_write(reference_config(seed), out_dir, "reproduce",
                                     "builtin:reference");
}

/// Fan out count independent seeded runs of one config, in parallel, into
/// out_dir/run_seed<k>. Seeds are base_seed, base_seed+1, ...
inline std::vector<RunManifest> cmd_sweep(const std::string& config_path,
                                          const std::string& out_dir, int count) {
    if (count < 1) throw std::invalid_argument("cmd_sweep: count must be >= 1");
    const SimConfig base = read_config_file(config_path);
    std::vector<std::future<RunManifest>> futures;
    futures.reserve(count);
    for (int k = 0; k < count; ++k) {
        SimConfig cfg = base;
        cfg.seed = base.seed + static_cast<std::uint64_t>(k);
        const std::string dir =
            (std::filesystem::path(out_dir) / ("run_seed" + std::to_string(cfg.seed))).string();
        futures.push_back(std::async(std::launch::async, [cfg, dir, config_path] {
            return cmd_detail::run_and_write(cfg, dir, "sweep", config_path);
        }));
    }
    std::vector<RunManifest> manifests;
    manifests.reserve(count);
    for (auto& f : futures) manifests.push_back(f.get());
    return manifests;
}

struct CheckPeOptions {
    double delta = 0.1;
    double window = 2.0;
    std::size_t stride = 100;  // window starts, in samples
    GramForm gram = GramForm::state;
};

/// Windowed excitation analysis of a recorded trajectory file.
inline Json cmd_check_pe(const std::string& trajectory_csv, const CheckPeOptions& opts) {
    const Trajectory traj = read_trajectory_csv(trajectory_csv);
    const IncidenceMatrix e_bar = build_complete_incidence(traj.n_nodes);
    const SignalSamples sig = edge_excitation(traj, e_bar, opts.gram);
    const std::vector<double> norms = state_error_norms(traj);
    const DeltaPeReport rep = delta_pe_check(sig, norms, opts.delta, opts.window, opts.stride);

    Json windows = Json::array();
    for (const auto& w : rep.windows)
        windows.push_back({{"t_start", w.t_start}, {"min_eig", w.min_eig}});
    return Json{{"delta", rep.delta},
                {"T", rep.window},
                {"stride", rep.stride},
                {"gram_form", opts.gram == GramForm::state ? "state" : "edge"},
                {"mu_estimate", rep.mu_estimate},
                {"qualified_count", rep.qualified_count},
                {"windows", std::move(windows)}};
}

/// Spectral report for a graph file: eigenvalues of its Laplacian and the
/// gain thresholds of both modes.
inline Json cmd_eigen(const std::string& graph_path) {
    const SignedGraph g = read_graph_file(graph_path);
    const IncidenceMatrix e_bar = build_complete_incidence(g.n_nodes());
    const Mat lap = laplacian_from_weights(e_bar, embed_weights(g));
    const SpectralReport rep = spectral_report(lap);

    Json j{{"eigenvalues", rep.eigenvalues},
           {"lambda_min", rep.lambda_min},
           {"lambda_max", rep.lambda_max},
           {"c1_prop1", required_gain(GainMode::prop1, rep.lambda_min, g.n_nodes())},
           {"c1_prop2", required_gain(GainMode::prop2, std::nullopt, g.n_nodes())}};
    if (g.normalized()) {
        j["bound_holds"] = rep.lambda_min >= -static_cast<double>(g.n_nodes()) - 1e-9;
    } else {
        j["bound_holds"] = nullptr;
    }
    return j;
}

/// Random graph generator. Each complete-graph slot is kept with probability
/// density; kept edges are antagonistic with probability negative_fraction
/// and get magnitude uniform on [0.3, 1.0].
inline SignedGraph generate_graph(int n, double density, double negative_fraction,
                                  std::uint64_t seed, bool normalized) {
    if (n < 1) throw GenerationError("generate_graph: need n >= 1");
    if (density < 0.0 || density > 1.0)
        throw GenerationError("generate_graph: density must be in [0, 1]");
    if (negative_fraction < 0.0 || negative_fraction > 1.0)
        throw GenerationError("generate_graph: negative_fraction must be in [0, 1]");
    Rng rng(seed);
    std::vector<SignedEdge> edges;
    for (int i = 1; i < n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            if (rng.uniform01() >= density) continue;
            const double sign = (rng.uniform01() < negative_fraction) ? -1.0 : 1.0;
            edges.push_back({i, j, sign * rng.uniform(0.3, 1.0)});
        }
    }
    return SignedGraph(n, std::move(edges), normalized);
}

inline SignedGraph cmd_gen_graph(int n, double density, double negative_fraction,
                                 std::uint64_t seed, bool normalized,
                                 const std::string& out_path) {
    const SignedGraph g = generate_graph(n, density, negative_fraction, seed, normalized);
    write_graph_file(g, out_path);
    return g;
}

}  // namespace signet
