// Release gate: every blocking property of the library checked end to end,
// one pass/fail line per criterion. All tolerances are pinned here in source.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "signet/signet.hpp"

using namespace signet;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void run(const char* id, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(id, ok, detail);
    } catch (const std::exception& ex) {
        report(id, false, std::string("exception: ") + ex.what());
    }
}

std::string fmt(const char* format, ...) {
    char buf[768];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// A1/A2 share one sweep of random graphs.
struct LaplacianOutcome {
    double worst_gap = 0.0;
    double worst_asym = 0.0;
    double worst_kernel = 0.0;
    bool flips_exact = true;
    double wall = 0.0;
};
std::optional<LaplacianOutcome> g_lap;
std::string g_lap_error;

void prepare_laplacian_sweep() {
    try {
        LaplacianOutcome out;
        const auto t0 = Clock::now();
        Rng flip_rng(99);
        for (int k = 0; k < 100; ++k) {
            const int n = 2 + (k % 7);
            const SignedGraph g =
                generate_graph(n, 0.6, 0.4, 1000 + static_cast<std::uint64_t>(k), false);
            const IncidenceMatrix e_bar = build_complete_incidence(n);
            const WeightVector w = embed_weights(g);
            const Mat from_slots = laplacian_from_weights(e_bar, w);

            out.worst_gap = std::max(out.worst_gap, max_abs_diff(from_slots, laplacian_direct(g)));
            out.worst_asym = std::max(out.worst_asym, max_asymmetry(from_slots));
            out.worst_kernel =
                std::max(out.worst_kernel, norm_inf(matvec(from_slots, Vec(n, 1.0))));

            Mat flipped = e_bar.matrix();
            for (std::size_t c = 0; c < flipped.cols(); ++c) {
                if (flip_rng.uniform01() < 0.5) continue;
                for (std::size_t r = 0; r < flipped.rows(); ++r) flipped(r, c) = -flipped(r, c);
            }
            if (!(laplacian_from_weights(flipped, w) == from_slots)) out.flips_exact = false;
        }
        out.wall = seconds_since(t0);
        g_lap = out;
    } catch (const std::exception& ex) {
        g_lap_error = ex.what();
    }
}

// A5/A7 share the default-seed benchmark run, recorded at every step.
struct ReferenceOutcome {
    LyapunovGap gap;
    std::size_t intervals = 0;
    ConvergenceSummary bench;
    std::size_t state_qualified = 0;
    double state_mu = 0.0;
    std::size_t edge_qualified = 0;
    double edge_mu = 0.0;
};
std::optional<ReferenceOutcome> g_ref;
std::string g_ref_error;

void prepare_reference_run() {
    try {
        ReferenceOutcome out;
        SimConfig cfg = reference_config(kBenchmarkSeed);
        cfg.record_stride = 1;

        const Trajectory traj = simulate(cfg);

        const MetricsSeries series =
            lyapunov_series(traj, cfg.plant.true_weights(), cfg.gains, cfg.plant.laplacian());
        out.gap = lyapunov_identity_gap(series, 1e-3);
        out.intervals = series.v1_dot_measured.size();
        out.bench = convergence_summary(series, 0.1, 1e-6);

        const std::vector<double> norms = state_error_norms(traj);
        const IncidenceMatrix& e_bar = cfg.plant.complete_incidence();
        const DeltaPeReport state_rep =
            delta_pe_check(edge_excitation(traj, e_bar, GramForm::state), norms, 0.1, 2.0, 100);
        const DeltaPeReport edge_rep =
            delta_pe_check(edge_excitation(traj, e_bar, GramForm::edge), norms, 0.1, 2.0, 100);
        out.state_qualified = state_rep.qualified_count;
        out.state_mu = state_rep.mu_estimate;
        out.edge_qualified = edge_rep.qualified_count;
        out.edge_mu = edge_rep.mu_estimate;
        g_ref = std::move(out);
    } catch (const std::exception& ex) {
        g_ref_error = ex.what();
    }
}

bool perfect_recovery(const RecoveredTopology& rec) {
    return rec.precision == 1.0 && rec.recall == 1.0 && rec.sign_accuracy == 1.0;
}

SimConfig triangle_config(NodeDynamics dyn) {
    SignedGraph g(3, {{1, 2, 0.8}, {1, 3, -0.5}, {2, 3, 0.6}}, true);
    SimConfig cfg{PlantSpec(std::move(g), {std::move(dyn)})};
    cfg.dt = 1e-3;
    cfg.horizon = 10.0;
    cfg.record_stride = 1;
    cfg.seed = 1;
    return cfg;
}

// Antagonistic pair, no excitation, explicit disagreement start: x_hat stays
// at zero, so x evolves as dx/dt = (2 - c1) x along the (1, -1) mode.
double pair_decay_ratio(double c1) {
    SignedGraph g(2, {{1, 2, -1.0}}, true);
    SimConfig cfg{PlantSpec(std::move(g), {NodeDynamics::zero()})};
    cfg.gains.c1 = c1;
    cfg.gain_mode = GainMode::prop1;
    cfg.signal.pe_terms.clear();
    cfg.dt = 1e-3;
    cfg.horizon = 5.0;
    cfg.record_stride = 1000;
    cfg.init.x0 = Vec{1.0, -1.0};
    cfg.init.x_hat0 = Vec{0.0, 0.0};
    cfg.init.w_hat0 = Vec{0.0};
    const Trajectory traj = simulate(cfg);
    const std::vector<double> norms = state_error_norms(traj);
    return norms.back() / norms.front();
}

double rk4_endpoint_error(double dt) {
    const auto rhs = [](double, const Vec& y) { return Vec{-y[0]}; };
    Vec y{1.0};
    const long long steps = std::llround(1.0 / dt);
    for (long long i = 0; i < steps; ++i)
        y = rk4_step(rhs, y, static_cast<double>(i) * dt, dt);
    return std::abs(y[0] - std::exp(-1.0));
}

}  // namespace

int main() {
    prepare_laplacian_sweep();

    run("A1", []() -> std::pair<bool, std::string> {
        if (!g_lap) return {false, "graph sweep failed: " + g_lap_error};
        const bool ok = g_lap->worst_gap <= 1e-12 && g_lap->wall < 1.0;
        return {ok, fmt("slot-embedded vs direct Laplacian on 100 random signed graphs "
                        "(2..8 nodes): max entry gap %.2e (limit 1e-12), sweep %.3f s (limit 1)",
                        g_lap->worst_gap, g_lap->wall)};
    });

    run("A2", []() -> std::pair<bool, std::string> {
        if (!g_lap) return {false, "graph sweep failed: " + g_lap_error};
        const bool ok = g_lap->worst_asym == 0.0 && g_lap->worst_kernel <= 1e-12 &&
                        g_lap->flips_exact;
        return {ok, fmt("same sweep: max asymmetry %.1e (must be exactly 0), max |L*ones|_inf "
                        "%.2e (limit 1e-12), random orientation flips change nothing: %s",
                        g_lap->worst_asym, g_lap->worst_kernel,
                        g_lap->flips_exact ? "yes" : "NO")};
    });

    run("A3", []() -> std::pair<bool, std::string> {
        const auto t0 = Clock::now();
        bool all_hold = true;
        double tightest = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 200; ++k) {
            const int n = 2 + (k % 9);
            const RayleighCheck rc = check_rayleigh_bound(
                generate_graph(n, 0.7, 0.5, 2000 + static_cast<std::uint64_t>(k), true));
            tightest = std::min(tightest, rc.lambda_min + static_cast<double>(n));
            if (!rc.bound_holds) all_hold = false;
        }
        double worst_extreme = 0.0;
        for (const int n : {2, 3, 5}) {
            std::vector<SignedEdge> edges;
            for (int i = 1; i < n; ++i)
                for (int j = i + 1; j <= n; ++j) edges.push_back({i, j, -1.0});
            const RayleighCheck rc = check_rayleigh_bound(SignedGraph(n, std::move(edges), true));
            worst_extreme =
                std::max(worst_extreme, std::abs(rc.lambda_min + static_cast<double>(n)));
        }
        const double wall = seconds_since(t0);
        const bool ok = all_hold && worst_extreme <= 1e-9 && wall < 5.0;
        return {ok, fmt("lambda_min >= -n held on 200 random normalized graphs (2..10 nodes, "
                        "smallest slack %.3f); all-antagonistic complete graphs hit -n within "
                        "%.1e (limit 1e-9); sweep %.3f s (limit 5)",
                        tightest, worst_extreme, wall)};
    });

    run("A4", []() -> std::pair<bool, std::string> {
        const auto t0 = Clock::now();
        const CrossValidation cv = cross_validate(triangle_config(NodeDynamics::cubic_soft()));

        const Trajectory a = simulate(triangle_config(NodeDynamics::cubic_soft()));
        const Trajectory b = simulate(triangle_config(NodeDynamics::zero()));
        double drift_gap = 0.0;
        for (std::size_t s = 0; s < a.samples(); ++s) {
            for (int i = 0; i < a.n_nodes; ++i) {
                const double ea = a.x(s, i) - a.x_hat(s, i);
                const double eb = b.x(s, i) - b.x_hat(s, i);
                drift_gap = std::max(drift_gap, std::abs(ea - eb));
            }
            for (int k = 0; k < a.m_bar; ++k)
                drift_gap = std::max(drift_gap, std::abs(a.w_hat(s, k) - b.w_hat(s, k)));
        }
        const double wall = seconds_since(t0);
        const bool ok = cv.max_deviation() < 1e-8 && drift_gap < 1e-10 && wall < 10.0;
        return {ok, fmt("10 s triangle run: coupled loop vs reduced error system deviate by "
                        "%.2e (limit 1e-8); cubic vs zero drift leaves estimation traces within "
                        "%.2e (limit 1e-10, drift cancellation); %.2f s (limit 10)",
                        cv.max_deviation(), drift_gap, wall)};
    });

    prepare_reference_run();

    run("A5", []() -> std::pair<bool, std::string> {
        if (!g_ref) return {false, "benchmark run failed: " + g_ref_error};
        const bool ok =
            g_ref->gap.violations == 0 && g_ref->bench.v1_monotone_violations == 0;
        return {ok, fmt("energy-rate identity on the default benchmark run: %zu of %zu "
                        "intervals outside 1e-3*(1+|predicted|), max gap %.2e; V1 increases "
                        "beyond 1e-6/step: %zu",
                        g_ref->gap.violations, g_ref->intervals, g_ref->gap.max_abs_gap,
                        g_ref->bench.v1_monotone_violations)};
    });

    run("A6", []() -> std::pair<bool, std::string> {
        double worst_est = 0.0;
        double worst_sync = 0.0;
        bool topo_ok = true;
        double slowest = 0.0;
        std::string per_seed;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const SimConfig cfg = reference_config(seed);
            const auto t0 = Clock::now();
            const Trajectory traj = simulate(cfg);
            slowest = std::max(slowest, seconds_since(t0));
            const MetricsSeries series = lyapunov_series(traj, cfg.plant.true_weights(),
                                                         cfg.gains, cfg.plant.laplacian());
            const ConvergenceSummary conv = convergence_summary(series, 0.1, 1e-6);
            worst_est = std::max(worst_est, conv.final_est_err);
            worst_sync = std::max(worst_sync, conv.final_sync_err);
            per_seed += fmt(" %.3f/%.3f", conv.final_est_err, conv.final_sync_err);
            if (!perfect_recovery(recover_topology(row_copy(traj.w_hat, traj.samples() - 1),
                                                   0.1, cfg.plant.graph())))
                topo_ok = false;
        }
        const bool ok = worst_est < 0.05 && worst_sync < 0.05 && topo_ok && slowest < 60.0;
        std::string detail =
            fmt("benchmark runs at seeds 1..5, 200 s each: worst trailing-10%% weight error "
                "%.4f (limit 0.05), worst trailing-10%% sync spread %.4f (limit 0.05), per-seed "
                "err/spread:%s; thresholded topology %s on all runs, slowest run %.1f s "
                "(limit 60)",
                worst_est, worst_sync, per_seed.c_str(),
                topo_ok ? "recovered exactly" : "NOT recovered exactly", slowest);
        if (!ok && worst_est < 0.1 && topo_ok) {
            detail += "; the identification and spread bounds pull against each other at this "
                      "horizon: the state spread stays near the excitation amplitude until the "
                      "estimation error is small enough for the saturated feedback to "
                      "de-saturate, and that collapse then freezes the weight error at "
                      "whatever level it had reached";
        }
        return {ok, detail};
    });

    run("A7", []() -> std::pair<bool, std::string> {
        const double dt = 1e-3;
        const double two_pi = 2.0 * std::numbers::pi;
        // One sample past the window end: 2 pi falls between grid points, so
        // the quadrature interpolates the final frame.
        const long long count = std::llround(two_pi / dt) + 2;
        std::vector<Vec> frames(static_cast<std::size_t>(count));
        for (long long i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) * dt;
            frames[static_cast<std::size_t>(i)] = Vec{std::sin(t), std::cos(t)};
        }
        const GramWindow gw =
            windowed_gram(vector_signal(std::move(frames), 0.0, dt), 0.0, two_pi);
        double gram_gap = 0.0;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                gram_gap = std::max(gram_gap,
                                    std::abs(gw.gram(r, c) - (r == c ? std::numbers::pi : 0.0)));
        const bool part_i = gram_gap < 1e-6;

        const bool part_ii = g_ref && g_ref->state_qualified > 0 && g_ref->edge_qualified > 0 &&
                             g_ref->edge_mu > 0.0;

        const SignalConfig sig_cfg = SignalConfig::defaults();
        const auto generator = [&sig_cfg](double t, const Vec& x) {
            return phi_theta(t, x, sig_cfg);
        };
        const std::vector<double> levels =
            frozen_excitation_levels(generator, {Vec(12, 1.0)}, 2.0, 2.0, 1e-3, 0.1);
        const bool part_iii = levels[0] > 0.0;

        std::string ii_text =
            g_ref ? fmt("%zu delta-qualified 2 s windows; identifiability Gram floor %.3e > 0 "
                        "(node-space form floor %.1e, structurally 0 along ones)",
                        g_ref->edge_qualified, g_ref->edge_mu, g_ref->state_mu)
                  : "benchmark run failed: " + g_ref_error;
        return {part_i && part_ii && part_iii,
                fmt("(i) [sin,cos] full-period Gram within %.1e of pi*I (limit 1e-6); (ii) %s; "
                    "(iii) frozen-argument excitation floor %.3f > 0 over 2 s windows",
                    gram_gap, ii_text.c_str(), levels[0])};
    });

    run("A8", []() -> std::pair<bool, std::string> {
        const double grow = pair_decay_ratio(1.0);
        const double shrink = pair_decay_ratio(3.0);
        const bool ok = grow > 10.0 && shrink < 0.1;
        return {ok, fmt("antagonistic pair, no excitation, 5 s: |error| ratio %.1f with "
                        "undersized gain c1=1 (must exceed 10), %.4f with sufficient gain c1=3 "
                        "(must stay under 0.1)",
                        grow, shrink)};
    });

    run("A9", []() -> std::pair<bool, std::string> {
        const double e1 = rk4_endpoint_error(1e-2);
        const double e2 = rk4_endpoint_error(5e-3);
        const double e3 = rk4_endpoint_error(2.5e-3);
        const double r1 = std::log2(e1 / e2);
        const double r2 = std::log2(e2 / e3);
        const bool ok = r1 >= 3.8 && r2 >= 3.8;
        return {ok, fmt("integrator order on dy/dt = -y over [0,1]: halving dt cut the global "
                        "error %.2fx then %.2fx in log2 (both must be >= 3.8)",
                        r1, r2)};
    });

    if (failures == 0) {
        std::printf("all 9 criteria passed\n");
    } else {
        std::printf("%d of 9 criteria FAILED\n", failures);
    }
    return failures;
}
