#pragma once

// Closed-loop runner: plant, auxiliary system, and weight estimator
// integrated together as one flat state [x | x_hat | w_hat]. Runs are
// deterministic: a fixed step size, sample times computed as i * dt, and
// seeded draws through pinned generators make equal configs give bitwise
// equal trajectories.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "signet/dynamics.hpp"
#include "signet/errors.hpp"
#include "signet/integrate.hpp"
#include "signet/linalg.hpp"
#include "signet/protocol.hpp"
#include "signet/rng.hpp"

namespace signet {

inline constexpr double kOverflowLimit = 1e9;

/// Unset entries fall back to the documented defaults: x0 seeded uniform on
/// [-1, 1], x_hat0 and w_hat0 zero.
struct InitSpec {
    std::optional<Vec> x0;
    std::optional<Vec> x_hat0;
    std::optional<Vec> w_hat0;
};

struct SimConfig {
    PlantSpec plant;
    GainConfig gains;
    GainMode gain_mode = GainMode::prop2;
    SignalConfig signal = SignalConfig::defaults();
    double dt = 1e-3;
    double horizon = 200.0;
    int record_stride = 1;
    std::uint64_t seed = 1;
    InitSpec init;

    void validate() const {
        const std::size_t n = static_cast<std::size_t>(plant.n_nodes());
        const std::size_t m = static_cast<std::size_t>(plant.m_bar());
        if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
        if (!(horizon >= dt)) throw std::invalid_argument("SimConfig: horizon must be >= dt");
        if (record_stride < 1) throw std::invalid_argument("SimConfig: record_stride must be >= 1");
        if (gains.c1 < 0.0) throw std::invalid_argument("SimConfig: c1 must be nonnegative");
        if (!(signal.kappa > 0.0)) throw std::invalid_argument("SimConfig: kappa must be positive");
        auto check_vec = [](const std::optional<Vec>& v, std::size_t want, const char* name) {
            if (!v) return;
            if (v->size() != want)
                throw std::invalid_argument(std::string("SimConfig: ") + name + " needs " +
                                            std::to_string(want) + " entries");
            if (!all_finite(*v))
                throw std::invalid_argument(std::string("SimConfig: ") + name +
                                            " has non-finite entries");
        };
        check_vec(init.x0, n, "init.x0");
        check_vec(init.x_hat0, n, "init.x_hat0");
        check_vec(init.w_hat0, m, "init.w_hat0");
    }
};

struct ResolvedInit {
    Vec x0, x_hat0, w_hat0;
};

inline ResolvedInit resolve_init(const SimConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.plant.n_nodes());
    const std::size_t m = static_cast<std::size_t>(cfg.plant.m_bar());
    ResolvedInit out;
    if (cfg.init.x0) {
        out.x0 = *cfg.init.x0;
    } else {
        Rng rng(cfg.seed ^ kInitStreamTag);
        out.x0.resize(n);
        for (auto& v : out.x0) v = rng.uniform(-1.0, 1.0);
    }
    out.x_hat0 = cfg.init.x_hat0.value_or(Vec(n, 0.0));
    out.w_hat0 = cfg.init.w_hat0.value_or(Vec(m, 0.0));
    return out;
}

/// The warning text for a gain below the positive-definiteness threshold of
/// the selected mode, or nullopt when the gain is sufficient.
inline std::optional<std::string> gain_warning(const SimConfig& cfg) {
    std::optional<double> lmin;
    if (cfg.gain_mode == GainMode::prop1)
        lmin = jacobi_eigenvalues(cfg.plant.laplacian()).front();
    const double need = required_gain(cfg.gain_mode, lmin, cfg.plant.n_nodes());
    if (cfg.gains.c1 > need) return std::nullopt;
    std::ostringstream os;
    os << "c1 = " << cfg.gains.c1 << " does not exceed the required gain " << need
       << (cfg.gain_mode == GainMode::prop1 ? " (-lambda_min of the true Laplacian)"
                                            : " (node count bound)")
       << "; convergence is not guaranteed";
    return os.str();
}

struct Trajectory {
    int n_nodes = 0;
    int m_bar = 0;
    Vec times;  // recorded sample instants, ascending
    Mat x;      // samples x n_nodes
    Mat x_hat;  // samples x n_nodes
    Mat w_hat;  // samples x m_bar
    Mat u;      // samples x n_nodes; empty when read back from CSV

    std::size_t samples() const { return times.size(); }
};

inline Vec row_copy(const Mat& m, std::size_t r) {
    return Vec(m.row_ptr(r), m.row_ptr(r) + m.cols());
}

/// E^T x_hat at recorded sample s: the auxiliary edge differences that drive
/// both the weight update and the excitation analysis.
inline Vec z_hat_row(const Trajectory& traj, const IncidenceMatrix& e_bar, std::size_t s) {
    return matvec_transposed(e_bar.matrix(), row_copy(traj.x_hat, s));
}

/// Integrate the closed loop over [0, horizon] and record every
/// record_stride-th step (the final step is always recorded). Throws
/// DivergenceError when |state|_inf exceeds kOverflowLimit and NumericError
/// when an integration stage stops being finite.
inline Trajectory simulate(const SimConfig& cfg) {
    cfg.validate();
    if (auto warn = gain_warning(cfg)) std::cerr << "warning: " << *warn << "\n";

    const std::size_t n = static_cast<std::size_t>(cfg.plant.n_nodes());
    const std::size_t m = static_cast<std::size_t>(cfg.plant.m_bar());
    const auto& e_bar = cfg.plant.complete_incidence();

    const long long steps = std::llround(cfg.horizon / cfg.dt);
    if (steps < 1) throw std::invalid_argument("simulate: horizon shorter than one step");

    const ResolvedInit init = resolve_init(cfg);
    Vec y(2 * n + m);
    std::copy(init.x0.begin(), init.x0.end(), y.begin());
    std::copy(init.x_hat0.begin(), init.x_hat0.end(), y.begin() + n);
    std::copy(init.w_hat0.begin(), init.w_hat0.end(), y.begin() + 2 * n);

    auto rhs = [&](double t, const Vec& state) {
        ProtocolState st;
        st.t = t;
        st.x.assign(state.begin(), state.begin() + n);
        st.x_hat.assign(state.begin() + n, state.begin() + 2 * n);
        st.w_hat.assign(state.begin() + 2 * n, state.end());

        const Vec phi = phi_theta(t, vsub(st.x, st.x_hat), cfg.signal);
        const Vec xhat_dot = auxiliary_rhs(st, phi);
        const Vec f_vals = cfg.plant.f_all(st.x);
        const Vec u = control_input(st, xhat_dot, f_vals, cfg.gains, e_bar);
        const Vec x_dot = plant_rhs(st.x, u, cfg.plant);
        const Vec w_dot = weight_update_rhs(st, e_bar);

        Vec dy(2 * n + m);
        std::copy(x_dot.begin(), x_dot.end(), dy.begin());
        std::copy(xhat_dot.begin(), xhat_dot.end(), dy.begin() + n);
        std::copy(w_dot.begin(), w_dot.end(), dy.begin() + 2 * n);
        return dy;
    };

    const long long stride = cfg.record_stride;
    std::size_t n_samples = static_cast<std::size_t>(steps / stride) + 1;
    if (steps % stride != 0) ++n_samples;

    Trajectory traj;
    traj.n_nodes = static_cast<int>(n);
    traj.m_bar = static_cast<int>(m);
    traj.times.reserve(n_samples);
    traj.x = Mat(n_samples, n);
    traj.x_hat = Mat(n_samples, n);
    traj.w_hat = Mat(n_samples, m);
    traj.u = Mat(n_samples, n);

    auto record = [&](long long step, const Vec& state) {
        const double t = static_cast<double>(step) * cfg.dt;
        const std::size_t s = traj.times.size();
        traj.times.push_back(t);
        std::copy(state.begin(), state.begin() + n, traj.x.row_ptr(s));
        std::copy(state.begin() + n, state.begin() + 2 * n, traj.x_hat.row_ptr(s));
        std::copy(state.begin() + 2 * n, state.end(), traj.w_hat.row_ptr(s));

        ProtocolState st;
        st.t = t;
        st.x.assign(state.begin(), state.begin() + n);
        st.x_hat.assign(state.begin() + n, state.begin() + 2 * n);
        st.w_hat.assign(state.begin() + 2 * n, state.end());
        const Vec phi = phi_theta(t, vsub(st.x, st.x_hat), cfg.signal);
        const Vec xhat_dot = auxiliary_rhs(st, phi);
        const Vec u = control_input(st, xhat_dot, cfg.plant.f_all(st.x), cfg.gains, e_bar);
        std::copy(u.begin(), u.end(), traj.u.row_ptr(s));
    };

    record(0, y);
    for (long long step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * cfg.dt;
        y = rk4_step(rhs, y, t, cfg.dt);
        if (norm_inf(y) > kOverflowLimit)
            throw DivergenceError("simulate: state magnitude exceeded " +
                                      std::to_string(kOverflowLimit),
                                  static_cast<double>(step + 1) * cfg.dt);
        const long long done = step + 1;
        if (done % stride == 0 || done == steps) record(done, y);
    }
    return traj;
}

}  // namespace signet
