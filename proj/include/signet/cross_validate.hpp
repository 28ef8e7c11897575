#pragma once

// Consistency check between the full closed loop and the reduced error
// system. The two integrations share dt, phi, and initial data; because the
// change of variables (x_tilde = x - x_hat, w_tilde = w_true - w_hat) is
// affine and the drift cancellation is exact, a fixed-step integrator keeps
// them together up to accumulated roundoff. A gap much above roundoff means
// the protocol algebra and the error dynamics have drifted apart.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "signet/dynamics.hpp"
#include "signet/integrate.hpp"
#include "signet/sim.hpp"

namespace signet {

struct CrossValidation {
    double max_x_tilde_deviation = 0.0;
    double max_w_tilde_deviation = 0.0;

    double max_deviation() const {
        return std::max(max_x_tilde_deviation, max_w_tilde_deviation);
    }
};

/// Run the closed loop and the reduced error system side by side, comparing
/// (x_tilde, w_tilde) at every recorded sample.
inline CrossValidation cross_validate(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.plant.n_nodes());
    const std::size_t m = static_cast<std::size_t>(cfg.plant.m_bar());
    const auto& e_bar = cfg.plant.complete_incidence();
    const Mat& lap = cfg.plant.laplacian();
    const WeightVector& w_true = cfg.plant.true_weights();

    const Trajectory full = simulate(cfg);

    // Reduced state [x_tilde | w_tilde | x_hat]; x_hat is carried along so
    // Z(t) = diag(E^T x_hat) evolves exactly as in the full loop.
    const ResolvedInit init = resolve_init(cfg);
    Vec y(n + m + n);
    for (std::size_t i = 0; i < n; ++i) y[i] = init.x0[i] - init.x_hat0[i];
    for (std::size_t k = 0; k < m; ++k) y[n + k] = w_true[k] - init.w_hat0[k];
    for (std::size_t i = 0; i < n; ++i) y[n + m + i] = init.x_hat0[i];

    auto rhs = [&](double t, const Vec& state) {
        const Vec x_tilde(state.begin(), state.begin() + n);
        const Vec w_tilde(state.begin() + n, state.begin() + n + m);
        const Vec x_hat(state.begin() + n + m, state.end());

        const ErrorRates rates =
            error_system_rhs(x_tilde, w_tilde, x_hat, cfg.gains.c1, lap, e_bar);
        const Vec phi = phi_theta(t, x_tilde, cfg.signal);

        Vec dy(n + m + n);
        std::copy(rates.x_tilde_dot.begin(), rates.x_tilde_dot.end(), dy.begin());
        std::copy(rates.w_tilde_dot.begin(), rates.w_tilde_dot.end(), dy.begin() + n);
        for (std::size_t i = 0; i < n; ++i) dy[n + m + i] = phi[i] - x_hat[i];
        return dy;
    };

    const long long steps = std::llround(cfg.horizon / cfg.dt);
    const long long stride = cfg.record_stride;

    CrossValidation out;
    std::size_t sample = 0;
    auto compare = [&](const Vec& state) {
        for (std::size_t i = 0; i < n; ++i) {
            const double ref = full.x(sample, i) - full.x_hat(sample, i);
            out.max_x_tilde_deviation =
                std::max(out.max_x_tilde_deviation, std::abs(state[i] - ref));
        }
        for (std::size_t k = 0; k < m; ++k) {
            const double ref = w_true[k] - full.w_hat(sample, k);
            out.max_w_tilde_deviation =
                std::max(out.max_w_tilde_deviation, std::abs(state[n + k] - ref));
        }
        ++sample;
    };

    compare(y);
    for (long long step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * cfg.dt;
        y = rk4_step(rhs, y, t, cfg.dt);
        const long long done = step + 1;
        if (done % stride == 0 || done == steps) compare(y);
    }
    return out;
}

}  // namespace signet
