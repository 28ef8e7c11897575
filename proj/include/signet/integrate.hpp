#pragma once

// Fixed-step classical Runge-Kutta. A fixed step keeps runs bitwise
// reproducible; adaptive control would make the trajectory depend on
// tolerance bookkeeping.

#include <cstddef>
#include <string>

#include "signet/errors.hpp"
#include "signet/linalg.hpp"

namespace signet {

/// One RK4 step of d/dt y = rhs(t, y). Throws NumericError when a stage
/// produces a non-finite value.
template <class Rhs>
Vec rk4_step(Rhs&& rhs, const Vec& state, double t, double dt) {
    const Vec k1 = rhs(t, state);

    Vec y = state;
    vaxpy(y, 0.5 * dt, k1);
    const Vec k2 = rhs(t + 0.5 * dt, y);

    y = state;
    vaxpy(y, 0.5 * dt, k2);
    const Vec k3 = rhs(t + 0.5 * dt, y);

    y = state;
    vaxpy(y, dt, k3);
    const Vec k4 = rhs(t + dt, y);

    Vec out = state;
    const double h6 = dt / 6.0;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(out))
        throw NumericError("rk4_step: non-finite state at t=" + std::to_string(t));
    return out;
}

}  // namespace signet
