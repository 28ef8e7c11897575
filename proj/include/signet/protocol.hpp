#pragma once

// The adaptive protocol pieces: excitation signal, bounded auxiliary
// generator, feedback-linearizing control, and the edge-weight update law.
// All formulas act on the complete-graph embedding, so the estimated weight
// vector always has n(n-1)/2 entries regardless of the true topology.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "signet/linalg.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

enum class Waveform { sine, cosine };

struct PeTerm {
    double amplitude = 0.0;
    double angular_frequency = 0.0;
    Waveform kind = Waveform::sine;
};

struct SignalConfig {
    double kappa = 1000.0;  // tanh steepness; large values approximate sign()
    std::vector<PeTerm> pe_terms;

    /// Sum of coefficient magnitudes, an upper bound on |p_e(t)|.
    double bound() const {
        double b = 0.0;
        for (const auto& t : pe_terms) b += std::abs(t.amplitude);
        return b;
    }

    /// The seven-term multisine used by the reference experiment.
    static std::vector<PeTerm> reference_terms() {
        const double pi = 3.14159265358979323846;
        return {
            {0.5, 15.0 * pi, Waveform::sine},  {0.3, 6.0 * pi, Waveform::cosine},
            {-0.5, 8.0 * pi, Waveform::sine},  {0.7, 12.0 * pi, Waveform::cosine},
            {2.0, 1.0 * pi, Waveform::sine},   {-0.3, 2.0 * pi, Waveform::cosine},
            {-0.8, 18.0 * pi, Waveform::sine},
        };
    }

    static SignalConfig defaults() { return {1000.0, reference_terms()}; }
};

inline double pe_signal(double t, const SignalConfig& cfg) {
    double s = 0.0;
    for (const auto& term : cfg.pe_terms) {
        const double phase = term.angular_frequency * t;
        s += term.amplitude * (term.kind == Waveform::sine ? std::sin(phase) : std::cos(phase));
    }
    return s;
}

/// Generator phi(t, x_tilde): component i is tanh(kappa * x_tilde_i) * p_e(t).
/// Bounded by cfg.bound() in every component for all arguments.
inline Vec phi_theta(double t, const Vec& x_tilde, const SignalConfig& cfg) {
    const double pe = pe_signal(t, cfg);
    Vec out(x_tilde.size());
    for (std::size_t i = 0; i < x_tilde.size(); ++i)
        out[i] = std::tanh(cfg.kappa * x_tilde[i]) * pe;
    return out;
}

enum class GainMode {
    prop1,  // spectrum known: c1 > -lambda_min(L)
    prop2,  // topology-free: c1 > n for normalized weights
};

struct GainConfig {
    double c1 = 13.0;
};

/// Smallest coupling gain that makes c1 I + L positive definite under the
/// chosen mode. prop1 needs the measured lambda_min; prop2 only n.
inline double required_gain(GainMode mode, std::optional<double> lambda_min, int n_nodes) {
    if (n_nodes < 1) throw std::invalid_argument("required_gain: need n_nodes >= 1");
    switch (mode) {
        case GainMode::prop1:
            if (!lambda_min)
                throw std::invalid_argument("required_gain: prop1 needs lambda_min");
            return -*lambda_min;
        case GainMode::prop2:
            return static_cast<double>(n_nodes);
    }
    throw std::invalid_argument("required_gain: unknown mode");
}

struct ProtocolState {
    Vec x;      // plant states, size n
    Vec x_hat;  // auxiliary states, size n
    Vec w_hat;  // estimated complete-graph weights, size n(n-1)/2
    double t = 0.0;
};

/// E^T v: pairwise differences v_i - v_j over all slots, complete-graph order.
inline Vec edge_differences(const IncidenceMatrix& e, const Vec& v) {
    return matvec_transposed(e.matrix(), v);
}

/// E ve: scatter edge values back onto nodes.
inline Vec node_from_edges(const IncidenceMatrix& e, const Vec& ve) {
    return matvec(e.matrix(), ve);
}

/// d/dt x_hat = -x_hat + phi.
inline Vec auxiliary_rhs(const ProtocolState& st, const Vec& phi) {
    if (phi.size() != st.x_hat.size())
        throw std::invalid_argument("auxiliary_rhs: phi size mismatch");
    return vsub(phi, st.x_hat);
}

/// u = -f(x) - c1 (x - x_hat) + d/dt x_hat + L_hat x_hat, with
/// L_hat x_hat = E diag(w_hat) E^T x_hat evaluated factor by factor.
inline Vec control_input(const ProtocolState& st, const Vec& xhat_dot, const Vec& f_vals,
                         const GainConfig& gains, const IncidenceMatrix& e_bar) {
    const std::size_t n = st.x.size();
    if (st.x_hat.size() != n || xhat_dot.size() != n || f_vals.size() != n)
        throw std::invalid_argument("control_input: node vector size mismatch");
    if (st.w_hat.size() != static_cast<std::size_t>(e_bar.n_edges()))
        throw std::invalid_argument("control_input: weight vector size mismatch");
    Vec edge = edge_differences(e_bar, st.x_hat);
    for (std::size_t k = 0; k < edge.size(); ++k) edge[k] *= st.w_hat[k];
    Vec u = node_from_edges(e_bar, edge);
    for (std::size_t i = 0; i < n; ++i)
        u[i] += -f_vals[i] - gains.c1 * (st.x[i] - st.x_hat[i]) + xhat_dot[i];
    return u;
}

/// d/dt w_hat = -diag(E^T x_hat) E^T (x - x_hat).
inline Vec weight_update_rhs(const ProtocolState& st, const IncidenceMatrix& e_bar) {
    if (st.w_hat.size() != static_cast<std::size_t>(e_bar.n_edges()))
        throw std::invalid_argument("weight_update_rhs: weight vector size mismatch");
    const Vec z = edge_differences(e_bar, st.x_hat);
    const Vec diff = edge_differences(e_bar, vsub(st.x, st.x_hat));
    Vec out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = -z[k] * diff[k];
    return out;
}

}  // namespace signet
