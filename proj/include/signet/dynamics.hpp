#pragma once

// Plant-side dynamics: per-node intrinsic drift f_i, the coupled plant
// vector field, and the reduced error system used for analysis and
// cross-validation.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "signet/linalg.hpp"
#include "signet/protocol.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

/// Scalar drift x -> f(x). Named so configs can round-trip the choice.
class NodeDynamics {
public:
    static NodeDynamics zero() {
        return NodeDynamics("zero", [](double) { return 0.0; });
    }

    static NodeDynamics linear(double a) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "linear:%.17g", a);
        return NodeDynamics(buf, [a](double x) { return a * x; });
    }

    /// Saturating cubic drift x - x^3: two stable rest points, globally bounded
    /// trajectories, a convenient nonlinearity for exercising the cancellation.
    static NodeDynamics cubic_soft() {
        return NodeDynamics("cubic_soft", [](double x) { return x - x * x * x; });
    }

    static NodeDynamics custom(std::string name, std::function<double(double)> f) {
        return NodeDynamics(std::move(name), std::move(f));
    }

    double operator()(double x) const { return f_(x); }
    const std::string& name() const { return name_; }

private:
    NodeDynamics(std::string name, std::function<double(double)> f)
        : name_(std::move(name)), f_(std::move(f)) {}

    std::string name_;
    std::function<double(double)> f_;
};

/// Immutable plant description: the true signed graph plus per-node drifts.
/// Caches the complete-graph incidence, embedded weights, and Laplacian.
class PlantSpec {
public:
    /// dynamics holds either one entry (shared by all nodes) or one per node.
    PlantSpec(SignedGraph graph, std::vector<NodeDynamics> dynamics)
        : graph_(std::move(graph)),
          dynamics_(std::move(dynamics)),
          incidence_(build_complete_incidence(graph_.n_nodes())),
          true_weights_(embed_weights(graph_)),
          laplacian_(laplacian_from_weights(incidence_, true_weights_)) {
        const std::size_t n = static_cast<std::size_t>(graph_.n_nodes());
        if (dynamics_.size() != 1 && dynamics_.size() != n)
            throw std::invalid_argument("PlantSpec: need 1 or n_nodes dynamics entries");
    }

    const SignedGraph& graph() const { return graph_; }
    const IncidenceMatrix& complete_incidence() const { return incidence_; }
    const WeightVector& true_weights() const { return true_weights_; }
    const Mat& laplacian() const { return laplacian_; }
    int n_nodes() const { return graph_.n_nodes(); }
    int m_bar() const { return incidence_.n_edges(); }

    double f(std::size_t node, double x) const {
        return dynamics_.size() == 1 ? dynamics_[0](x) : dynamics_[node](x);
    }

    Vec f_all(const Vec& x) const {
        Vec out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(i, x[i]);
        return out;
    }

    const std::vector<NodeDynamics>& dynamics() const { return dynamics_; }

private:
    SignedGraph graph_;
    std::vector<NodeDynamics> dynamics_;
    IncidenceMatrix incidence_;
    WeightVector true_weights_;
    Mat laplacian_;
};

/// d/dt x_i = f_i(x_i) - [L x]_i + u_i.
inline Vec plant_rhs(const Vec& x, const Vec& u, const PlantSpec& plant) {
    const std::size_t n = static_cast<std::size_t>(plant.n_nodes());
    if (x.size() != n || u.size() != n)
        throw std::invalid_argument("plant_rhs: state size mismatch");
    Vec lx = matvec(plant.laplacian(), x);
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = plant.f(i, x[i]) - lx[i] + u[i];
    return out;
}

struct ErrorRates {
    Vec x_tilde_dot;
    Vec w_tilde_dot;
};

/// The reduced error system obtained after the control cancels the drift:
///   d/dt x_tilde = -(c1 I + L) x_tilde - E Z(t) w_tilde
///   d/dt w_tilde =  Z(t) E^T x_tilde
/// with Z(t) = diag(E^T x_hat). x_hat enters only through Z.
inline ErrorRates error_system_rhs(const Vec& x_tilde, const Vec& w_tilde, const Vec& x_hat,
                                   double c1, const Mat& laplacian,
                                   const IncidenceMatrix& e_bar) {
    const std::size_t n = x_tilde.size();
    if (x_hat.size() != n || laplacian.rows() != n)
        throw std::invalid_argument("error_system_rhs: node size mismatch");
    if (w_tilde.size() != static_cast<std::size_t>(e_bar.n_edges()))
        throw std::invalid_argument("error_system_rhs: edge size mismatch");

    const Vec z = matvec_transposed(e_bar.matrix(), x_hat);

    Vec zw(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) zw[k] = z[k] * w_tilde[k];
    Vec xdot = matvec(e_bar.matrix(), zw);
    const Vec lx = matvec(laplacian, x_tilde);
    for (std::size_t i = 0; i < n; ++i) xdot[i] = -c1 * x_tilde[i] - lx[i] - xdot[i];

    Vec ex = matvec_transposed(e_bar.matrix(), x_tilde);
    Vec wdot(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) wdot[k] = z[k] * ex[k];

    return {std::move(xdot), std::move(wdot)};
}

}  // namespace signet
