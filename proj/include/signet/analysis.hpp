#pragma once

// Post-run analysis: Lyapunov bookkeeping along a trajectory, topology
// recovery from the final weight estimate, and convergence summaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "signet/linalg.hpp"
#include "signet/protocol.hpp"
#include "signet/signed_graph.hpp"
#include "signet/sim.hpp"

namespace signet {

struct MetricsSeries {
    Vec times;              // recorded sample instants, size S
    Vec v1;                 // 0.5 |x_tilde|^2 + 0.5 |w_tilde|^2, size S
    Vec v1_dot_measured;    // forward differences of v1, size S-1
    Vec v1_dot_predicted;   // interval average of -x_tilde'(c1 I + L)x_tilde, size S-1
    Vec est_err_norm;       // |w_true - w_hat|_2, size S
    Vec est_err_max;        // |w_true - w_hat|_inf, size S
    Vec sync_spread;        // max_ij |x_i - x_j|, size S
    Vec aux_norm;           // |x_hat|_2, size S
};

/// Evaluate the Lyapunov identity along a recorded run. The measured
/// derivative is the forward difference over each recording interval, which
/// estimates the derivative at the interval midpoint; the predicted series
/// therefore averages the endpoint evaluations of
/// g = -x_tilde' (c1 I + L) x_tilde, keeping the comparison second order in
/// the step instead of first.
inline MetricsSeries lyapunov_series(const Trajectory& traj, const WeightVector& w_true,
                                     const GainConfig& gains, const Mat& laplacian) {
    const std::size_t s_count = traj.samples();
    const std::size_t n = static_cast<std::size_t>(traj.n_nodes);
    const std::size_t m = static_cast<std::size_t>(traj.m_bar);
    if (w_true.size() != m) throw std::invalid_argument("lyapunov_series: weight size mismatch");
    if (laplacian.rows() != n)
        throw std::invalid_argument("lyapunov_series: laplacian size mismatch");
    if (s_count < 2) throw std::invalid_argument("lyapunov_series: need at least 2 samples");

    MetricsSeries out;
    out.times = traj.times;
    out.v1.resize(s_count);
    out.est_err_norm.resize(s_count);
    out.est_err_max.resize(s_count);
    out.sync_spread.resize(s_count);
    out.aux_norm.resize(s_count);

    Vec g(s_count);
    Vec x_tilde(n);
    for (std::size_t s = 0; s < s_count; ++s) {
        for (std::size_t i = 0; i < n; ++i) x_tilde[i] = traj.x(s, i) - traj.x_hat(s, i);

        double w_sq = 0.0, w_max = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double d = w_true[k] - traj.w_hat(s, k);
            w_sq += d * d;
            w_max = std::max(w_max, std::abs(d));
        }
        out.v1[s] = 0.5 * dot(x_tilde, x_tilde) + 0.5 * w_sq;
        out.est_err_norm[s] = std::sqrt(w_sq);
        out.est_err_max[s] = w_max;

        double lo = traj.x(s, 0), hi = traj.x(s, 0);
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, traj.x(s, i));
            hi = std::max(hi, traj.x(s, i));
        }
        out.sync_spread[s] = hi - lo;

        out.aux_norm[s] = norm2(row_copy(traj.x_hat, s));

        const Vec lx = matvec(laplacian, x_tilde);
        g[s] = -gains.c1 * dot(x_tilde, x_tilde) - dot(x_tilde, lx);
    }

    out.v1_dot_measured.resize(s_count - 1);
    out.v1_dot_predicted.resize(s_count - 1);
    for (std::size_t s = 0; s + 1 < s_count; ++s) {
        const double h = traj.times[s + 1] - traj.times[s];
        out.v1_dot_measured[s] = (out.v1[s + 1] - out.v1[s]) / h;
        out.v1_dot_predicted[s] = 0.5 * (g[s] + g[s + 1]);
    }
    return out;
}

struct LyapunovGap {
    double max_abs_gap = 0.0;  // max |measured - predicted|
    std::size_t violations = 0;  // intervals where the gap exceeds tol*(1+|predicted|)
};

inline LyapunovGap lyapunov_identity_gap(const MetricsSeries& series, double tol) {
    LyapunovGap out;
    for (std::size_t s = 0; s < series.v1_dot_measured.size(); ++s) {
        const double gap = std::abs(series.v1_dot_measured[s] - series.v1_dot_predicted[s]);
        out.max_abs_gap = std::max(out.max_abs_gap, gap);
        if (gap >= tol * (1.0 + std::abs(series.v1_dot_predicted[s]))) ++out.violations;
    }
    return out;
}

struct RecoveredEdge {
    int i = 0;
    int j = 0;
    int sign = 0;  // sign of the estimate
    double weight_estimate = 0.0;
};

struct RecoveredTopology {
    double threshold = 0.0;
    std::vector<RecoveredEdge> edges;
    double precision = 1.0;      // recovered edges that exist in the truth
    double recall = 1.0;         // truth edges that were recovered
    double sign_accuracy = 1.0;  // correct signs among true positives
};

/// Threshold the final weight estimate into a recovered edge set and score it
/// against the true graph. Empty denominators score 1.0: recovering nothing
/// from nothing is perfect.
inline RecoveredTopology recover_topology(const WeightVector& w_hat_final, double threshold,
                                          const SignedGraph& truth) {
    const int n = truth.n_nodes();
    if (w_hat_final.size() != static_cast<std::size_t>(complete_edge_count(n)))
        throw std::invalid_argument("recover_topology: weight vector does not match node count");
    if (!(threshold > 0.0)) throw std::invalid_argument("recover_topology: threshold must be positive");

    const WeightVector w_true = embed_weights(truth);
    RecoveredTopology out;
    out.threshold = threshold;

    std::size_t true_positives = 0, correct_signs = 0;
    for (std::size_t k = 0; k < w_hat_final.size(); ++k) {
        if (std::abs(w_hat_final[k]) < threshold) continue;
        const auto [i, j] = edge_pair(static_cast<int>(k) + 1, n);
        RecoveredEdge e;
        e.i = i;
        e.j = j;
        e.sign = w_hat_final[k] > 0.0 ? 1 : -1;
        e.weight_estimate = w_hat_final[k];
        out.edges.push_back(e);
        if (w_true[k] != 0.0) {
            ++true_positives;
            if ((w_true[k] > 0.0) == (w_hat_final[k] > 0.0)) ++correct_signs;
        }
    }

    const std::size_t truth_count = static_cast<std::size_t>(truth.edge_count());
    out.precision = out.edges.empty()
                        ? 1.0
                        : static_cast<double>(true_positives) / static_cast<double>(out.edges.size());
    out.recall = truth_count == 0
                     ? 1.0
                     : static_cast<double>(true_positives) / static_cast<double>(truth_count);
    out.sign_accuracy = true_positives == 0 ? 1.0
                                            : static_cast<double>(correct_signs) /
                                                  static_cast<double>(true_positives);
    return out;
}

struct ConvergenceSummary {
    double final_est_err = 0.0;   // max |w_true - w_hat|_inf over the trailing window
    double final_sync_err = 0.0;  // max sync spread over the trailing window
    std::size_t v1_monotone_violations = 0;  // recorded steps where v1 increased beyond step_tol
};

/// Tail behavior over the trailing tail_fraction of recorded samples plus a
/// whole-run monotonicity count for v1.
inline ConvergenceSummary convergence_summary(const MetricsSeries& series, double tail_fraction,
                                              double step_tol = 1e-6) {
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw std::invalid_argument("convergence_summary: tail_fraction must be in (0, 1]");
    const std::size_t s_count = series.v1.size();
    const std::size_t tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(static_cast<double>(s_count) * tail_fraction)));
    const std::size_t start = s_count - tail;

    ConvergenceSummary out;
    for (std::size_t s = start; s < s_count; ++s) {
        out.final_est_err = std::max(out.final_est_err, series.est_err_max[s]);
        out.final_sync_err = std::max(out.final_sync_err, series.sync_spread[s]);
    }
    for (std::size_t s = 0; s + 1 < s_count; ++s)
        if (series.v1[s + 1] > series.v1[s] + step_tol) ++out.v1_monotone_violations;
    return out;
}

}  // namespace signet
