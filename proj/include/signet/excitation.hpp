#pragma once

// Excitation analysis: windowed Gram matrices of a sampled matrix signal,
// persistent-excitation levels, and the state-dependent variant that only
// scores windows where the coupled state stayed away from the origin.
//
// A signal here is a lazily evaluated sequence of frames F(s) on a uniform
// time grid; every quadratic quantity is the trapezoid approximation of
// integral F F^T over a window. Frames are built on demand so long runs
// never materialize the full stack of matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "signet/linalg.hpp"
#include "signet/sim.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

struct SignalSamples {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t count = 0;       // samples on the grid t0 + i*dt
    std::size_t frame_rows = 0;  // Gram dimension
    std::function<Mat(std::size_t)> frame;
    // G += weight * F(i) F(i)^T. Factories default this to the dense frame
    // product; structured signals install a sparse update because windowed
    // sweeps evaluate it millions of times.
    std::function<void(Mat&, std::size_t, double)> add_gram;
};

namespace detail {

inline void install_generic_add_gram(SignalSamples& s) {
    auto frame = s.frame;
    s.add_gram = [frame](Mat& g, std::size_t i, double weight) {
        add_scaled_gram(g, frame(i), weight);
    };
}

}  // namespace detail

inline SignalSamples scalar_signal(std::vector<double> values, double t0, double dt) {
    if (values.size() < 2) throw std::invalid_argument("scalar_signal: need at least 2 samples");
    if (!(dt > 0.0)) throw std::invalid_argument("scalar_signal: dt must be positive");
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    SignalSamples s;
    s.t0 = t0;
    s.dt = dt;
    s.count = data->size();
    s.frame_rows = 1;
    s.frame = [data](std::size_t i) {
        Mat f(1, 1);
        f(0, 0) = (*data)[i];
        return f;
    };
    detail::install_generic_add_gram(s);
    return s;
}

inline SignalSamples vector_signal(std::vector<Vec> values, double t0, double dt) {
    if (values.size() < 2) throw std::invalid_argument("vector_signal: need at least 2 samples");
    if (!(dt > 0.0)) throw std::invalid_argument("vector_signal: dt must be positive");
    const std::size_t n = values.front().size();
    if (n == 0) throw std::invalid_argument("vector_signal: empty sample vector");
    for (const auto& v : values)
        if (v.size() != n) throw std::invalid_argument("vector_signal: ragged samples");
    auto data = std::make_shared<std::vector<Vec>>(std::move(values));
    SignalSamples s;
    s.t0 = t0;
    s.dt = dt;
    s.count = data->size();
    s.frame_rows = n;
    s.frame = [data, n](std::size_t i) {
        Mat f(n, 1);
        for (std::size_t r = 0; r < n; ++r) f(r, 0) = (*data)[i][r];
        return f;
    };
    detail::install_generic_add_gram(s);
    return s;
}

/// Which Gram of the identification regressor to form from B(t) = E Z(t),
/// Z(t) = diag(E^T x_hat):
///  * state: integral B B^T, an n x n form on node space. Its kernel always
///    contains the all-ones direction (E^T ones = 0), so its smallest
///    eigenvalue is structurally zero; use it to study the complement.
///  * edge: integral B^T B = integral Z E^T E Z, an m x m form on weight
///    space. This is the form whose conditioning certifies weight-error
///    observability.
enum class GramForm { state, edge };

namespace detail {

struct EdgePairList {
    std::vector<std::pair<std::size_t, std::size_t>> rows;  // 0-based (i-1, j-1) per slot
};

inline EdgePairList edge_pairs(int n) {
    EdgePairList list;
    list.rows.reserve(static_cast<std::size_t>(complete_edge_count(n)));
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j <= n; ++j)
            list.rows.emplace_back(i - 1, j - 1);
    return list;
}

/// Uniform grid spacing of recorded times. The final sample is allowed to
/// fall off the grid (a run whose step count is not a stride multiple records
/// the endpoint anyway); usable_count excludes it in that case.
inline std::pair<double, std::size_t> uniform_spacing(const Vec& times) {
    if (times.size() < 2)
        throw std::invalid_argument("excitation: need at least 2 recorded samples");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw std::invalid_argument("excitation: non-increasing sample times");
    const double tol = 1e-9 * std::max(1.0, std::abs(dt));
    std::size_t usable = times.size();
    for (std::size_t i = 2; i < times.size(); ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > tol) {
            if (i + 1 == times.size()) {
                usable = times.size() - 1;
                break;
            }
            throw std::invalid_argument("excitation: non-uniform sample spacing");
        }
    }
    if (usable < 2) throw std::invalid_argument("excitation: too few uniform samples");
    return {dt, usable};
}

}  // namespace detail

namespace detail {

/// Nonzeros of E^T E for the complete graph: 2 on the diagonal, +1 for slot
/// pairs meeting head-to-head or tail-to-tail, -1 for head-to-tail.
struct SlotOverlap {
    std::size_t k, l;
    double coeff;
};

inline std::vector<SlotOverlap> slot_overlaps(const EdgePairList& pairs) {
    std::vector<SlotOverlap> out;
    const std::size_t m = pairs.rows.size();
    for (std::size_t k = 0; k < m; ++k) {
        out.push_back({k, k, 2.0});
        const auto [i1, j1] = pairs.rows[k];
        for (std::size_t l = k + 1; l < m; ++l) {
            const auto [i2, j2] = pairs.rows[l];
            double c = 0.0;
            if (i1 == i2 || j1 == j2) c = 1.0;
            else if (i1 == j2 || j1 == i2) c = -1.0;
            if (c != 0.0) out.push_back({k, l, c});
        }
    }
    return out;
}

}  // namespace detail

/// Frames of the identification regressor B(t) = E Z(t) along a recorded
/// trajectory, in the requested Gram form. The trajectory's auxiliary states
/// are copied, so the returned object outlives it. Gram accumulation runs on
/// the slot structure (z_k enters 4 Laplacian entries in state form, the
/// E^T E overlap pattern in edge form) instead of dense frame products.
inline SignalSamples edge_excitation(const Trajectory& traj, const IncidenceMatrix& e_bar,
                                     GramForm form) {
    if (traj.n_nodes != e_bar.n_nodes())
        throw std::invalid_argument("edge_excitation: incidence does not match trajectory");
    const auto [dt, usable] = detail::uniform_spacing(traj.times);
    const std::size_t n = static_cast<std::size_t>(traj.n_nodes);
    const std::size_t m = static_cast<std::size_t>(traj.m_bar);

    auto x_hat = std::make_shared<Mat>(traj.x_hat);
    auto pairs = std::make_shared<detail::EdgePairList>(detail::edge_pairs(traj.n_nodes));

    SignalSamples s;
    s.t0 = traj.times.front();
    s.dt = dt;
    s.count = usable;
    s.frame_rows = (form == GramForm::state) ? n : m;
    s.frame = [x_hat, pairs, n, m, form](std::size_t idx) {
        const double* xh = x_hat->row_ptr(idx);
        Mat f = (form == GramForm::state) ? Mat(n, m) : Mat(m, n);
        for (std::size_t k = 0; k < m; ++k) {
            const auto [r1, r2] = pairs->rows[k];
            const double z = xh[r1] - xh[r2];
            if (form == GramForm::state) {
                f(r1, k) = z;
                f(r2, k) = -z;
            } else {
                f(k, r1) = z;
                f(k, r2) = -z;
            }
        }
        return f;
    };

    if (form == GramForm::state) {
        // B B^T = E diag(z^2) E^T: each slot feeds its Laplacian stencil.
        s.add_gram = [x_hat, pairs](Mat& g, std::size_t idx, double weight) {
            const double* xh = x_hat->row_ptr(idx);
            for (std::size_t k = 0; k < pairs->rows.size(); ++k) {
                const auto [r1, r2] = pairs->rows[k];
                const double z = xh[r1] - xh[r2];
                const double v = weight * z * z;
                g(r1, r1) += v;
                g(r2, r2) += v;
                g(r1, r2) -= v;
                g(r2, r1) -= v;
            }
        };
    } else {
        // B^T B = Z (E^T E) Z: only overlapping slot pairs contribute.
        auto overlaps = std::make_shared<std::vector<detail::SlotOverlap>>(
            detail::slot_overlaps(*pairs));
        auto z_buf = std::make_shared<Vec>(m);
        s.add_gram = [x_hat, pairs, overlaps, z_buf](Mat& g, std::size_t idx, double weight) {
            const double* xh = x_hat->row_ptr(idx);
            Vec& z = *z_buf;
            for (std::size_t k = 0; k < pairs->rows.size(); ++k) {
                const auto [r1, r2] = pairs->rows[k];
                z[k] = xh[r1] - xh[r2];
            }
            for (const auto& o : *overlaps) {
                const double v = weight * o.coeff * z[o.k] * z[o.l];
                g(o.k, o.l) += v;
                if (o.l != o.k) g(o.l, o.k) += v;
            }
        };
    }
    return s;
}

/// |x(s) - x_hat(s)| at every recorded sample.
inline std::vector<double> state_error_norms(const Trajectory& traj) {
    std::vector<double> out(traj.samples());
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        double acc = 0.0;
        for (int i = 0; i < traj.n_nodes; ++i) {
            const double d = traj.x(s, i) - traj.x_hat(s, i);
            acc += d * d;
        }
        out[s] = std::sqrt(acc);
    }
    return out;
}

struct GramWindow {
    double t_start = 0.0;
    double window = 0.0;
    Mat gram;
    double min_eig = 0.0;
};

namespace detail {

/// Window length in sample units, split into full trapezoid cells plus an
/// optional fractional final cell. Lengths within a relative tolerance of a
/// whole number of cells snap to the grid.
struct WindowCells {
    long long full = 0;   // complete dt cells
    double frac = 0.0;    // remaining fraction of one cell, in [0, 1)
};

inline WindowCells window_cells(double window, double dt) {
    const double rel = window / dt;
    const long long rounded = std::llround(rel);
    if (std::abs(rel - static_cast<double>(rounded)) <= 1e-9 * std::max(1.0, std::abs(rel)))
        return {rounded, 0.0};
    const long long full = static_cast<long long>(std::floor(rel));
    return {full, rel - static_cast<double>(full)};
}

/// Samples a window occupies past its start index: the interpolated final
/// frame of a fractional cell needs the sample bracketing the endpoint.
inline long long window_span(double window, double dt) {
    const WindowCells cells = window_cells(window, dt);
    return cells.full + (cells.frac > 0.0 ? 1 : 0);
}

}  // namespace detail

/// Trapezoid approximation of integral over [t_start, t_start + window] of
/// F F^T dt. The start snaps to the nearest sample; an endpoint that falls
/// between samples is integrated exactly via a final partial cell whose
/// endpoint frame is linearly interpolated between the bracketing samples.
inline GramWindow windowed_gram(const SignalSamples& sig, double t_start, double window) {
    if (!(window > 0.0)) throw std::invalid_argument("windowed_gram: window must be positive");
    const long long i0 = std::llround((t_start - sig.t0) / sig.dt);
    const auto [nseg, frac] = detail::window_cells(window, sig.dt);
    if (nseg < 1) throw std::invalid_argument("windowed_gram: window shorter than one sample");
    const long long last = i0 + nseg + (frac > 0.0 ? 1 : 0);
    if (i0 < 0 || static_cast<std::size_t>(last) >= sig.count)
        throw std::out_of_range("windowed_gram: window [" + std::to_string(t_start) + ", " +
                                std::to_string(t_start + window) + "] outside sampled range");

    GramWindow out;
    out.t_start = t_start;
    out.window = window;
    out.gram = Mat(sig.frame_rows, sig.frame_rows);
    for (long long i = i0; i <= i0 + nseg; ++i) {
        double weight = (i == i0 || i == i0 + nseg) ? 0.5 * sig.dt : sig.dt;
        if (frac > 0.0 && i == i0 + nseg) weight += 0.5 * frac * sig.dt;
        sig.add_gram(out.gram, static_cast<std::size_t>(i), weight);
    }
    if (frac > 0.0) {
        // Frame at the exact endpoint; one dense product per window is cheap.
        Mat f = sig.frame(static_cast<std::size_t>(i0 + nseg));
        const Mat f1 = sig.frame(static_cast<std::size_t>(i0 + nseg + 1));
        for (std::size_t r = 0; r < f.rows(); ++r) {
            double* fr = f.row_ptr(r);
            const double* f1r = f1.row_ptr(r);
            for (std::size_t c = 0; c < f.cols(); ++c)
                fr[c] = (1.0 - frac) * fr[c] + frac * f1r[c];
        }
        add_scaled_gram(out.gram, f, 0.5 * frac * sig.dt);
    }
    out.min_eig = jacobi_eigenvalues(out.gram).front();
    return out;
}

/// Smallest windowed-Gram eigenvalue over a sweep of window starts spaced
/// stride samples apart. This is the mu in the excitation inequality
/// integral over [t, t+T] of F F^T >= mu I, estimated over the sampled horizon.
inline double pe_level(const SignalSamples& sig, double window, std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("pe_level: stride must be >= 1");
    const long long span = detail::window_span(window, sig.dt);
    if (span < 1 || static_cast<std::size_t>(span) >= sig.count)
        throw std::out_of_range("pe_level: window does not fit the sampled horizon");
    double mu = std::numeric_limits<double>::infinity();
    for (std::size_t i0 = 0; i0 + static_cast<std::size_t>(span) < sig.count; i0 += stride) {
        const double t_start = sig.t0 + static_cast<double>(i0) * sig.dt;
        mu = std::min(mu, windowed_gram(sig, t_start, window).min_eig);
    }
    return mu;
}

struct WindowSummary {
    double t_start = 0.0;
    double min_eig = 0.0;
};

struct DeltaPeReport {
    double delta = 0.0;
    double window = 0.0;
    std::size_t stride = 0;
    double mu_estimate = 0.0;            // min over qualified windows; 0 when none qualify
    std::size_t qualified_count = 0;
    std::vector<WindowSummary> windows;  // the qualified windows, in sweep order
};

/// Excitation check that discards windows where the qualifying norm dipped
/// below delta. qualifier[i] is the norm at sample i (same grid as sig);
/// a window qualifies when the norm stays >= delta across it.
inline DeltaPeReport delta_pe_check(const SignalSamples& sig, const std::vector<double>& qualifier,
                                    double delta, double window, std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("delta_pe_check: stride must be >= 1");
    if (qualifier.size() < sig.count)
        throw std::invalid_argument("delta_pe_check: qualifier series shorter than signal");
    if (!(delta > 0.0)) throw std::invalid_argument("delta_pe_check: delta must be positive");
    // For a fractional window the sample bracketing the endpoint participates
    // in both the quadrature and the qualification test.
    const long long span = detail::window_span(window, sig.dt);
    if (span < 1 || static_cast<std::size_t>(span) >= sig.count)
        throw std::out_of_range("delta_pe_check: window does not fit the sampled horizon");

    DeltaPeReport rep;
    rep.delta = delta;
    rep.window = window;
    rep.stride = stride;
    double mu = std::numeric_limits<double>::infinity();
    for (std::size_t i0 = 0; i0 + static_cast<std::size_t>(span) < sig.count; i0 += stride) {
        bool qualifies = true;
        for (std::size_t i = i0; i <= i0 + static_cast<std::size_t>(span); ++i) {
            if (qualifier[i] < delta) {
                qualifies = false;
                break;
            }
        }
        if (!qualifies) continue;
        const double t_start = sig.t0 + static_cast<double>(i0) * sig.dt;
        const GramWindow gw = windowed_gram(sig, t_start, window);
        rep.windows.push_back({gw.t_start, gw.min_eig});
        mu = std::min(mu, gw.min_eig);
        ++rep.qualified_count;
    }
    rep.mu_estimate = (rep.qualified_count == 0) ? 0.0 : mu;
    return rep;
}

/// For each frozen argument x, the smallest value over window starts of the
/// trapezoid integral over [t, t+T] of |generator(tau, x)| dtau, t swept from 0
/// to sweep_end in steps of sweep_stride. A positive floor for every nonzero
/// x is the signature of uniform excitation in the generator's time argument.
inline std::vector<double> frozen_excitation_levels(
    const std::function<Vec(double, const Vec&)>& generator, const std::vector<Vec>& points,
    double window, double sweep_end, double dt, double sweep_stride) {
    if (!(dt > 0.0)) throw std::invalid_argument("frozen_excitation_levels: dt must be positive");
    if (!(window > 0.0) || !(sweep_stride > 0.0) || sweep_end < 0.0)
        throw std::invalid_argument("frozen_excitation_levels: bad sweep parameters");

    const long long nseg = std::llround(window / dt);
    const long long total = std::llround((sweep_end + window) / dt);
    const long long stride = std::max<long long>(1, std::llround(sweep_stride / dt));
    if (nseg < 1) throw std::invalid_argument("frozen_excitation_levels: window shorter than dt");

    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& x : points) {
        // Prefix trapezoid integrals of |generator(t, x)| on the grid.
        std::vector<double> cum(static_cast<std::size_t>(total) + 1, 0.0);
        double prev = norm2(generator(0.0, x));
        for (long long i = 1; i <= total; ++i) {
            const double cur = norm2(generator(static_cast<double>(i) * dt, x));
            cum[static_cast<std::size_t>(i)] =
                cum[static_cast<std::size_t>(i - 1)] + 0.5 * dt * (prev + cur);
            prev = cur;
        }
        double level = std::numeric_limits<double>::infinity();
        for (long long i0 = 0; i0 + nseg <= total; i0 += stride)
            level = std::min(level, cum[static_cast<std::size_t>(i0 + nseg)] -
                                        cum[static_cast<std::size_t>(i0)]);
        out.push_back(level);
    }
    return out;
}

}  // namespace signet
