#pragma once

// Dense row-major matrices and the handful of vector kernels the library
// needs. Sizes here are tiny (tens of rows), so clarity and determinism win
// over blocking or vectorization. Eigenvalues come from a cyclic Jacobi
// sweep: bitwise-reproducible for a given input and accurate to machine
// precision for symmetric matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace signet {

using Vec = std::vector<double>;

class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

    bool operator==(const Mat& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

inline Vec matvec(const Mat& a, const Vec& x) {
    if (x.size() != a.cols()) throw std::invalid_argument("matvec: dimension mismatch");
    Vec y(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* row = a.row_ptr(r);
        double s = 0.0;
        for (std::size_t c = 0; c < a.cols(); ++c) s += row[c] * x[c];
        y[r] = s;
    }
    return y;
}

/// y = A^T x without forming the transpose.
inline Vec matvec_transposed(const Mat& a, const Vec& x) {
    if (x.size() != a.rows()) throw std::invalid_argument("matvec_transposed: dimension mismatch");
    Vec y(a.cols(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* row = a.row_ptr(r);
        for (std::size_t c = 0; c < a.cols(); ++c) y[c] += row[c] * x[r];
    }
    return y;
}

inline Mat transpose(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
    return t;
}

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline Vec vadd(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vadd: dimension mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec vsub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vsub: dimension mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec vscale(const Vec& a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

/// y += s * x
inline void vaxpy(Vec& y, double s, const Vec& x) {
    if (y.size() != x.size()) throw std::invalid_argument("vaxpy: dimension mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

inline double max_asymmetry(const Mat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("max_asymmetry: matrix not square");
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = r + 1; c < a.cols(); ++c)
            m = std::max(m, std::abs(a(r, c) - a(c, r)));
    return m;
}

/// G += s * F F^T. Accumulates only the upper triangle, then mirrors,
/// so the result stays exactly symmetric.
inline void add_scaled_gram(Mat& g, const Mat& f, double s) {
    if (g.rows() != f.rows() || g.cols() != f.rows())
        throw std::invalid_argument("add_scaled_gram: shape mismatch");
    const std::size_t n = f.rows(), k = f.cols();
    for (std::size_t r = 0; r < n; ++r) {
        const double* fr = f.row_ptr(r);
        for (std::size_t c = r; c < n; ++c) {
            const double* fc = f.row_ptr(c);
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += fr[t] * fc[t];
            g(r, c) += s * acc;
            if (c != r) g(c, r) = g(r, c);
        }
    }
}

namespace detail {

inline double offdiag_norm(const Mat& a) {
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < a.rows(); ++p)
        for (std::size_t q = p + 1; q < a.rows(); ++q) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
}

}  // namespace detail

/// Eigenvalues of a symmetric matrix, ascending. Cyclic Jacobi without
/// eigenvectors; stops when the off-diagonal Frobenius norm drops below
/// off_tol (absolute). The input is taken by value and destroyed.
inline Vec jacobi_eigenvalues(Mat a, double off_tol = 1e-12, int max_sweeps = 100) {
    if (a.rows() != a.cols()) throw std::invalid_argument("jacobi_eigenvalues: matrix not square");
    const std::size_t n = a.rows();
    if (n == 0) return {};
    if (n == 1) return {a(0, 0)};

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (detail::offdiag_norm(a) <= off_tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e12) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = ((theta >= 0.0) ? 1.0 : -1.0) /
                        (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(p, k) = a(k, p);
                    a(k, q) = s * akp + c * akq;
                    a(q, k) = a(k, q);
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    Vec eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

inline double min_eigenvalue(const Mat& a) { return jacobi_eigenvalues(a).front(); }

}  // namespace signet
