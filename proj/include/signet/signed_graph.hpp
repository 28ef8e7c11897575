#pragma once

// Signed graphs over scalar agents and their repelling Laplacian.
//
// Conventions used throughout:
//  * nodes are 1-based in the public API;
//  * every undirected edge is stored with i < j;
//  * weights are signed and nonzero: positive = cooperative coupling,
//    negative = antagonistic;
//  * the repelling Laplacian takes l_ii = sum_k a_ik (signed degree) and
//    l_ij = -a_ij, so L * ones == 0 holds for any sign pattern while L
//    itself may be indefinite;
//  * edge slot k of the complete graph on n nodes enumerates pairs (i, j),
//    i < j, in lexicographic order: k = (i-1)n - i(i+1)/2 + j.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "signet/linalg.hpp"

namespace signet {

struct SignedEdge {
    int i = 0;  // 1-based, i < j
    int j = 0;
    double w = 0.0;  // nonzero, sign carries the interaction type
};

/// Weights of all n(n-1)/2 complete-graph edge slots; zero marks an absent edge.
using WeightVector = Vec;

/// Slot count of the complete graph on n nodes.
inline int complete_edge_count(int n) {
    if (n < 1) throw std::invalid_argument("complete_edge_count: need n >= 1");
    return n * (n - 1) / 2;
}

/// Lexicographic slot (1-based) of pair (i, j), 1 <= i < j <= n.
inline int edge_index(int i, int j, int n) {
    if (n < 2) throw std::invalid_argument("edge_index: need n >= 2");
    if (i < 1 || j <= i || j > n)
        throw std::invalid_argument("edge_index: require 1 <= i < j <= n, got (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
    return (i - 1) * n - i * (i + 1) / 2 + j;
}

/// Inverse of edge_index: the pair (i, j) stored in slot k.
inline std::pair<int, int> edge_pair(int k, int n) {
    if (n < 2) throw std::invalid_argument("edge_pair: need n >= 2");
    if (k < 1 || k > complete_edge_count(n))
        throw std::invalid_argument("edge_pair: slot " + std::to_string(k) +
                                    " outside 1.." + std::to_string(complete_edge_count(n)));
    int i = 1;
    int rest = k;
    while (rest > n - i) {
        rest -= n - i;
        ++i;
    }
    return {i, i + rest};
}

class SignedGraph {
public:
    /// Validates and canonicalizes: edges end up sorted lexicographically.
    /// With normalized = true every magnitude must satisfy |w| <= 1.
    SignedGraph(int n_nodes, std::vector<SignedEdge> edges, bool normalized = false)
        : n_(n_nodes), edges_(std::move(edges)), normalized_(normalized) {
        if (n_ < 1) throw std::invalid_argument("SignedGraph: need at least one node");
        for (const auto& e : edges_) {
            if (e.i < 1 || e.j <= e.i || e.j > n_)
                throw std::invalid_argument("SignedGraph: edge (" + std::to_string(e.i) + ", " +
                                            std::to_string(e.j) + ") violates 1 <= i < j <= " +
                                            std::to_string(n_));
            if (e.w == 0.0 || !std::isfinite(e.w))
                throw std::invalid_argument("SignedGraph: edge (" + std::to_string(e.i) + ", " +
                                            std::to_string(e.j) + ") needs a finite nonzero weight");
            if (normalized_ && std::abs(e.w) > 1.0)
                throw std::invalid_argument("SignedGraph: normalized graph needs |w| <= 1, edge (" +
                                            std::to_string(e.i) + ", " + std::to_string(e.j) +
                                            ") has w = " + std::to_string(e.w));
        }
        std::sort(edges_.begin(), edges_.end(), [](const SignedEdge& a, const SignedEdge& b) {
            return a.i != b.i ? a.i < b.i : a.j < b.j;
        });
        for (std::size_t k = 1; k < edges_.size(); ++k)
            if (edges_[k - 1].i == edges_[k].i && edges_[k - 1].j == edges_[k].j)
                throw std::invalid_argument("SignedGraph: duplicate edge (" +
                                            std::to_string(edges_[k].i) + ", " +
                                            std::to_string(edges_[k].j) + ")");
    }

    int n_nodes() const { return n_; }
    const std::vector<SignedEdge>& edges() const { return edges_; }
    bool normalized() const { return normalized_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    /// Signed adjacency matrix, zero diagonal.
    Mat adjacency() const {
        Mat a(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_));
        for (const auto& e : edges_) {
            a(e.i - 1, e.j - 1) = e.w;
            a(e.j - 1, e.i - 1) = e.w;
        }
        return a;
    }

private:
    int n_;
    std::vector<SignedEdge> edges_;
    bool normalized_;
};

/// Oriented incidence matrix of the complete graph on n nodes: column k holds
/// +1 at row i-1 and -1 at row j-1 for the slot-k pair (i, j). Orientation is
/// a bookkeeping choice; every quadratic form built here is orientation-free.
class IncidenceMatrix {
public:
    IncidenceMatrix(Mat m, int n_nodes) : m_(std::move(m)), n_(n_nodes) {
        if (m_.rows() != static_cast<std::size_t>(n_) ||
            m_.cols() != static_cast<std::size_t>(complete_edge_count(n_)))
            throw std::invalid_argument("IncidenceMatrix: shape mismatch");
    }

    const Mat& matrix() const { return m_; }
    int n_nodes() const { return n_; }
    int n_edges() const { return static_cast<int>(m_.cols()); }

private:
    Mat m_;
    int n_;
};

inline IncidenceMatrix build_complete_incidence(int n) {
    if (n < 1) throw std::invalid_argument("build_complete_incidence: need n >= 1");
    Mat m(static_cast<std::size_t>(n), static_cast<std::size_t>(complete_edge_count(n)));
    int k = 0;
    for (int i = 1; i < n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            m(i - 1, k) = 1.0;
            m(j - 1, k) = -1.0;
            ++k;
        }
    }
    return IncidenceMatrix(std::move(m), n);
}

/// Weights of g placed into their complete-graph slots; absent edges are zero.
inline WeightVector embed_weights(const SignedGraph& g) {
    const int n = g.n_nodes();
    WeightVector w(static_cast<std::size_t>(complete_edge_count(n)), 0.0);
    for (const auto& e : g.edges()) w[edge_index(e.i, e.j, n) - 1] = e.w;
    return w;
}

/// L = E diag(w) E^T for an oriented incidence matrix E. Accumulated edge by
/// edge from the two nonzeros of each column, so flipping any column's
/// orientation leaves the result bitwise identical. Columns must contain
/// exactly one +1 and one -1.
inline Mat laplacian_from_weights(const Mat& incidence, const WeightVector& w) {
    if (w.size() != incidence.cols())
        throw std::invalid_argument("laplacian_from_weights: weight count != column count");
    const std::size_t n = incidence.rows();
    Mat l(n, n);
    for (std::size_t k = 0; k < incidence.cols(); ++k) {
        std::size_t pos = n, neg = n;
        for (std::size_t r = 0; r < n; ++r) {
            const double v = incidence(r, k);
            if (v == 0.0) continue;
            if (v == 1.0 && pos == n) {
                pos = r;
            } else if (v == -1.0 && neg == n) {
                neg = r;
            } else {
                throw std::invalid_argument("laplacian_from_weights: column " + std::to_string(k) +
                                            " is not an oriented edge");
            }
        }
        if (pos == n || neg == n)
            throw std::invalid_argument("laplacian_from_weights: column " + std::to_string(k) +
                                        " is not an oriented edge");
        const double wk = w[k];
        l(pos, pos) += wk;
        l(neg, neg) += wk;
        l(pos, neg) -= wk;
        l(neg, pos) -= wk;
    }
    return l;
}

inline Mat laplacian_from_weights(const IncidenceMatrix& incidence, const WeightVector& w) {
    return laplacian_from_weights(incidence.matrix(), w);
}

/// Laplacian assembled entrywise from the adjacency matrix: l_ii is the
/// signed degree, l_ij = -a_ij. Independent of the incidence-based path.
inline Mat laplacian_direct(const SignedGraph& g) {
    const std::size_t n = static_cast<std::size_t>(g.n_nodes());
    const Mat a = g.adjacency();
    Mat l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            deg += a(i, j);
            l(i, j) = -a(i, j);
        }
        l(i, i) = deg;
    }
    return l;
}

struct SpectralReport {
    Vec eigenvalues;  // ascending
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kernel_residual = 0.0;  // |L * ones|_inf, zero for any Laplacian
};

/// Eigenvalue summary of a Laplacian. Rejects matrices that are not
/// symmetric within 1e-10.
inline SpectralReport spectral_report(const Mat& l) {
    if (l.rows() != l.cols()) throw std::invalid_argument("spectral_report: matrix not square");
    if (max_asymmetry(l) > 1e-10)
        throw std::invalid_argument("spectral_report: matrix not symmetric within 1e-10");
    SpectralReport rep;
    rep.eigenvalues = jacobi_eigenvalues(l);
    rep.lambda_min = rep.eigenvalues.front();
    rep.lambda_max = rep.eigenvalues.back();
    const Vec ones(l.rows(), 1.0);
    rep.kernel_residual = norm_inf(matvec(l, ones));
    return rep;
}

struct RayleighCheck {
    double lambda_min = 0.0;
    bool bound_holds = false;  // lambda_min >= -n within 1e-9
};

/// For normalized graphs (|w| <= 1) the Laplacian spectrum is bounded below
/// by -n, with equality approached by the all-antagonistic complete graph.
inline RayleighCheck check_rayleigh_bound(const SignedGraph& g) {
    if (!g.normalized())
        throw std::invalid_argument("check_rayleigh_bound: graph must be normalized (|w| <= 1)");
    RayleighCheck chk;
    chk.lambda_min = jacobi_eigenvalues(laplacian_direct(g)).front();
    chk.bound_holds = chk.lambda_min >= -static_cast<double>(g.n_nodes()) - 1e-9;
    return chk;
}

}  // namespace signet
