#pragma once

// Classical exact reference: cyclic Jacobi diagonalization of real symmetric
// matrices, plus a degeneracy-safe eigenspace projection used to compare
// variational eigenvectors against exact ones.

#include <algorithm>
#include <numeric>
#include <vector>

#include "huckelvq/core.hpp"

namespace huckelvq {

struct EigenSystem {
    std::vector<double> values;           // ascending
    std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i], unit norm
};

// Full spectrum by cyclic Jacobi rotations; dimensions here never exceed 64,
// so accuracy wins over speed.  Sign convention: each vector's
// largest-magnitude component is positive.
inline EigenSystem eig_sym(const Matrix& A_in) {
    if (!A_in.is_symmetric(1e-9))
        throw std::invalid_argument("eig_sym: matrix is not symmetric");
    const std::size_t n = A_in.size();
    Matrix A = A_in;
    Matrix V(n);
    for (std::size_t i = 0; i < n; ++i) V(i, i) = 1.0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * A(i, j) * A(i, j);
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_norm() >= 1e-12; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double app = A(p, p), aqq = A(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return A(a, a) < A(b, b); });

    EigenSystem out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t col : order) {
        out.values.push_back(A(col, col));
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = V(k, col);
        std::size_t imax = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (std::abs(v[k]) > std::abs(v[imax])) imax = k;
        if (v[imax] < 0.0)
            for (double& x : v) x = -x;
        out.vectors.push_back(std::move(v));
    }
    return out;
}

// Squared norm of the projection of v onto the eigenspace at lambda
// (eigenvalues within tol).  Degenerate levels are compared as subspaces.
inline double subspace_overlap(const std::vector<double>& v, const EigenSystem& E,
                               double lambda, double tol = 1e-6) {
    double acc = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < E.values.size(); ++i) {
        if (std::abs(E.values[i] - lambda) > tol) continue;
        found = true;
        double dot = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) dot += v[k] * E.vectors[i][k];
        acc += dot * dot;
    }
    if (!found)
        throw std::invalid_argument("subspace_overlap: no eigenvalue near " +
                                    std::to_string(lambda));
    return acc;
}

}  // namespace huckelvq
