#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace modfold {

// Cyclic Jacobi rotations for symmetric matrices.  Chosen over QR-type
// solvers because the eigenvalue plunge needs high relative accuracy for
// tiny eigenvalues.  Converged when the off-diagonal Frobenius norm drops
// below 1e−12; gives up after 50 sweeps.

struct JacobiResult {
    std::vector<double> eigenvalues;   // descending
    Mat vectors;                       // column k pairs with eigenvalues[k]; empty unless requested
    int sweeps = 0;
    double off_norm = 0.0;
};

inline JacobiResult jacobi_eigen(Mat A, bool want_vectors = false) {
    if (A.rows != A.cols) throw usage_error("jacobi_eigen: not square");
    const std::size_t n = A.rows;
    Mat V;
    if (want_vectors) {
        V = Mat(n, n);
        for (std::size_t i = 0; i < n; ++i) V(i, i) = 1.0;
    }
    const double tol = 1e-12;
    const int max_sweeps = 50;
    auto off_frobenius = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += A(p, q) * A(p, q);
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    double off = off_frobenius();
    while (off >= tol && sweep < max_sweeps) {
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double app = A(p, p), aqq = A(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = aip - s * (aiq + tau * aip);
                    A(p, i) = A(i, p);
                    A(i, q) = aiq + s * (aip - tau * aiq);
                    A(q, i) = A(i, q);
                }
                if (want_vectors) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const double vip = V(i, p), viq = V(i, q);
                        V(i, p) = vip - s * (viq + tau * vip);
                        V(i, q) = viq + s * (vip - tau * viq);
                    }
                }
            }
        }
        off = off_frobenius();
    }
    if (off >= tol)
        throw internal_error("jacobi_eigen: no convergence after " +
                             std::to_string(sweep) + " sweeps (off-diagonal norm " +
                             std::to_string(off) + ")");

    JacobiResult res;
    res.sweeps = sweep;
    res.off_norm = off;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return A(i, i) > A(j, j); });
    res.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.eigenvalues[i] = A(order[i], order[i]);
    if (want_vectors) {
        res.vectors = Mat(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                res.vectors(i, j) = V(i, order[j]);
    }
    return res;
}

}
