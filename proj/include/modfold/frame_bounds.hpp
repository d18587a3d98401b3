#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "jacobi.hpp"
#include "linalg.hpp"
#include "separated_set.hpp"
#include "signal.hpp"

namespace modfold {

struct FrameBounds {
    double A = 0.0;           // min eigenvalue of the sampled-kernel Gram
    double B = 0.0;           // max eigenvalue
    std::size_t window = 0;   // number of sample points used
    std::size_t basis_size = 0;
};

namespace detail {

// Nyquist-grid atom centers used to span window content.  The block is the
// central span^0.8 portion of the hull: finite sections leak energy past the
// window edges at a rate ~ block/guard, so a sublinear block makes the
// estimate converge to the bi-infinite bounds as the window grows.  If the
// window cannot carry |X| independent atoms at bandwidth Ω (undersampled),
// the full hull is used instead so rank deficiency is visible, not masked.
inline std::vector<double> interior_atom_grid(const SeparatedSet& X, double omega) {
    const auto& pts = X.points();
    const double lo = pts.front(), hi = pts.back();
    const double span = hi - lo;
    const auto capacity = static_cast<std::size_t>(std::floor(span * omega)) + 1;
    double guard = 0.0;
    if (capacity <= X.size()) {
        double block = std::min(span, std::pow(span, 0.8));
        guard = (span - block) / 2.0;
    }
    const double t0 = lo + guard, t1 = hi - guard;
    std::vector<double> grid;
    auto m0 = static_cast<long long>(std::ceil(t0 * omega - 1e-12));
    auto m1 = static_cast<long long>(std::floor(t1 * omega + 1e-12));
    for (long long m = m0; m <= m1; ++m)
        grid.push_back(static_cast<double>(m) / omega);
    if (grid.empty())
        grid.push_back(0.5 * (lo + hi));
    return grid;
}

}

// Finite-section estimate of the sampling frame bounds of X in PW_Ω: the
// extreme eigenvalues of the Gram of window-spanning orthonormal atoms under
// the sampling inner product ⟨u,v⟩_X = Σ_k u(x_k)·v(x_k).  For X = αℤ both
// ends approach 1/α as the window grows; an undersampled window drives A to
// zero.  A is biased upward relative to the bi-infinite bound (interior
// restriction); the bias is reported by convention, never corrected.
inline FrameBounds frame_bounds_estimate(const SeparatedSet& X, double omega) {
    if (X.size() < 2) throw usage_error("frame_bounds_estimate: window too small");
    if (!(omega > 0.0)) throw usage_error("frame_bounds_estimate: omega must be positive");

    const auto& pts = X.points();
    const std::vector<double> grid = detail::interior_atom_grid(X, omega);
    const std::size_t m = grid.size(), n = pts.size();

    Mat M(m, n);
    const double root_omega = std::sqrt(omega);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < n; ++k)
            M(i, k) = root_omega * sinc(omega * (pts[k] - grid[i]));

    Mat S(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            const double* ri = &M.a[i * n];
            const double* rj = &M.a[j * n];
            for (std::size_t k = 0; k < n; ++k) s += ri[k] * rj[k];
            S(i, j) = s;
            S(j, i) = s;
        }

    JacobiResult eig = jacobi_eigen(S);
    FrameBounds fb;
    fb.A = std::max(eig.eigenvalues.back(), 0.0);
    fb.B = eig.eigenvalues.front();
    fb.window = n;
    fb.basis_size = m;
    return fb;
}

}
