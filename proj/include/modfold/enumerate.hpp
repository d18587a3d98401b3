#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace modfold {

// Depth-first shortest-vector enumeration over a coefficient box, in the
// Schnorr–Euchner zig-zag order with partial-sum pruning.  The form is
// factored as Q = L·Lᵀ, so q(v) accumulates coordinate by coordinate from
// the last index down.  An incumbent value seeds the pruning radius;
// vectors matching it are not reported again, only strict improvements.
// Since q(v) = q(−v), the outermost coordinate is restricted to v ≥ 0.

struct EnumerationResult {
    std::vector<long long> best;   // empty when nothing beat the incumbent
    double best_form = 0.0;        // q of `best`, or the incumbent value
    long long nodes = 0;
};

inline EnumerationResult enumerate_box(const Mat& Q, long long bound, double incumbent_form) {
    if (Q.rows != Q.cols) throw usage_error("enumerate_box: not square");
    if (bound < 1) throw usage_error("enumerate_box: bound must be at least 1");
    const std::size_t n = Q.rows;

    Mat L = cholesky(Q, "enumerate_box");
    EnumerationResult res;
    res.best_form = incumbent_form;

    // partial[i] = Σ_{j≥i} (Lᵀv)_j² once coordinates i..n−1 are fixed
    std::vector<long long> v(n, 0);
    std::vector<double> partial(n + 1, 0.0);
    std::vector<double> center(n, 0.0);

    // (Lᵀv)_i = L(i,i)·v_i + Σ_{j>i} L(j,i)·v_j, so given the tail the
    // i-th term is minimized at v_i = −Σ L(j,i)·v_j / L(i,i).
    const auto tail_dot = [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t j = i + 1; j < n; ++j)
            s += L(j, i) * static_cast<double>(v[j]);
        return s;
    };

    struct Frame {
        long long value = 0;
        long long step = 0;
        int dir = 1;        // which side of the rounded center is nearer
        bool fresh = true;
    };
    std::vector<Frame> st(n);

    std::size_t i = n - 1;
    st[i] = {};
    while (true) {
        Frame& f = st[i];
        const long long lo = (i + 1 == n) ? 0 : -bound;
        if (f.fresh) {
            center[i] = -tail_dot(i) / L(i, i);
            f.value = static_cast<long long>(std::llround(center[i]));
            f.dir = (center[i] >= static_cast<double>(f.value)) ? 1 : -1;
            if (f.value > bound) f.value = bound;
            if (f.value < lo) f.value = lo;
            f.step = 0;
            f.fresh = false;
        } else {
            long long base = static_cast<long long>(std::llround(center[i]));
            // once |step| exceeds this, the zig-zag has swept the whole box
            const long long sweep = std::llabs(base) + 2 * bound + 2;
            long long next = 0;
            bool found = false;
            while (std::llabs(f.step) <= sweep) {
                // zig-zag outward starting toward the nearer side, so the
                // visit order is by non-decreasing distance from the center
                if (f.dir > 0) f.step = (f.step > 0) ? -f.step : -f.step + 1;
                else f.step = (f.step < 0) ? -f.step : -f.step - 1;
                next = base + f.step;
                if (next >= lo && next <= bound && next != f.value) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                if (i + 1 == n) break;
                ++i;
                continue;
            }
            f.value = next;
        }

        v[i] = f.value;
        double ri = L(i, i) * static_cast<double>(v[i]) + tail_dot(i);
        double acc = partial[i + 1] + ri * ri;
        ++res.nodes;
        if (acc >= res.best_form) {
            // every later value at this level sits farther from the center,
            // so the whole remainder of the level is pruned
            if (i + 1 == n) break;
            ++i;
            continue;
        }
        if (i == 0) {
            bool zero = true;
            for (long long x : v)
                if (x != 0) { zero = false; break; }
            if (!zero) {
                res.best = v;
                res.best_form = acc;
            }
            continue;   // keep scanning this level for better values
        }
        partial[i] = acc;
        --i;
        st[i].fresh = true;
    }
    return res;
}

}
