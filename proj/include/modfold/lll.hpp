#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace modfold {

// LLL reduction of the lattice ℤ^N under a quadratic form Q, working on the
// Gram matrix only (no Q^{1/2} factorization).  The unimodular transform is
// kept in exact 64-bit integers; Gram-Schmidt data is extended precision
// (the plunge spectrum of the band forms spans many orders, and double
// accumulation can push the smallest B* below its own noise floor), and the
// Gram is recomputed from the exact transform on drift.

struct LLLResult {
    std::vector<std::vector<long long>> basis;   // rows, unimodular image of the identity
    std::vector<long long> shortest;             // row with the smallest form value
    double shortest_form = 0.0;                  // ⟨Q v, v⟩ of that row
    int swaps = 0;
};

namespace detail {

inline void check_transform_entry(long long v) {
    if (v > (1LL << 55) || v < -(1LL << 55))
        throw numerical_error("lll: integer transform entries overflow 64-bit range");
}

inline double form_value(const Mat& Q, const std::vector<long long>& v) {
    const std::size_t n = Q.rows;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (v[j] == 0) continue;
        double row = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            row += Q(j, k) * static_cast<double>(v[k]);
        s += static_cast<double>(v[j]) * row;
    }
    return s;
}

inline std::vector<long double> gram_of_transform(const Mat& Q,
                                                  const std::vector<std::vector<long long>>& T) {
    const std::size_t n = Q.rows;
    std::vector<long double> W(n * n, 0.0L);   // W = T·Q
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            long double s = 0.0L;
            for (std::size_t j = 0; j < n; ++j)
                s += static_cast<long double>(T[i][j]) * static_cast<long double>(Q(j, k));
            W[i * n + k] = s;
        }
    std::vector<long double> G(n * n, 0.0L);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= i; ++k) {
            long double s = 0.0L;
            for (std::size_t j = 0; j < n; ++j)
                s += W[i * n + j] * static_cast<long double>(T[k][j]);
            G[i * n + k] = s;
            G[k * n + i] = s;
        }
    return G;
}

}

inline LLLResult lll_reduce(const Mat& Q, double delta = 0.75) {
    if (Q.rows != Q.cols) throw usage_error("lll_reduce: not square");
    if (!(delta > 0.25) || !(delta < 1.0))
        throw usage_error("lll_reduce: delta must lie in (1/4, 1)");
    const std::size_t n = Q.rows;

    std::vector<std::vector<long long>> T(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) T[i][i] = 1;
    std::vector<long double> G = detail::gram_of_transform(Q, T);

    std::vector<std::vector<long double>> mu(n, std::vector<long double>(n, 0.0L));
    std::vector<long double> Bstar(n, 0.0L);

    auto try_refresh_gs = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                long double acc = G[i * n + j];
                for (std::size_t k = 0; k < j; ++k) acc -= mu[j][k] * mu[i][k] * Bstar[k];
                if (!(Bstar[j] > 0.0L)) return false;
                mu[i][j] = acc / Bstar[j];
            }
            long double b = G[i * n + i];
            for (std::size_t k = 0; k < i; ++k) b -= mu[i][k] * mu[i][k] * Bstar[k];
            Bstar[i] = b;
            if (!(Bstar[i] > 0.0L)) return false;
        }
        return true;
    };
    auto refresh_gs = [&]() {
        if (try_refresh_gs()) return;
        G = detail::gram_of_transform(Q, T);
        if (!try_refresh_gs())
            throw numerical_error("lll_reduce: Gram lost positive definiteness");
    };

    std::vector<long double> newrow(n);
    auto row_op = [&](std::size_t i, std::size_t j, long long r) {
        // T_i ← T_i − r·T_j, mirrored on the Gram as row/column updates
        for (std::size_t t = 0; t < n; ++t) {
            T[i][t] -= r * T[j][t];
            detail::check_transform_entry(T[i][t]);
        }
        const auto rd = static_cast<long double>(r);
        const long double gjj = G[j * n + j], gij = G[i * n + j], gii = G[i * n + i];
        for (std::size_t t = 0; t < n; ++t) newrow[t] = G[i * n + t] - rd * G[j * n + t];
        newrow[i] = gii - 2.0L * rd * gij + rd * rd * gjj;
        for (std::size_t t = 0; t < n; ++t) {
            G[i * n + t] = newrow[t];
            G[t * n + i] = newrow[t];
        }
    };

    refresh_gs();
    int swaps = 0, since_refresh = 0;
    std::size_t k = 1;
    long long budget = static_cast<long long>(n) * static_cast<long long>(n) * 4000 + 10000;
    while (k < n) {
        if (--budget < 0)
            throw numerical_error("lll_reduce: iteration budget exhausted");
        {
            long double m = mu[k][k - 1];
            if (std::abs(m) > 0.5L) {
                auto r = static_cast<long long>(std::llround(m));
                row_op(k, k - 1, r);
                refresh_gs();
            }
        }
        if (Bstar[k] < (static_cast<long double>(delta) - mu[k][k - 1] * mu[k][k - 1]) *
                           Bstar[k - 1]) {
            std::swap(T[k], T[k - 1]);
            for (std::size_t t = 0; t < n; ++t) std::swap(G[k * n + t], G[(k - 1) * n + t]);
            for (std::size_t t = 0; t < n; ++t) std::swap(G[t * n + k], G[t * n + (k - 1)]);
            ++swaps;
            if (++since_refresh >= 32) {
                G = detail::gram_of_transform(Q, T);
                since_refresh = 0;
            }
            refresh_gs();
            k = k > 1 ? k - 1 : 1;
        } else {
            for (std::size_t j = k - 1; j-- > 0;) {
                long double m = mu[k][j];
                if (std::abs(m) > 0.5L) {
                    auto r = static_cast<long long>(std::llround(m));
                    row_op(k, j, r);
                }
            }
            refresh_gs();
            ++k;
        }
    }

    LLLResult res;
    res.swaps = swaps;
    res.basis = std::move(T);
    double best = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = detail::form_value(Q, res.basis[i]);
        if (i == 0 || f < best) {
            best = f;
            best_i = i;
        }
    }
    res.shortest = res.basis[best_i];
    res.shortest_form = best;
    return res;
}

}
