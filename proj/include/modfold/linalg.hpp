#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace modfold {

// Row-major dense square/rectangular helpers, sized for desk-scale windows
// (N up to a few hundred); no external linear-algebra dependency.

struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline std::vector<double> matvec(const Mat& m, const std::vector<double>& x) {
    if (x.size() != m.cols) throw usage_error("matvec: size mismatch");
    std::vector<double> y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        const double* row = &m.a[i * m.cols];
        for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

inline std::vector<double> matvec_t(const Mat& m, const std::vector<double>& x) {
    if (x.size() != m.rows) throw usage_error("matvec_t: size mismatch");
    std::vector<double> y(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = &m.a[i * m.cols];
        for (std::size_t j = 0; j < m.cols; ++j) y[j] += row[j] * x[i];
    }
    return y;
}

// In-place lower Cholesky of a symmetric positive definite matrix.
inline Mat cholesky(const Mat& s, const char* who = "cholesky") {
    if (s.rows != s.cols) throw usage_error(std::string(who) + ": not square");
    const std::size_t n = s.rows;
    Mat L(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = s(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= L(i, k) * L(j, k);
            if (i == j) {
                if (!(acc > 0.0))
                    throw numerical_error(std::string(who) +
                                          ": matrix not positive definite (pivot " +
                                          std::to_string(acc) + " at " + std::to_string(i) + ")");
                L(i, i) = std::sqrt(acc);
            } else {
                L(i, j) = acc / L(j, j);
            }
        }
    }
    return L;
}

inline std::vector<double> cholesky_solve(const Mat& L, std::vector<double> b) {
    const std::size_t n = L.rows;
    if (b.size() != n) throw usage_error("cholesky_solve: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[i];
        for (std::size_t k = 0; k < i; ++k) acc -= L(i, k) * b[k];
        b[i] = acc / L(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= L(k, ii) * b[k];
        b[ii] = acc / L(ii, ii);
    }
    return b;
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

}
