#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "jacobi.hpp"
#include "linalg.hpp"
#include "signal.hpp"

namespace modfold {

// Q_{α,N} with entries α·sinc(α(j−k)).  Its quadratic form is the band
// energy of the zero-extended coefficient vector.
struct ProlateMatrix {
    double alpha = 0.0;
    std::size_t size = 0;
    Mat entries;
};

inline ProlateMatrix prolate_matrix(double alpha, std::size_t N) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw usage_error("prolate_matrix: alpha must lie in (0,1)");
    if (N < 1)
        throw usage_error("prolate_matrix: N must be at least 1");
    ProlateMatrix Q;
    Q.alpha = alpha;
    Q.size = N;
    Q.entries = Mat(N, N);
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k <= j; ++k) {
            double v = alpha * sinc(alpha * (static_cast<double>(j) - static_cast<double>(k)));
            Q.entries(j, k) = v;
            Q.entries(k, j) = v;
        }
    return Q;
}

inline double prolate_quadform(const ProlateMatrix& Q, const std::vector<double>& v) {
    if (v.size() != Q.size) throw usage_error("prolate_quadform: size mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < Q.size; ++j) {
        if (v[j] == 0.0) continue;
        double row = 0.0;
        for (std::size_t k = 0; k < Q.size; ++k) row += Q.entries(j, k) * v[k];
        s += v[j] * row;
    }
    return s;
}

struct SpectrumReport {
    double alpha = 0.0;
    std::size_t N = 0;
    double epsilon = 0.0;
    std::vector<double> eigenvalues;   // descending
    double log_det = 0.0;
    std::size_t plunge_index = 0;
    double fitted_decay_rate = 0.0;    // −log μ_plunge / N; aggregate over N for the slope
};

// Eigenvalues below the double-precision noise floor contribute their
// clamped logarithm to log_det; the spectrum itself is reported unclamped.
inline constexpr double kLogDetFloor = 1e-14;

inline SpectrumReport spectrum(const ProlateMatrix& Q, double epsilon = 0.1) {
    if (!(epsilon > 0.0) || (1.0 + epsilon) * Q.alpha >= 1.0)
        throw usage_error("spectrum: need (1+epsilon)*alpha < 1 for the plunge index");
    JacobiResult eig = jacobi_eigen(Q.entries);

    SpectrumReport rep;
    rep.alpha = Q.alpha;
    rep.N = Q.size;
    rep.epsilon = epsilon;
    rep.eigenvalues = eig.eigenvalues;
    for (double mu : rep.eigenvalues) {
        if (mu < -1e-10 || mu > 1.0 + 1e-10)
            throw numerical_error("spectrum: eigenvalue " + std::to_string(mu) +
                                  " outside (0,1)");
    }
    double ld = 0.0;
    for (double mu : rep.eigenvalues) ld += std::log(std::max(mu, kLogDetFloor));
    rep.log_det = ld;
    auto pi = static_cast<std::size_t>(std::floor(Q.alpha * static_cast<double>(Q.size) *
                                                  (1.0 + epsilon)));
    rep.plunge_index = pi < Q.size ? pi : Q.size - 1;
    double mu_p = std::max(rep.eigenvalues[rep.plunge_index], kLogDetFloor);
    rep.fitted_decay_rate = -std::log(mu_p) / static_cast<double>(Q.size);
    return rep;
}

// √N·(det Q)^{1/2N} in the log domain (raw det underflows past N ≈ 100).
inline double minkowski_bound(const ProlateMatrix& Q) {
    JacobiResult eig = jacobi_eigen(Q.entries);
    double ld = 0.0;
    for (double mu : eig.eigenvalues) {
        if (mu < -1e-10)
            throw numerical_error("minkowski_bound: eigenvalue " + std::to_string(mu) +
                                  " negative beyond tolerance, matrix not PSD");
        ld += std::log(std::max(mu, kLogDetFloor));
    }
    double n = static_cast<double>(Q.size);
    return std::sqrt(n) * std::exp(ld / (2.0 * n));
}

struct PlungeFit {
    double slope = 0.0;                // d log μ_plunge / dN
    std::vector<std::size_t> fit_window;
};

// Least-squares slope of log μ_{⌊αN(1+ε)⌋} against N; the fit window is
// reported alongside because the asymptotic threshold is unspecified.
inline PlungeFit plunge_decay_slope(double alpha, const std::vector<std::size_t>& Ns,
                                    double epsilon = 0.1) {
    if (Ns.size() < 2)
        throw usage_error("plunge_decay_slope: need at least two window sizes");
    PlungeFit fit;
    fit.fit_window = Ns;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t N : Ns) {
        SpectrumReport rep = spectrum(prolate_matrix(alpha, N), epsilon);
        double x = static_cast<double>(N);
        double y = std::log(std::max(rep.eigenvalues[rep.plunge_index], kLogDetFloor));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(Ns.size());
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

namespace detail {

// Shared read-only cache of prolate matrices, keyed by the exact bits of
// alpha and by N.  Concurrent lookups take the shared lock; the first
// builder wins the insertion.
class ProlateCache {
public:
    std::shared_ptr<const ProlateMatrix> get(double alpha, std::size_t N) {
        const Key key = make_key(alpha, N);
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        auto built = std::make_shared<const ProlateMatrix>(prolate_matrix(alpha, N));
        std::unique_lock lock(mutex_);
        auto [it, inserted] = cache_.emplace(key, built);
        return it->second;
    }

    static ProlateCache& instance() {
        static ProlateCache cache;
        return cache;
    }

private:
    using Key = std::pair<std::uint64_t, std::size_t>;
    static Key make_key(double alpha, std::size_t N) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &alpha, sizeof bits);
        return {bits, N};
    }
    std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<const ProlateMatrix>> cache_;
};

}

inline std::shared_ptr<const ProlateMatrix> cached_prolate(double alpha, std::size_t N) {
    return detail::ProlateCache::instance().get(alpha, N);
}

}
