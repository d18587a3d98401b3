#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace modfold {

using Scalar = std::complex<double>;
using ScalarSeq = std::vector<Scalar>;

// 2λ({x/2λ + 1/2} − 1/2), half-open range [−λ, λ).  Uses floor so the
// boundary case {·} = 0 lands exactly on −λ instead of a rounding tie.
inline double fold_real(double x, double lambda) {
    if (!(lambda > 0.0))
        throw usage_error("fold: lambda must be positive");
    if (!std::isfinite(x))
        throw domain_error("fold: non-finite input");
    const double two_lambda = 2.0 * lambda;
    double u = x / two_lambda + 0.5;
    double frac = u - std::floor(u);
    double out = two_lambda * (frac - 0.5);
    if (out >= lambda) out = -lambda;   // guards frac rounding up to 1
    return out;
}

inline Scalar fold(Scalar z, double lambda) {
    return {fold_real(z.real(), lambda), fold_real(z.imag(), lambda)};
}

inline ScalarSeq fold(const ScalarSeq& a, double lambda) {
    ScalarSeq out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = fold(a[k], lambda);
    return out;
}

// |z − w|_λ, the toral metric: modulus of the componentwise-folded difference.
inline double toral_dist(Scalar z, Scalar w, double lambda) {
    return std::abs(fold(z - w, lambda));
}

// ‖a − b‖_{ℓ²_λ} = ‖fold(a − b)‖₂.
inline double toral_seq_dist(const ScalarSeq& a, const ScalarSeq& b, double lambda) {
    if (a.size() != b.size())
        throw usage_error("toral_seq_dist: length mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = toral_dist(a[k], b[k], lambda);
        s += d * d;
    }
    return std::sqrt(s);
}

}
