#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "fold.hpp"
#include "signal.hpp"
#include "spectrum.hpp"

namespace modfold {

// Finite section of the band projection P_{αℤ}: Toeplitz kernel
// α·sinc(α(j−k)) applied on a fixed index window.
struct ProjectionOperator {
    double alpha = 0.0;
    std::size_t window = 0;
};

inline ProjectionOperator projection_operator(double alpha, std::size_t window) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw usage_error("projection_operator: alpha must lie in (0,1)");
    if (window == 0)
        throw usage_error("projection_operator: empty window");
    return {alpha, window};
}

struct ProjectionResult {
    ScalarSeq values;
    double truncation_estimate = 0.0;   // mass of Pc falling outside the window
};

namespace detail {

// Unguarded Toeplitz application, exact entrywise for the given support.
inline ScalarSeq toeplitz_apply(double alpha, const ScalarSeq& c) {
    const std::size_t n = c.size();
    ScalarSeq out(n, Scalar{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
        Scalar acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            if (c[k] == Scalar{0.0, 0.0}) continue;
            acc += alpha * sinc(alpha * (static_cast<double>(j) - static_cast<double>(k))) * c[k];
        }
        out[j] = acc;
    }
    return out;
}

inline bool support_range(const ScalarSeq& c, std::size_t& s0, std::size_t& s1) {
    bool any = false;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] != Scalar{0.0, 0.0}) {
            if (!any) s0 = k;
            s1 = k;
            any = true;
        }
    }
    return any;
}

}

// (−1)^k sign twist; shifts the spectrum by a half period.
inline ScalarSeq sign_twist(const ScalarSeq& c) {
    ScalarSeq out(c);
    for (std::size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
    return out;
}

// ⟨P_α c, c⟩ as an exact finite double sum over the support (the quadratic
// form of the band kernel); real by symmetry.
inline double band_form(double alpha, const ScalarSeq& c) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == Scalar{0.0, 0.0}) continue;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k] == Scalar{0.0, 0.0}) continue;
            double g = alpha * sinc(alpha * (static_cast<double>(j) - static_cast<double>(k)));
            s += g * (c[j].real() * c[k].real() + c[j].imag() * c[k].imag());
        }
    }
    return s;
}

// ⟨P_α c, d⟩ spatial pairing, exact over the supports.
inline double band_pairing(double alpha, const ScalarSeq& c, const ScalarSeq& d) {
    if (c.size() != d.size())
        throw usage_error("band_pairing: length mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[j] == Scalar{0.0, 0.0}) continue;
        Scalar pj{0.0, 0.0};
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k] == Scalar{0.0, 0.0}) continue;
            pj += alpha * sinc(alpha * (static_cast<double>(j) - static_cast<double>(k))) * c[k];
        }
        s += pj.real() * d[j].real() + pj.imag() * d[j].imag();
    }
    return s;
}

// Windowed application with the guard-band precondition: the support must
// keep at least its own length of clearance to both window edges (so the
// window is ≥ 4× the support, centered use assumed).  The returned
// truncation estimate measures how much of Pc the window cannot hold.
inline ProjectionResult projection_apply(const ProjectionOperator& P, const ScalarSeq& c) {
    if (c.size() != P.window)
        throw usage_error("projection_apply: sequence length must equal the operator window");
    std::size_t s0 = 0, s1 = 0;
    if (!detail::support_range(c, s0, s1))
        return {ScalarSeq(c.size(), Scalar{0.0, 0.0}), 0.0};
    const std::size_t support_len = s1 - s0 + 1;
    if (P.window < 4 * support_len || s0 < support_len ||
        (P.window - 1 - s1) < support_len)
        throw usage_error("projection_apply: support touching window edge (guard band violated)");

    ProjectionResult res;
    res.values = detail::toeplitz_apply(P.alpha, c);
    double inside = 0.0;
    for (const Scalar& v : res.values) inside += std::norm(v);
    double total = band_energy(c, P.alpha / 2.0);
    res.truncation_estimate = std::sqrt(std::max(0.0, total - inside));
    return res;
}

}
