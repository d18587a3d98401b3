#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "fold.hpp"
#include "quadrature.hpp"

namespace modfold {

// ĉ(t) = Σ_k c_k e^{−2πi(k+k0)t} for a sequence starting at index k0.
// 1-periodic trigonometric sum, evaluated with an incremental rotation.
inline Scalar spectrum_eval(const ScalarSeq& c, double t, std::int64_t k0 = 0) {
    const Scalar rot = std::polar(1.0, -2.0 * M_PI * t);
    Scalar phase = std::polar(1.0, -2.0 * M_PI * t * static_cast<double>(k0));
    Scalar acc{0.0, 0.0};
    for (std::size_t k = 0; k < c.size(); ++k) {
        acc += c[k] * phase;
        phase *= rot;
    }
    return acc;
}

namespace detail {

// Panel count scaled to the trigonometric degree of |ĉ|² so the composite
// rule stays in its spectral-accuracy regime (< ~1 oscillation per panel).
inline std::size_t band_panels(std::size_t len, double halfwidth) {
    double cycles = 2.0 * static_cast<double>(len) * (2.0 * halfwidth);
    auto p = static_cast<std::size_t>(std::ceil(cycles)) + 2;
    return p < 4 ? 4 : p;
}

inline const QuadRule& band_rule() {
    static const QuadRule rule = gauss_legendre(16);
    return rule;
}

}

// ∫_{−w}^{w} |ĉ(t)|² dt, the energy of c in the centered frequency band.
inline double band_energy(const ScalarSeq& c, double halfwidth, std::int64_t k0 = 0) {
    if (!(halfwidth > 0.0) || halfwidth > 0.5)
        throw usage_error("band_energy: halfwidth must lie in (0, 1/2]");
    if (c.empty()) return 0.0;
    auto f = [&](double t) { return std::norm(spectrum_eval(c, t, k0)); };
    return integrate(f, -halfwidth, halfwidth,
                     detail::band_panels(c.size(), halfwidth), detail::band_rule());
}

// Same band energy for an integer sequence (certificate coefficients).
inline double band_energy(const std::vector<long long>& n, double halfwidth) {
    ScalarSeq c(n.size());
    for (std::size_t k = 0; k < n.size(); ++k)
        c[k] = Scalar(static_cast<double>(n[k]), 0.0);
    return band_energy(c, halfwidth);
}

}
