#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "enumerate.hpp"
#include "errors.hpp"
#include "lll.hpp"
#include "projection.hpp"
#include "prolate.hpp"
#include "quadrature.hpp"
#include "spectrum.hpp"

namespace modfold {

// A nonzero integer sequence n together with its distance to the range of
// lattice sampling at spacing alpha: residual = ‖n − P_{αℤ}n‖ for the
// sign-twisted placement, computed as the spectral energy of n over the
// centered band of halfwidth (1−α)/2 (the two agree; the stored coefficient
// convention keeps the small-band side at frequency zero's complement).
struct IntegerCertificate {
    double alpha = 0.0;
    std::string construction;
    std::size_t order = 0;              // the N of the construction tag
    std::vector<long long> coeffs;      // real parts
    std::vector<long long> coeffs_imag; // empty in real mode
    double residual = 0.0;
};

namespace detail {

inline bool all_zero(const std::vector<long long>& v) {
    for (long long x : v)
        if (x != 0) return false;
    return true;
}

inline void require_nonzero(const IntegerCertificate& cert, const char* who) {
    if (cert.coeffs.empty() ||
        (all_zero(cert.coeffs) && (cert.coeffs_imag.empty() || all_zero(cert.coeffs_imag))))
        throw usage_error(std::string(who) + ": zero certificate");
}

inline void require_alpha(double alpha, const char* who) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw usage_error(std::string(who) + ": alpha must lie in (0,1)");
}

// C(n, k) in 64-bit; overflows past the C(66,33) ceiling.
inline long long binomial_coeff(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    long long r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        if (r > std::numeric_limits<long long>::max() / static_cast<long long>(n - k + i))
            throw usage_error("binomial_coeff: value exceeds 64-bit range");
        r = r * static_cast<long long>(n - k + i) / static_cast<long long>(i);
    }
    return r;
}

// C(2N, N) as a double; exact below 2^53, then correctly rounded products.
inline double central_binomial(std::size_t N) {
    double r = 1.0;
    for (std::size_t i = 1; i <= N; ++i)
        r *= static_cast<double>(N + i) / static_cast<double>(i);
    return r;
}

inline double quadform_residual(double alpha, const std::vector<long long>& n) {
    auto Q = cached_prolate(1.0 - alpha, n.size());
    std::vector<double> v(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) v[k] = static_cast<double>(n[k]);
    return std::sqrt(std::max(0.0, prolate_quadform(*Q, v)));
}

}

// Both independent recomputations of a certificate's residual: the spectral
// band energy and the prolate quadratic form ⟨Q_{1−α}n, n⟩.
struct ResidualCheck {
    double band_route = 0.0;
    double quadform_route = 0.0;
};

inline ResidualCheck verify_residual(const IntegerCertificate& cert) {
    detail::require_nonzero(cert, "verify_residual");
    ResidualCheck chk;
    chk.band_route = std::sqrt(std::max(0.0, band_energy(cert.coeffs, (1.0 - cert.alpha) / 2.0)));
    chk.quadform_route = detail::quadform_residual(cert.alpha, cert.coeffs);
    return chk;
}

// Proof-side ceiling √(1−α)·(2 sin(π(1−α)/2))^N on the binomial residual.
inline double binomial_residual_bound(std::size_t N, double alpha) {
    detail::require_alpha(alpha, "binomial_residual_bound");
    double edge = 2.0 * std::sin(M_PI * (1.0 - alpha) / 2.0);
    return std::sqrt(1.0 - alpha) * std::pow(edge, static_cast<double>(N));
}

// n_k = (−1)^{N−k}·C(N, N−k): the alternating binomial sequence, whose
// spectrum has modulus (2 sin πt)^N.  The residual is the band integral
// 2∫₀^{(1−α)/2}(2 sin πt)^{2N} dt with the 2^{2N} folded into the integrand
// (the separated-factor form overflows and cancels at large N).
inline IntegerCertificate binomial_certificate(std::size_t N, double alpha) {
    if (N < 1) throw usage_error("binomial_certificate: N must be at least 1");
    detail::require_alpha(alpha, "binomial_certificate");
    IntegerCertificate cert;
    cert.alpha = alpha;
    cert.construction = "binomial(" + std::to_string(N) + ")";
    cert.order = N;
    cert.coeffs.resize(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        long long c = detail::binomial_coeff(N, N - k);
        cert.coeffs[k] = ((N - k) % 2 == 0) ? c : -c;
    }
    auto integrand = [&](double t) {
        return std::pow(2.0 * std::sin(M_PI * t), 2.0 * static_cast<double>(N));
    };
    static const QuadRule rule = gauss_legendre(16);
    std::size_t panels = std::max<std::size_t>(8, N);
    double r2 = 2.0 * integrate(integrand, 0.0, (1.0 - alpha) / 2.0, panels, rule);
    cert.residual = std::sqrt(r2);
    return cert;
}

// Expands an integer polynomial p into the integer sequence of
// p(2 cos 2πt) = Σ_m seq_m e^{2πimt}, support m ∈ [−d, d] stored ascending.
inline std::vector<long long> cosine_expand(const std::vector<long long>& poly) {
    if (poly.empty()) throw usage_error("cosine_expand: empty polynomial");
    const std::size_t d = poly.size() - 1;
    std::vector<long long> seq(2 * d + 1, 0);
    for (std::size_t deg = 0; deg <= d; ++deg) {
        if (poly[deg] == 0) continue;
        for (std::size_t j = 0; j <= deg; ++j) {
            // (2cos2πt)^deg = Σ_j C(deg,j)·e^{2πi(deg−2j)t}
            auto m = static_cast<long long>(deg) - 2 * static_cast<long long>(j);
            seq[static_cast<std::size_t>(m + static_cast<long long>(d))] +=
                poly[deg] * detail::binomial_coeff(deg, j);
        }
    }
    return seq;
}

// An integer certificate from an explicitly supplied polynomial (skips the
// exhaustive search); residual by the band-energy route.
inline IntegerCertificate chebyshev_certificate_from_poly(const std::vector<long long>& poly,
                                                          double alpha) {
    detail::require_alpha(alpha, "chebyshev_certificate_from_poly");
    if (poly.empty() || detail::all_zero(poly))
        throw usage_error("chebyshev_certificate_from_poly: all-zero polynomial");
    IntegerCertificate cert;
    cert.alpha = alpha;
    cert.order = poly.size() - 1;
    cert.construction = "chebyshev(" + std::to_string(cert.order) + ")";
    cert.coeffs = cosine_expand(poly);
    cert.residual = std::sqrt(std::max(0.0, band_energy(cert.coeffs, (1.0 - alpha) / 2.0)));
    return cert;
}

// Exhaustive search for the integer polynomial of degree ≤ N with
// coefficients in [−coeff_bound, coeff_bound] minimizing sup|p| on
// [2cos(π(1−α)), 2] (the image of the complement band under 2cos2πt);
// first-found wins ties, scanning c_0 slowest.  The stored residual is the
// band energy of the expanded sequence, not the sup itself.
inline IntegerCertificate chebyshev_certificate(std::size_t N, double alpha,
                                                long long coeff_bound) {
    if (N < 1) throw usage_error("chebyshev_certificate: N must be at least 1");
    detail::require_alpha(alpha, "chebyshev_certificate");
    if (coeff_bound < 1)
        throw usage_error("chebyshev_certificate: coeff_bound must be at least 1");
    const double box = 2.0 * static_cast<double>(coeff_bound) + 1.0;
    if (N > 10 || std::pow(box, static_cast<double>(N + 1)) > 5e7)
        throw usage_error("chebyshev_certificate: search space too large for exhaustion "
                          "(N ≤ 10 and (2·bound+1)^{N+1} ≤ 5e7)");

    const double a = 2.0 * std::cos(M_PI * (1.0 - alpha));
    constexpr std::size_t kGrid = 257;
    std::vector<double> xs(kGrid);
    for (std::size_t i = 0; i < kGrid; ++i)
        xs[i] = a + (2.0 - a) * static_cast<double>(i) / static_cast<double>(kGrid - 1);

    std::vector<long long> c(N + 1, -coeff_bound);
    std::vector<long long> best;
    double best_sup = std::numeric_limits<double>::infinity();
    while (true) {
        if (!detail::all_zero(c)) {
            double sup = 0.0;
            for (double x : xs) {
                double v = 0.0;
                for (std::size_t deg = N + 1; deg-- > 0;) v = v * x + static_cast<double>(c[deg]);
                sup = std::max(sup, std::abs(v));
                if (sup >= best_sup) break;
            }
            if (sup < best_sup) {
                best_sup = sup;
                best = c;
            }
        }
        // odometer, last coefficient fastest so c_0 scans slowest
        std::size_t pos = N + 1;
        while (pos-- > 0) {
            if (c[pos] < coeff_bound) {
                ++c[pos];
                break;
            }
            c[pos] = -coeff_bound;
            if (pos == 0) {
                pos = std::numeric_limits<std::size_t>::max();
                break;
            }
        }
        if (pos == std::numeric_limits<std::size_t>::max()) break;
    }
    if (best.empty())
        throw usage_error("chebyshev_certificate: search exhausted with all-zero best; "
                          "raise coeff_bound");
    return chebyshev_certificate_from_poly(best, alpha);
}

struct SvpMethod {
    enum class Kind { bruteforce, lll } kind = Kind::bruteforce;
    long long bound = 3;
    double delta_reduction = 0.75;
};

inline SvpMethod svp_bruteforce(long long bound = 3) {
    return {SvpMethod::Kind::bruteforce, bound, 0.75};
}

inline SvpMethod svp_lll(double delta_reduction = 0.75) {
    return {SvpMethod::Kind::lll, 3, delta_reduction};
}

namespace detail {

// Candidate certificates with support ≤ N, compared under the same
// quadratic form the enumeration minimizes.  The explicit constructions
// often beat anything inside a small coefficient box, so they seed the
// incumbent; the prolate form is shift-invariant, so left-aligned embedding
// loses nothing.
inline std::pair<std::vector<long long>, double> svp_seeds(double alpha, std::size_t N) {
    std::vector<long long> best{1};
    double best_form = 1.0 - alpha;   // the unit vector
    auto consider = [&](const std::vector<long long>& v) {
        if (v.size() > N || all_zero(v)) return;
        ScalarSeq c(v.size());
        for (std::size_t k = 0; k < v.size(); ++k)
            c[k] = Scalar(static_cast<double>(v[k]), 0.0);
        double form = band_form(1.0 - alpha, c);
        if (form < best_form) {
            best_form = form;
            best = v;
        }
    };
    for (std::size_t m = 1; m + 1 <= N; ++m)
        consider(binomial_certificate(m, alpha).coeffs);
    for (std::size_t d = 1; 2 * d + 1 <= N; ++d)
        consider(chebyshev_certificate(d, alpha, 5).coeffs);
    return {best, best_form};
}

}

// Shortest nonzero integer vector of the prolate form ⟨Q_{1−α,N}·,·⟩.
// Bruteforce enumerates the coefficient box exactly and is seeded with the
// explicit constructions (which it must dominate); lll reports the shortest
// vector of a δ-reduced basis.  Either way the residual is recomputed from
// the quadratic form of the returned vector.
inline IntegerCertificate svp_certificate(double alpha, std::size_t N, SvpMethod method) {
    detail::require_alpha(alpha, "svp_certificate");
    if (N < 1) throw usage_error("svp_certificate: N must be at least 1");

    IntegerCertificate cert;
    cert.alpha = alpha;
    cert.order = N;

    if (method.kind == SvpMethod::Kind::bruteforce) {
        if (N > 14 || method.bound > 3 || method.bound < 1)
            throw usage_error("svp_certificate: bruteforce needs N ≤ 14 and bound in [1,3]");
        cert.construction = "svp_bruteforce";
        auto [seed, seed_form] = detail::svp_seeds(alpha, N);

        Mat Q(N, N);
        auto P = cached_prolate(1.0 - alpha, N);
        for (std::size_t i = 0; i < N * N; ++i) Q.a[i] = P->entries.a[i];
        for (std::size_t i = 0; i < N; ++i) Q(i, i) += 1e-12;

        EnumerationResult enu = enumerate_box(Q, method.bound, seed_form);
        cert.coeffs = enu.best.empty() ? seed : enu.best;
    } else {
        if (N > 512)
            throw usage_error("svp_certificate: lll needs N ≤ 512");
        cert.construction = "svp_lll";
        Mat Q(N, N);
        auto P = cached_prolate(1.0 - alpha, N);
        for (std::size_t i = 0; i < N * N; ++i) Q.a[i] = P->entries.a[i];
        for (std::size_t i = 0; i < N; ++i) Q(i, i) += 1e-12;
        LLLResult red = lll_reduce(Q, method.delta_reduction);
        cert.coeffs = red.shortest;
    }

    while (cert.coeffs.size() > 1 && cert.coeffs.back() == 0) cert.coeffs.pop_back();
    detail::require_nonzero(cert, "svp_certificate");
    cert.residual = detail::quadform_residual(alpha, cert.coeffs);
    return cert;
}

struct DeltaPoint {
    std::size_t N = 0;
    double best_residual = 0.0;
};

struct DeltaOptions {
    bool binomial = true;
    bool chebyshev = false;
    bool svp_lll = false;
    long long chebyshev_bound = 5;
};

// Best residual over the enabled constructions per window size, with the
// running minimum carried forward: zero-padding embeds every certificate of
// a smaller window, so the sequence is non-increasing by construction.
inline std::vector<DeltaPoint> delta_estimate(double alpha, const std::vector<std::size_t>& schedule,
                                              DeltaOptions opts = {}) {
    detail::require_alpha(alpha, "delta_estimate");
    if (schedule.empty()) throw usage_error("delta_estimate: empty schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw usage_error("delta_estimate: schedule must be increasing");

    std::vector<DeltaPoint> out;
    out.reserve(schedule.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t N : schedule) {
        best = std::min(best, std::sqrt(1.0 - alpha));   // the unit vector fits every window
        if (opts.binomial && N >= 2)
            best = std::min(best, binomial_certificate(N - 1, alpha).residual);
        if (opts.chebyshev) {
            std::size_t d = (N - 1) / 2;
            if (d >= 1)
                best = std::min(best, chebyshev_certificate(d, alpha, opts.chebyshev_bound).residual);
        }
        if (opts.svp_lll)
            best = std::min(best, svp_certificate(alpha, N, svp_lll()).residual);
        out.push_back({N, best});
    }
    return out;
}

}
