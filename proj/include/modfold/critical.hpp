#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "certificates.hpp"
#include "errors.hpp"
#include "fold.hpp"
#include "projection.hpp"
#include "quadrature.hpp"
#include "signal.hpp"

namespace modfold {

// f = α·Σ_k m_k·sinc(· − αk) built from a certificate: m is the certificate
// sequence re-centered and sign-twisted, so its spectrum sits inside the
// sampling band and the samples land within ‖n − Pn‖ of the integers m.
struct CriticalFunction {
    BandlimitedSignal signal;
    std::vector<double> samples;        // (P_α m)_j across the window
    std::vector<double> residuals;      // samples minus the integer pattern
    std::int64_t first_sample_index = 0;
    double folded_norm = 0.0;           // ‖𝓜_λ(samples)‖₂ on the window
    double energy = 0.0;                // ‖f‖_{L²}
};

namespace detail {

inline bool is_alternating_binomial(const std::vector<long long>& coeffs) {
    const std::size_t n = coeffs.size();
    if (n < 2 || n > 67) return false;
    const std::size_t N = n - 1;
    std::vector<long long> row(n, 0);
    row[0] = 1;
    for (std::size_t i = 1; i <= N; ++i)
        for (std::size_t k = i; k >= 1; --k) row[k] += row[k - 1];
    for (std::size_t k = 0; k <= N; ++k) {
        long long want = ((N - k) % 2 == 0) ? row[k] : -row[k];
        if (coeffs[k] != want) return false;
    }
    return true;
}

// 𝓜_λ(integer_part + small_part) with the integer part reduced mod 2λ in
// extended precision first, so the huge and the tiny summand never meet in
// one double addition.
inline double fold_split(double integer_part, double small_part, double lambda) {
    const long double period = 2.0L * static_cast<long double>(lambda);
    const long double q = static_cast<long double>(integer_part) / period + 0.5L;
    const long double frac = q - std::floor(q);
    double wrapped = static_cast<double>(period * (frac - 0.5L));
    if (wrapped >= lambda) wrapped = -lambda;
    return fold_real(wrapped + small_part, lambda);
}

}

inline CriticalFunction critical_function(const IntegerCertificate& cert, double lambda,
                                          std::size_t window = 0) {
    detail::require_nonzero(cert, "critical_function");
    detail::require_alpha(cert.alpha, "critical_function");
    if (!(lambda > 0.0))
        throw usage_error("critical_function: lambda must be positive");
    if (!cert.coeffs_imag.empty() && !detail::all_zero(cert.coeffs_imag))
        throw usage_error("critical_function: real mode requires zero imaginary parts");
    if (detail::all_zero(cert.coeffs))
        throw usage_error("critical_function: zero certificate");

    std::size_t s0 = cert.coeffs.size(), s1 = 0;
    for (std::size_t k = 0; k < cert.coeffs.size(); ++k)
        if (cert.coeffs[k] != 0) {
            if (s0 == cert.coeffs.size()) s0 = k;
            s1 = k;
        }
    const std::size_t L = s1 - s0 + 1;

    if (window == 0) window = std::max<std::size_t>(512, 4 * L);
    if (window < 4 * L)
        throw usage_error("critical_function: guard band too small (window < 4×support)");

    // re-center (shift L/2) and twist: m_k = (−1)^k n_{k+shift}
    const auto shift = static_cast<std::int64_t>(L / 2);
    std::vector<double> m(L);
    double m_inf = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
        auto k = static_cast<std::int64_t>(j) - shift;
        double v = static_cast<double>(cert.coeffs[s0 + j]);
        if (std::llabs(k) % 2 == 1) v = -v;
        m[j] = v;
        m_inf = std::max(m_inf, std::abs(v));
    }

    const double alpha = cert.alpha;
    CriticalFunction cf;
    cf.signal.omega = 1.0;
    cf.signal.atoms.reserve(L);
    for (std::size_t j = 0; j < L; ++j) {
        auto k = static_cast<std::int64_t>(j) - shift;
        cf.signal.atoms.push_back({alpha * static_cast<double>(k), Scalar(alpha * m[j], 0.0)});
    }

    ScalarSeq padded(window, Scalar{0.0, 0.0});
    const std::size_t start = (window - L) / 2;
    for (std::size_t j = 0; j < L; ++j) padded[start + j] = Scalar(m[j], 0.0);

    cf.first_sample_index = -(static_cast<std::int64_t>(start) + shift);
    cf.samples.resize(window);
    cf.residuals.resize(window);

    if (detail::is_alternating_binomial(cert.coeffs)) {
        // ĝ(t) = ±(2cos πt)^N·e^{−2πit(start+N/2)}, so the out-of-band part
        // of each sample is an integral of a small positive envelope; the
        // direct coefficient sum would cancel ~2^N down to this size and
        // drown it in roundoff
        const std::size_t N = L - 1;
        const double sgn =
            ((static_cast<std::size_t>(shift) + N) % 2 == 0) ? 1.0 : -1.0;
        const double t_lo = alpha / 2.0, t_hi = 0.5;
        const double center_pos = static_cast<double>(start) + static_cast<double>(N) / 2.0;
        const double max_theta =
            std::max(center_pos, static_cast<double>(window - 1) - center_pos);
        const std::size_t panels = std::max<std::size_t>(
            {16, N, static_cast<std::size_t>(std::ceil((t_hi - t_lo) * max_theta)) + 2});
        static const QuadRule rule = gauss_legendre(16);
        const double h = (t_hi - t_lo) / static_cast<double>(panels);
        std::vector<double> ts, ws;
        ts.reserve(panels * rule.nodes.size());
        ws.reserve(panels * rule.nodes.size());
        for (std::size_t p = 0; p < panels; ++p) {
            const double mid = t_lo + h * (static_cast<double>(p) + 0.5), half = 0.5 * h;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double t = mid + half * rule.nodes[q];
                ts.push_back(t);
                ws.push_back(half * rule.weights[q] *
                             std::pow(2.0 * std::cos(M_PI * t), static_cast<double>(N)));
            }
        }
        for (std::size_t j = 0; j < window; ++j) {
            const double theta = static_cast<double>(j) - center_pos;
            double s = 0.0;
            for (std::size_t q = 0; q < ts.size(); ++q)
                s += ws[q] * std::cos(2.0 * M_PI * theta * ts[q]);
            cf.residuals[j] = -2.0 * sgn * s;
            cf.samples[j] = padded[j].real() + cf.residuals[j];
        }
    } else {
        ProjectionResult proj = projection_apply(projection_operator(alpha, window), padded);
        for (std::size_t j = 0; j < window; ++j) {
            cf.samples[j] = proj.values[j].real();
            cf.residuals[j] = cf.samples[j] - padded[j].real();
        }
    }

    double folded_sq = 0.0;
    const double tol = 1e-8 * (1.0 + m_inf);
    for (std::size_t j = 0; j < window; ++j) {
        double x = alpha * static_cast<double>(cf.first_sample_index + static_cast<std::int64_t>(j));
        double direct = eval_signal(cf.signal, x).real();
        if (std::abs(direct - cf.samples[j]) > tol)
            throw internal_error("critical_function: synthesis/projection mismatch " +
                                 std::to_string(std::abs(direct - cf.samples[j])) +
                                 " at sample " + std::to_string(j));
        double f = detail::fold_split(padded[j].real(), cf.residuals[j], lambda);
        folded_sq += f * f;
    }
    cf.folded_norm = std::sqrt(folded_sq);
    cf.energy = std::sqrt(std::max(0.0, alpha * band_form(alpha, padded)));
    return cf;
}

// Searches the binomial schedule for g = 2λ·f_N whose folded samples drop
// below the target while the energy stays above the floor.  Exhaustion is
// reported, never silently absorbed.
struct WitnessReport {
    IntegerCertificate certificate;
    CriticalFunction critical;      // the f_N reached
    std::size_t order = 0;
    double witness_folded_norm = 0.0;   // ‖𝓜_λ(2λ·samples)‖₂
    double witness_energy = 0.0;        // 2λ·‖f_N‖
    bool met_target = false;
    double target_folded_norm = 0.0;
    double floor_energy = 0.0;
};

inline WitnessReport instability_witness(double alpha, double lambda, double target_folded_norm,
                                         double floor_energy, std::size_t max_order = 64) {
    detail::require_alpha(alpha, "instability_witness");
    if (!(lambda > 0.0))
        throw usage_error("instability_witness: lambda must be positive");
    if (!(target_folded_norm > 0.0) || !(floor_energy > 0.0))
        throw usage_error("instability_witness: target and floor must be positive");
    if (max_order < 1 || max_order > 66)
        throw usage_error("instability_witness: max_order must lie in [1, 66]");

    // ranking for the exhausted-schedule report: meeting the energy floor
    // outranks folded-norm progress alone
    auto better = [](const WitnessReport& a, const WitnessReport& b) {
        bool ea = a.witness_energy > a.floor_energy;
        bool eb = b.witness_energy > b.floor_energy;
        if (ea != eb) return ea;
        return a.witness_folded_norm < b.witness_folded_norm;
    };

    WitnessReport best;
    bool have_best = false;
    for (std::size_t N = 1; N <= max_order; ++N) {
        IntegerCertificate cert = binomial_certificate(N, alpha);
        CriticalFunction cf = critical_function(cert, lambda);
        // 2λ·(integer pattern) folds to zero exactly, leaving 2λ·residuals
        double folded_sq = 0.0;
        for (double r : cf.residuals) {
            double f = fold_real(2.0 * lambda * r, lambda);
            folded_sq += f * f;
        }
        WitnessReport rep;
        rep.certificate = std::move(cert);
        rep.order = N;
        rep.witness_folded_norm = std::sqrt(folded_sq);
        rep.witness_energy = 2.0 * lambda * cf.energy;
        rep.target_folded_norm = target_folded_norm;
        rep.floor_energy = floor_energy;
        rep.met_target = rep.witness_folded_norm < target_folded_norm &&
                         rep.witness_energy > floor_energy;
        if (rep.met_target) {
            rep.critical = std::move(cf);
            return rep;
        }
        if (!have_best || better(rep, best)) {
            rep.critical = std::move(cf);
            best = std::move(rep);
            have_best = true;
        }
    }
    return best;
}

}
