#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fold.hpp"
#include "frame_bounds.hpp"
#include "linalg.hpp"
#include "projection.hpp"
#include "separated_set.hpp"
#include "signal.hpp"

namespace modfold {

struct UnfoldConfig {
    double lambda = 0.5;
    double energy_bound = 1.0;          // a priori M ≥ ‖f‖
    double omega = 1.0;
    SeparatedSet X;
    double residual_tolerance = 1e-8;
    int max_peaks = -1;                 // −1: derive from peak_budget
    int correction_range = 0;           // 0: derive K = ⌈max|raw|/2λ⌉ + 1
};

struct RecoveryReport {
    BandlimitedSignal recovered;
    std::vector<double> coeffs;          // coordinates in the orthonormal atom basis
    std::vector<double> atom_grid;
    std::vector<long long> fold_counts;  // a, one entry per sample
    std::vector<std::size_t> peak_set;   // F = support(a)
    double residual = 0.0;               // ‖C f̂ − (samples + 2λa)‖₂
    double lipschitz_estimate = 0.0;     // A_{X∖F}^{−1/2}
    double reduced_frame_lower = 0.0;    // A_{X∖F}
    std::size_t peaks_used = 0;
    std::size_t max_peaks = 0;
    std::vector<std::string> warnings;
};

// ⌈λ^{−2}·B_X·M²⌉ with B_X estimated on the window; the ceiling is shaved
// by an ulp-scale epsilon so exact integers do not round up, and a vanishing
// bound (M → 0 or λ → ∞) budgets zero peaks.
inline int peak_budget(const UnfoldConfig& cfg) {
    if (!(cfg.lambda > 0.0)) throw usage_error("peak_budget: lambda must be positive");
    if (cfg.energy_bound < 0.0) throw usage_error("peak_budget: negative energy bound");
    double B = frame_bounds_estimate(cfg.X, cfg.omega).B;
    double x = B * cfg.energy_bound * cfg.energy_bound / (cfg.lambda * cfg.lambda);
    if (!(x > 1e-12)) return 0;
    return static_cast<int>(std::ceil(x - 1e-12));
}

inline FoldedSamples fold_samples(const BandlimitedSignal& f, const SeparatedSet& X,
                                  double lambda) {
    if (!(lambda > 0.0)) throw usage_error("fold_samples: lambda must be positive");
    FoldedSamples out;
    out.lambda = lambda;
    out.values.reserve(X.size());
    for (double x : X.points()) out.values.push_back(fold(eval_signal(f, x), lambda));
    return out;
}

namespace detail {

// Least-squares machinery over the window-interior Nyquist atoms
// e_i(y) = √Ω·sinc(Ω(y − t_i)) (orthonormal in PW_Ω), shared by the range
// test, the reconstruction, and the probe sampler.
struct AtomSystem {
    std::vector<double> grid;
    Mat phi;      // |X| × natoms, phi(k,i) = e_i(x_k)
    Mat chol;     // Cholesky of ΦᵀΦ
    double omega = 0.0;

    std::vector<double> solve_coeffs(const std::vector<double>& y) const {
        return cholesky_solve(chol, matvec_t(phi, y));
    }
    std::vector<double> ls_residual(const std::vector<double>& y) const {
        std::vector<double> fit = matvec(phi, solve_coeffs(y));
        std::vector<double> r(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) r[k] = y[k] - fit[k];
        return r;
    }
};

inline AtomSystem build_atom_system(const SeparatedSet& X, double omega) {
    AtomSystem sys;
    sys.omega = omega;
    sys.grid = interior_atom_grid(X, omega);
    const auto& pts = X.points();
    const std::size_t n = pts.size(), m = sys.grid.size();
    sys.phi = Mat(n, m);
    const double root_omega = std::sqrt(omega);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < m; ++i)
            sys.phi(k, i) = root_omega * sinc(omega * (pts[k] - sys.grid[i]));
    Mat S(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += sys.phi(k, i) * sys.phi(k, j);
            S(i, j) = s;
            S(j, i) = s;
        }
    sys.chol = cholesky(S, "unfold atom system");
    return sys;
}

inline BandlimitedSignal atoms_to_signal(const AtomSystem& sys, const std::vector<double>& c) {
    BandlimitedSignal f;
    f.omega = sys.omega;
    f.atoms.reserve(c.size());
    const double inv_root = 1.0 / std::sqrt(sys.omega);
    for (std::size_t i = 0; i < c.size(); ++i)
        f.atoms.push_back({sys.grid[i], Scalar(c[i] * inv_root, 0.0)});
    return f;
}

inline std::vector<double> real_parts(const ScalarSeq& values, const char* who) {
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k].imag() != 0.0)
            throw usage_error(std::string(who) + ": complex samples not supported in real mode");
        out[k] = values[k].real();
    }
    return out;
}

}

// Integer-unfolding by peak removal: rank the indices most inconsistent with
// the sampling range, then search integer corrections over the top-ranked
// pool by increasing support size until the corrected sequence passes the
// range test.  Uniform grids rank by |(I−P)c| localization; non-uniform
// ones by the least-squares residual entries.
inline RecoveryReport unfold(const FoldedSamples& samples, const UnfoldConfig& cfg) {
    if (samples.values.size() != cfg.X.size())
        throw usage_error("unfold: sample count must match X");
    if (samples.lambda != cfg.lambda)
        throw usage_error("unfold: lambda mismatch between samples and config");
    if (!(cfg.residual_tolerance > 0.0))
        throw usage_error("unfold: residual_tolerance must be positive");
    if (!(cfg.omega > 0.0)) throw usage_error("unfold: omega must be positive");

    const double lambda = cfg.lambda;
    const std::vector<double> raw = detail::real_parts(samples.values, "unfold");
    const std::size_t n = raw.size();

    double raw_norm = norm2(raw);
    double raw_inf = 0.0;
    for (double v : raw) raw_inf = std::max(raw_inf, std::abs(v));
    const double threshold = cfg.residual_tolerance * (1.0 + raw_norm);

    const int budget = cfg.max_peaks >= 0 ? cfg.max_peaks : peak_budget(cfg);
    long long K = cfg.correction_range > 0
                      ? cfg.correction_range
                      : static_cast<long long>(std::ceil(raw_inf / (2.0 * lambda))) + 1;

    detail::AtomSystem sys = detail::build_atom_system(cfg.X, cfg.omega);
    std::vector<double> r0 = sys.ls_residual(raw);

    RecoveryReport rep;
    rep.atom_grid = sys.grid;
    rep.max_peaks = static_cast<std::size_t>(budget);
    rep.fold_counts.assign(n, 0);

    std::vector<std::size_t> chosen;      // peak indices of the accepted correction
    std::vector<long long> chosen_a;
    bool accepted = norm2(r0) <= threshold;

    if (!accepted && budget > 0) {
        // ranking scores
        std::vector<double> score(n, 0.0);
        bool toeplitz_ranked = false;
        if (cfg.X.is_uniform()) {
            double beta = cfg.X.alpha() * cfg.omega;
            if (beta < 1.0) {
                ScalarSeq c(n);
                for (std::size_t k = 0; k < n; ++k) c[k] = Scalar(raw[k], 0.0);
                ScalarSeq pc = detail::toeplitz_apply(beta, c);
                for (std::size_t k = 0; k < n; ++k)
                    score[k] = std::abs(raw[k] - pc[k].real());
                toeplitz_ranked = true;
            }
        }
        if (!toeplitz_ranked)
            for (std::size_t k = 0; k < n; ++k) score[k] = std::abs(r0[k]);

        std::vector<std::size_t> pool(n);
        for (std::size_t k = 0; k < n; ++k) pool[k] = k;
        std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
            if (score[a] != score[b]) return score[a] > score[b];
            return a < b;
        });
        pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(budget)));

        // residual-projector columns for the pool and their pairwise dots,
        // so each candidate costs O(p²) instead of O(n)
        const std::size_t P = pool.size();
        std::vector<std::vector<double>> cols(P);
        for (std::size_t i = 0; i < P; ++i) {
            std::vector<double> e(n, 0.0);
            e[pool[i]] = 1.0;
            cols[i] = sys.ls_residual(e);
        }
        Mat coldot(P, P);
        std::vector<double> r0dot(P);
        for (std::size_t i = 0; i < P; ++i) {
            r0dot[i] = dot(r0, cols[i]);
            for (std::size_t j = 0; j <= i; ++j) {
                double d = dot(cols[i], cols[j]);
                coldot(i, j) = d;
                coldot(j, i) = d;
            }
        }
        const double r0sq = dot(r0, r0);

        double best_rsq = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> sub;   // positions into pool, increasing

        // all assignments a ∈ {−K..K}\{0} on the fixed subset, odometer order
        auto scan_subset = [&]() {
            const std::size_t p = sub.size();
            std::vector<long long> a(p, -K);
            while (true) {
                double rsq = r0sq;
                for (std::size_t i = 0; i < p; ++i) {
                    double ai = 2.0 * lambda * static_cast<double>(a[i]);
                    rsq += 2.0 * ai * r0dot[sub[i]];
                    for (std::size_t j = 0; j < p; ++j)
                        rsq += ai * 2.0 * lambda * static_cast<double>(a[j]) *
                               coldot(sub[i], sub[j]);
                }
                if (rsq <= threshold * threshold && rsq < best_rsq) {
                    best_rsq = rsq;
                    chosen.assign(sub.size(), 0);
                    chosen_a.assign(sub.size(), 0);
                    for (std::size_t i = 0; i < p; ++i) {
                        chosen[i] = pool[sub[i]];
                        chosen_a[i] = a[i];
                    }
                }
                std::size_t pos = p;
                while (pos-- > 0) {
                    ++a[pos];
                    if (a[pos] == 0) ++a[pos];   // zero duplicates a smaller subset
                    if (a[pos] <= K) break;
                    a[pos] = -K;
                    if (pos == 0) return;
                }
                if (p == 0) return;
            }
        };

        // subsets of the pool by increasing size, lexicographic within a size
        for (std::size_t p = 1; p <= P && !accepted; ++p) {
            sub.assign(p, 0);
            for (std::size_t i = 0; i < p; ++i) sub[i] = i;
            while (true) {
                scan_subset();
                std::size_t i = p;
                while (i-- > 0) {
                    if (sub[i] < P - (p - i)) {
                        ++sub[i];
                        for (std::size_t j = i + 1; j < p; ++j) sub[j] = sub[j - 1] + 1;
                        break;
                    }
                    if (i == 0) {
                        i = std::numeric_limits<std::size_t>::max();
                        break;
                    }
                }
                if (i == std::numeric_limits<std::size_t>::max()) break;
            }
            if (best_rsq < std::numeric_limits<double>::infinity()) accepted = true;
        }
    }

    if (!accepted) {
        double best = norm2(r0);
        throw numerical_error("unfold: no integer correction within max_peaks=" +
                              std::to_string(budget) + " meets tolerance (best residual " +
                              std::to_string(best) + " vs threshold " +
                              std::to_string(threshold) + "); energy bound likely violated");
    }

    std::vector<double> corrected = raw;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        rep.fold_counts[chosen[i]] = chosen_a[i];
        corrected[chosen[i]] += 2.0 * lambda * static_cast<double>(chosen_a[i]);
        rep.peak_set.push_back(chosen[i]);
    }
    std::sort(rep.peak_set.begin(), rep.peak_set.end());
    rep.peaks_used = rep.peak_set.size();

    rep.coeffs = sys.solve_coeffs(corrected);
    {
        std::vector<double> fit = matvec(sys.phi, rep.coeffs);
        double rsq = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double d = corrected[k] - fit[k];
            rsq += d * d;
        }
        rep.residual = std::sqrt(rsq);
    }
    rep.recovered = detail::atoms_to_signal(sys, rep.coeffs);

    SeparatedSet reduced = rep.peak_set.empty() ? cfg.X : cfg.X.without(rep.peak_set);
    FrameBounds fb = frame_bounds_estimate(reduced, cfg.omega);
    rep.reduced_frame_lower = fb.A;
    if (fb.A > 0.0) {
        rep.lipschitz_estimate = 1.0 / std::sqrt(fb.A);
    } else {
        rep.lipschitz_estimate = std::numeric_limits<double>::infinity();
        rep.warnings.push_back("frame lower bound vanished on the reduced sample set");
    }
    {
        double r = reduced.span() / 4.0;
        if (r > 0.0 && 2.0 * r <= reduced.span()) {
            DensityReport dr = density_report(reduced, r);
            if (dr.min_count_rate < cfg.omega)
                rep.warnings.push_back(
                    "degraded stability: reduced sampling density " +
                    std::to_string(dr.min_count_rate) + " below omega " +
                    std::to_string(cfg.omega) + " on the window");
        }
    }
    return rep;
}

struct StabilityRow {
    std::size_t trial = 0;
    double toral_dist = 0.0;
    double l2_error = 0.0;
    double ratio = 0.0;
    double lipschitz_estimate = 0.0;
    std::size_t peaks_used = 0;
};

struct StabilityTable {
    std::uint64_t seed = 0;
    std::vector<StabilityRow> rows;
};

// Seeded random pairs f, g in the M-ball drawn on the interior atoms; f's
// folded samples are unfolded and the observed ‖f̂ − g‖ is tabulated against
// the toral distance of the two folded sequences.
inline StabilityTable stability_probe(const UnfoldConfig& cfg, std::size_t trials,
                                      std::uint64_t rng_seed) {
    if (trials < 1) throw usage_error("stability_probe: trials must be at least 1");

    detail::AtomSystem sys = detail::build_atom_system(cfg.X, cfg.omega);
    const std::size_t m = sys.grid.size();
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.5, 1.0);

    auto draw = [&]() {
        std::vector<double> c(m);
        for (double& v : c) v = gauss(rng);
        double target = cfg.energy_bound * unit(rng);
        double s = target / norm2(c);
        for (double& v : c) v *= s;
        return c;
    };

    StabilityTable table;
    table.seed = rng_seed;
    table.rows.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> cf = draw(), cg = draw();
        FoldedSamples sf = fold_samples(detail::atoms_to_signal(sys, cf), cfg.X, cfg.lambda);
        FoldedSamples sg = fold_samples(detail::atoms_to_signal(sys, cg), cfg.X, cfg.lambda);
        RecoveryReport rec = unfold(sf, cfg);

        StabilityRow row;
        row.trial = t;
        row.toral_dist = toral_seq_dist(sf.values, sg.values, cfg.lambda);
        double esq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double d = rec.coeffs[i] - cg[i];
            esq += d * d;
        }
        row.l2_error = std::sqrt(esq);
        row.ratio = row.toral_dist > 0.0 ? row.l2_error / row.toral_dist
                                         : std::numeric_limits<double>::infinity();
        row.lipschitz_estimate = rec.lipschitz_estimate;
        row.peaks_used = rec.peaks_used;
        table.rows.push_back(row);
    }
    return table;
}

}
