#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "separated_set.hpp"
#include "signal.hpp"

namespace modfold {

// Gram of the reproducing kernels at the window points:
// G_{jk} = ⟨k_{x_j}, k_{x_k}⟩ = Ω·sinc(Ω(x_j − x_k)).
inline Mat gram(const SeparatedSet& X, double omega) {
    if (X.size() == 0) throw usage_error("gram: empty window");
    if (!(omega > 0.0)) throw usage_error("gram: omega must be positive");
    const auto& pts = X.points();
    const std::size_t n = pts.size();
    Mat G(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k <= j; ++k) {
            double v = omega * sinc(omega * (pts[j] - pts[k]));
            G(j, k) = v;
            G(k, j) = v;
        }
    return G;
}

inline ScalarSeq analyze(const BandlimitedSignal& f, const SeparatedSet& X) {
    ScalarSeq out(X.size());
    const auto& pts = X.points();
    for (std::size_t k = 0; k < pts.size(); ++k) out[k] = eval_signal(f, pts[k]);
    return out;
}

// C*c = Σ c_k k_{x_k}; atoms carry the kernel coefficients directly.
inline BandlimitedSignal synthesize(const ScalarSeq& c, const SeparatedSet& X, double omega) {
    if (c.size() != X.size())
        throw usage_error("synthesize: coefficient/window length mismatch");
    if (!(omega > 0.0)) throw usage_error("synthesize: omega must be positive");
    BandlimitedSignal f;
    f.omega = omega;
    f.atoms.reserve(c.size());
    const auto& pts = X.points();
    for (std::size_t k = 0; k < c.size(); ++k)
        f.atoms.push_back({pts[k], c[k]});
    return f;
}

// ‖f‖²_{L²} from the Gram of the signal's own atoms (exact for the stored
// expansion, no quadrature involved).
inline double signal_energy_sq(const BandlimitedSignal& f) {
    const std::size_t n = f.atoms.size();
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            double g = f.omega * sinc(f.omega * (f.atoms[j].center - f.atoms[k].center));
            s += g * (f.atoms[j].coeff.real() * f.atoms[k].coeff.real() +
                      f.atoms[j].coeff.imag() * f.atoms[k].coeff.imag());
        }
    return s < 0.0 ? 0.0 : s;
}

inline double signal_norm(const BandlimitedSignal& f) { return std::sqrt(signal_energy_sq(f)); }

inline void export_gram_csv(const Mat& G, double omega, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw usage_error("export_gram_csv: cannot open " + path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "# gram N=%zu omega=%.12g\n", G.rows, omega);
    out << buf;
    for (std::size_t i = 0; i < G.rows; ++i) {
        for (std::size_t j = 0; j < G.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", G(i, j));
            out << buf << (j + 1 < G.cols ? "," : "\n");
        }
    }
}

}
