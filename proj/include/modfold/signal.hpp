#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "fold.hpp"
#include "separated_set.hpp"

namespace modfold {

// sin(πt)/(πt) with the removable singularity filled in.
inline double sinc(double t) {
    double x = M_PI * t;
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

struct Atom {
    double center = 0.0;
    Scalar coeff{0.0, 0.0};
};

// Finite kernel expansion f(x) = Σ coeff_j · Ω·sinc(Ω(x − center_j)).
// The atom list is explicit (not a grid vector) so non-uniform synthesis
// is first-class.
struct BandlimitedSignal {
    double omega = 1.0;
    std::vector<Atom> atoms;
};

inline Scalar eval_signal(const BandlimitedSignal& f, double x) {
    Scalar acc{0.0, 0.0};
    for (const Atom& a : f.atoms)
        acc += a.coeff * (f.omega * sinc(f.omega * (x - a.center)));
    return acc;
}

struct FoldedSamples {
    double lambda = 0.0;
    ScalarSeq values;   // every component in [−λ, λ)
};

}
