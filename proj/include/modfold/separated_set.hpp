#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace modfold {

struct DensityReport {
    double min_count_rate = 0.0;
    double separation = 0.0;
};

// Ordered, uniformly separated sampling locations.  Uniform mode keeps the
// generating spacing alpha and index range so lattice structure survives
// serialization round trips; explicit mode stores raw points.
class SeparatedSet {
public:
    static SeparatedSet uniform(double alpha, std::int64_t k_first, std::int64_t k_last) {
        if (!(alpha > 0.0))
            throw usage_error("SeparatedSet: alpha must be positive");
        if (k_last < k_first)
            throw usage_error("SeparatedSet: empty index range");
        SeparatedSet s;
        s.uniform_ = true;
        s.alpha_ = alpha;
        s.k_first_ = k_first;
        s.k_last_ = k_last;
        s.points_.reserve(static_cast<std::size_t>(k_last - k_first + 1));
        for (std::int64_t k = k_first; k <= k_last; ++k)
            s.points_.push_back(alpha * static_cast<double>(k));
        s.separation_ = alpha;
        return s;
    }

    static SeparatedSet from_points(std::vector<double> pts) {
        if (pts.empty())
            throw usage_error("SeparatedSet: no points");
        for (double p : pts)
            if (!std::isfinite(p))
                throw usage_error("SeparatedSet: non-finite point");
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < pts.size(); ++i) {
            double gap = pts[i] - pts[i - 1];
            if (!(gap > 0.0))
                throw usage_error("SeparatedSet: points must be strictly increasing");
            sep = std::min(sep, gap);
        }
        if (pts.size() == 1) sep = 1.0;
        SeparatedSet s;
        s.uniform_ = false;
        s.points_ = std::move(pts);
        s.separation_ = sep;
        return s;
    }

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double separation() const { return separation_; }
    bool is_uniform() const { return uniform_; }
    double alpha() const {
        if (!uniform_) throw usage_error("SeparatedSet: not in uniform mode");
        return alpha_;
    }
    std::int64_t k_first() const { return k_first_; }
    std::int64_t k_last() const { return k_last_; }
    double span() const { return points_.back() - points_.front(); }

    // Removes points by index; the result is always an explicit-mode set.
    SeparatedSet without(const std::vector<std::size_t>& drop) const {
        std::vector<bool> gone(points_.size(), false);
        for (std::size_t i : drop) {
            if (i >= points_.size())
                throw usage_error("SeparatedSet: removal index out of range");
            gone[i] = true;
        }
        std::vector<double> keep;
        keep.reserve(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (!gone[i]) keep.push_back(points_[i]);
        if (keep.empty())
            throw usage_error("SeparatedSet: removal leaves no points");
        return from_points(std::move(keep));
    }

private:
    bool uniform_ = false;
    double alpha_ = 0.0;
    std::int64_t k_first_ = 0, k_last_ = 0;
    std::vector<double> points_;
    double separation_ = 0.0;
};

// min over window centers t of #(X ∩ [t−r, t+r]) / 2r, closed windows,
// centers swept on a grid of step separation/2 across the span.
inline DensityReport density_report(const SeparatedSet& X, double r) {
    if (!(r > 0.0))
        throw usage_error("density_report: r must be positive");
    const auto& pts = X.points();
    const double lo = pts.front(), hi = pts.back();
    if (2.0 * r > (hi - lo))
        throw usage_error("density_report: window exceeds the span of X");
    const double step = X.separation() / 2.0;
    const double t_first = lo + r, t_last = hi - r;
    const auto count_in = [&](double t) {
        auto a = std::lower_bound(pts.begin(), pts.end(), t - r - 1e-12);
        auto b = std::upper_bound(pts.begin(), pts.end(), t + r + 1e-12);
        return static_cast<double>(b - a);
    };
    double min_rate = std::numeric_limits<double>::infinity();
    const auto n_steps = static_cast<std::int64_t>(std::floor((t_last - t_first) / step + 1e-9));
    for (std::int64_t i = 0; i <= n_steps; ++i) {
        double t = t_first + step * static_cast<double>(i);
        min_rate = std::min(min_rate, count_in(t) / (2.0 * r));
    }
    min_rate = std::min(min_rate, count_in(t_last) / (2.0 * r));
    return {min_rate, X.separation()};
}

}
