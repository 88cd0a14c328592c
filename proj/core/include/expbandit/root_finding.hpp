#pragma once

#include <cmath>
#include <limits>
#include <optional>

namespace expbandit {

// Open interval, possibly half-infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return x > lo && x < hi; }
    double width() const { return hi - lo; }
};

namespace detail {

inline constexpr double kRootTol = 1e-12;  // absolute tolerance on the objective
inline constexpr int kRootMaxIter = 200;

// Step from x toward an open interval endpoint: geometric approach when the
// endpoint is finite, doubling stride otherwise.
inline double step_toward(double x, double bound, double& stride) {
    if (std::isinf(bound)) {
        double next = x + (bound > 0 ? stride : -stride);
        stride *= 2.0;
        return next;
    }
    return 0.5 * (x + bound);
}

// Solves f(x) = target for increasing continuous f on the open interval dom,
// expanding a bracket outward from anchor. Returns nullopt when target is not
// attained inside dom.
template <class F>
std::optional<double> invert_increasing(F&& f, double target, Interval dom, double anchor) {
    double lo = anchor, hi = anchor;
    double flo = f(lo), fhi = flo;

    double stride = std::fmax(1.0, 0.5 * std::fabs(anchor));
    for (int i = 0; fhi < target; ++i) {
        if (i >= kRootMaxIter) return std::nullopt;
        lo = hi;
        flo = fhi;
        hi = step_toward(hi, dom.hi, stride);
        if (!(hi > lo)) return std::nullopt;  // pinned against the endpoint
        fhi = f(hi);
    }
    stride = std::fmax(1.0, 0.5 * std::fabs(anchor));
    for (int i = 0; flo > target; ++i) {
        if (i >= kRootMaxIter) return std::nullopt;
        hi = std::fmin(hi, lo);
        lo = step_toward(lo, dom.lo, stride);
        if (!(lo < hi)) return std::nullopt;
        flo = f(lo);
    }

    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < kRootMaxIter; ++i) {
        mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (std::fabs(fm - target) <= kRootTol) break;
        if (fm < target)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

}  // namespace detail
}  // namespace expbandit
