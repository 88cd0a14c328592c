// Test-side oracles, deliberately independent of the library's Bregman/F-based
// implementation paths: textbook closed forms, quadrature, exact enumeration.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "expbandit/exp_family.hpp"

namespace oracles {

inline double beta_cdf(double a, double b, double x) { return boost::math::ibeta(a, b, x); }

inline double gamma_cdf(double shape, double rate, double x) {
    return x <= 0.0 ? 0.0 : boost::math::gamma_p(shape, rate * x);
}

// One-sample Kolmogorov-Smirnov statistic against an exact CDF.
inline double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double c = cdf(sample[i]);
        stat = std::fmax(stat, std::fmax(std::fabs((i + 1) / n - c), std::fabs(i / n - c)));
    }
    return stat;
}

// Textbook KL divergences in the conventional parametrization.
inline double kl_bernoulli(double p, double q) {
    return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}
inline double kl_gaussian(double m1, double m2, double sigma2) {
    return (m1 - m2) * (m1 - m2) / (2.0 * sigma2);
}
inline double kl_gamma_rate(double k, double r1, double r2) {
    return k * (std::log(r1 / r2) + r2 / r1 - 1.0);
}
inline double kl_poisson(double l1, double l2) {
    return l1 * std::log(l1 / l2) + l2 - l1;
}
inline double kl_pareto(double a1, double a2) {  // tail indices, same xm
    return std::log(a1 / a2) + a2 / a1 - 1.0;
}
inline double kl_weibull_rate(double k, double r1, double r2) {
    return k * std::log(r1 / r2) + std::pow(r2 / r1, k) - 1.0;
}

// KL between two members of `fam` through the conventional parametrization;
// the implementation route goes through F instead.
inline double closed_form_kl(const expbandit::Family& fam, double theta1, double theta2) {
    using expbandit::FamilyKind;
    double l1 = fam.lambda_from_theta(theta1);
    double l2 = fam.lambda_from_theta(theta2);
    switch (fam.kind()) {
        case FamilyKind::bernoulli: return kl_bernoulli(l1, l2);
        case FamilyKind::gaussian: return kl_gaussian(l1, l2, fam.nuisance());
        case FamilyKind::gamma: return kl_gamma_rate(fam.nuisance(), l1, l2);
        case FamilyKind::poisson: return kl_poisson(l1, l2);
        case FamilyKind::pareto: return kl_pareto(l1, l2);
        case FamilyKind::weibull: return kl_weibull_rate(fam.nuisance(), l1, l2);
    }
    throw std::logic_error("unknown family kind");
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double stat = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        stat = std::fmax(stat, std::fabs(i / na - j / nb));
    }
    return stat;
}

inline double central_diff1(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}
inline double central_diff2(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Adaptive Simpson quadrature.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50);
}

inline double binom_pmf(std::int64_t n, std::int64_t x, double p) {
    double logc = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
    return std::exp(logc + x * std::log(p) + (n - x) * std::log1p(-p));
}

// P(|X/n - p| >= delta) for X ~ Bin(n, p), with the deviation test evaluated
// in the same double arithmetic the Monte Carlo estimator uses.
inline double binom_two_sided_tail(std::int64_t n, double p, double delta) {
    double total = 0.0;
    for (std::int64_t x = 0; x <= n; ++x) {
        double dev = std::fabs(static_cast<double>(x) / static_cast<double>(n) - p);
        if (dev >= delta) total += binom_pmf(n, x, p);
    }
    return total;
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;       // unbiased
    double fourth = 0.0;    // central
    std::size_t n = 0;
    double se_mean() const { return std::sqrt(var / static_cast<double>(n)); }
    double se_var() const {
        return std::sqrt((fourth - var * var) / static_cast<double>(n));
    }
};

inline Moments moments(std::span<const double> xs) {
    Moments m;
    m.n = xs.size();
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(m.n);
    double s2 = 0.0, s4 = 0.0;
    for (double x : xs) {
        double d = x - m.mean;
        s2 += d * d;
        s4 += d * d * d * d;
    }
    m.var = s2 / static_cast<double>(m.n - 1);
    m.fourth = s4 / static_cast<double>(m.n);
    return m;
}

}  // namespace oracles
