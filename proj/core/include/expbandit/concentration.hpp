#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expbandit/exp_family.hpp"
#include "expbandit/posterior.hpp"

namespace expbandit {

// Monte Carlo verification of the sufficient-statistic tail bound
//   P(|mean of T over u draws - F'(theta)| >= delta) <= 2 exp(-u Ktilde(theta, delta))
// and of the conditional posterior tail decay rate
//   (1 - delta C2) K(theta, mu^{-1}(mu + delta_mean)).
struct LabConfig {
    Family family;
    double theta;
    double delta;        // sufficient-statistic deviation
    double mean_shift;   // mean-space deviation of the posterior tail
    std::vector<std::int64_t> sample_sizes;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    int posterior_draws = 1000;  // per kept dataset
    int threads = 0;             // 0 = hardware concurrency

    // Validates domains and the admissibility condition 1 - delta*C2 > 0.
    LabConfig(Family fam, double theta, double delta, double mean_shift,
              std::vector<std::int64_t> sample_sizes, std::int64_t trials, std::uint64_t seed);
};

struct TailEstimate {
    std::int64_t u = 0;
    double empirical_prob = 0.0;
    double bound = 0.0;            // tail bound (Chernoff) or decay rate (posterior)
    std::int64_t trials_used = 0;  // datasets behind empirical_prob
    std::int64_t samples = 0;      // binary samples behind empirical_prob
    double event_pass_fraction = 1.0;
};

// Reciprocal of the smallest KL-to-distance ratio on {mu(theta') >= mu + shift}:
//   C2^{-1} = (F(theta_shift) - F(theta)) / (theta_shift - theta) - F'(theta),
// with theta_shift = mu^{-1}(mu(theta) + mean_shift). Positive by strict convexity.
double c2_constant(const Family& fam, double theta, double mean_shift);

// The interval {theta' : K(theta, theta') <= eps}, clamped to the natural
// domain when the ball escapes it.
Interval kl_ball(const Family& fam, double theta, double eps);

// True iff some observation has density >= L(theta) = min(sup_x p(x|theta), 1)/2
// and the leave-one-out mean of T over the remaining points deviates from
// F'(theta) by at most delta. The scan takes the first qualifying index; a
// single observation leaves an empty leave-one-out average, which counts as
// zero deviation.
bool event_check(const Family& fam, double theta, double delta, std::span<const double> data);

// For each u: empirical P(|mean of T - F'(theta)| >= delta) over cfg.trials
// datasets of size u, against the bound 2 exp(-u * chernoff_rate).
std::vector<TailEstimate> suffstat_tail_experiment(const LabConfig& cfg);

// For each u: over datasets passing event_check, the mean conditional
// probability that a posterior draw's mean exceeds mu + mean_shift, paired
// with the guaranteed decay rate (1 - delta C2) K(theta, mu^{-1}(mu + shift)).
// Rejects configurations where fewer than 10% of datasets pass the event.
std::vector<TailEstimate> posterior_tail_experiment(const LabConfig& cfg);

// Least-squares slope of -ln(empirical) against u, restricted to estimates
// backed by at least min_hits positive samples (empirical * samples).
double fit_decay_slope(std::span<const TailEstimate> estimates, double min_hits = 10.0);

}  // namespace expbandit
