#pragma once

#include <cstdint>

#include "expbandit/exp_family.hpp"
#include "expbandit/rng.hpp"

namespace expbandit {

// Sufficient-statistic summary of everything an arm has observed:
// n observations with running sum s = sum_i T(y_i). Together with the
// family this pins down the Jeffreys posterior
//   pi(theta | data) ∝ sqrt(F''(theta)) exp(theta s - n F(theta)).
struct ArmPosterior {
    std::int64_t n = 0;
    double s = 0.0;

    ArmPosterior updated(const Family& fam, double x) const {
        return {n + 1, s + fam.suff_stat(x)};
    }

    friend bool operator==(const ArmPosterior&, const ArmPosterior&) = default;
};

// Smallest n for which the Jeffreys posterior is integrable: 0 for Bernoulli
// (the Beta(1/2,1/2) prior is already proper), 1 for every other family.
int properness_threshold(const Family& fam);

// log pi(theta | n, s) up to an additive constant:
//   0.5 ln F''(theta) + theta s - n F(theta).
// Throws std::runtime_error("posterior improper ...") below the properness
// threshold or when a degenerate s makes the posterior non-integrable.
double log_posterior_unnorm(const Family& fam, const ArmPosterior& post, double theta);

// Exact draw of theta from the Jeffreys posterior via the conjugate form in
// the lambda parametrization:
//   bernoulli  lambda ~ Beta(1/2 + s, 1/2 + n - s)
//   gaussian   lambda ~ Normal(s/n, sigma2/n)
//   gamma(k)   lambda ~ Gamma(k n, s)
//   poisson    lambda ~ Gamma(1/2 + s, n)
//   pareto     lambda ~ Gamma(n, s - n ln xm)
//   weibull(k) lambda^k ~ Gamma(n, s)
double sample_conjugate(const Family& fam, const ArmPosterior& post, RandomStream& rng);

struct MhConfig {
    int burn_in = 128;           // steps per round, all discarded
    double step_scale = 2.4;     // proposal sd in units of the Laplace sd at the start point
    int max_adapt_rounds = 3;    // halve/double the scale between rounds
};

// Approximate draw of theta via random-walk Metropolis on the natural
// parameter. The chain starts at the likelihood maximizer (F')^{-1}(s/n)
// (pulled inside the attainable range when s/n sits on its boundary) with a
// Gaussian proposal scaled by the local curvature, and the step is adapted
// toward an acceptance rate in [0.2, 0.5]. One fresh short chain per draw.
double sample_mh(const Family& fam, const ArmPosterior& post, const MhConfig& cfg,
                 RandomStream& rng);

}  // namespace expbandit
