#include "expbandit/posterior.hpp"

#include <cmath>
#include <stdexcept>

namespace expbandit {

namespace {

[[noreturn]] void fail_improper(const char* detail) {
    throw std::runtime_error(std::string("posterior improper: ") + detail);
}

// Rate of the conjugate Gamma posterior; > 0 almost surely once n >= 1.
double pareto_rate(const Family& fam, const ArmPosterior& post) {
    double rate = post.s - static_cast<double>(post.n) * std::log(fam.nuisance());
    if (!(rate > 0.0)) fail_improper("pareto requires s - n ln(xm) > 0");
    return rate;
}

void require_proper(const Family& fam, const ArmPosterior& post) {
    if (post.n < properness_threshold(fam)) fail_improper("too few observations");
    switch (fam.kind()) {
        case FamilyKind::gamma:
        case FamilyKind::weibull:
            if (post.n >= 1 && !(post.s > 0.0)) fail_improper("requires s > 0");
            break;
        case FamilyKind::pareto:
            if (post.n >= 1) pareto_rate(fam, post);
            break;
        default: break;
    }
}

}  // namespace

int properness_threshold(const Family& fam) {
    return fam.kind() == FamilyKind::bernoulli ? 0 : 1;
}

double log_posterior_unnorm(const Family& fam, const ArmPosterior& post, double theta) {
    require_proper(fam, post);
    double n = static_cast<double>(post.n);
    return 0.5 * std::log(fam.log_partition_d2(theta)) + theta * post.s -
           n * fam.log_partition(theta);
}

double sample_conjugate(const Family& fam, const ArmPosterior& post, RandomStream& rng) {
    require_proper(fam, post);
    double n = static_cast<double>(post.n);
    double s = post.s;
    switch (fam.kind()) {
        case FamilyKind::bernoulli:
            return fam.theta_from_lambda(rng.beta(0.5 + s, 0.5 + n - s));
        case FamilyKind::gaussian:
            return fam.theta_from_lambda(rng.normal(s / n, std::sqrt(fam.nuisance() / n)));
        case FamilyKind::gamma:
            return fam.theta_from_lambda(rng.gamma(fam.nuisance() * n, s));
        case FamilyKind::poisson:
            return fam.theta_from_lambda(rng.gamma(0.5 + s, n));
        case FamilyKind::pareto:
            return fam.theta_from_lambda(rng.gamma(n, pareto_rate(fam, post)));
        case FamilyKind::weibull:
            // u = lambda^k = -theta is Gamma(n, s) distributed
            return -rng.gamma(n, s);
    }
    throw std::logic_error("unknown family kind");
}

double sample_mh(const Family& fam, const ArmPosterior& post, const MhConfig& cfg,
                 RandomStream& rng) {
    require_proper(fam, post);
    if (cfg.burn_in < 1 || !(cfg.step_scale > 0.0) || cfg.max_adapt_rounds < 0)
        throw std::invalid_argument("invalid MhConfig");

    Interval range = fam.suffstat_mean_range();
    double n = std::fmax(1.0, static_cast<double>(post.n));
    double m = post.n > 0 ? post.s / static_cast<double>(post.n)
                          : 0.5 * (range.lo + range.hi);  // prior-only case (bernoulli)
    if (!range.contains(m)) m = (post.s + 0.5) / (static_cast<double>(post.n) + 1.0);
    if (!range.contains(m)) throw std::logic_error("cannot place MH start inside mean range");

    Interval dom = fam.natural_domain();
    double anchor = std::isfinite(dom.hi) ? dom.hi - 1.0
                                          : (std::isfinite(dom.lo) ? dom.lo + 1.0 : 0.0);
    auto start = detail::invert_increasing([&](double t) { return fam.log_partition_d1(t); }, m,
                                           dom, anchor);
    if (!start) throw std::runtime_error("MH start point not found");
    double theta = *start;
    auto target = [&](double t) {
        if (!dom.contains(t)) return -std::numeric_limits<double>::infinity();
        return log_posterior_unnorm(fam, post, t);
    };

    double scale = cfg.step_scale / std::sqrt(n * fam.log_partition_d2(theta));
    double lp = target(theta);
    if (!std::isfinite(lp)) throw std::runtime_error("non-finite log-density at MH start");

    for (int round = 0; round <= cfg.max_adapt_rounds; ++round) {
        int accepted = 0;
        for (int step = 0; step < cfg.burn_in; ++step) {
            double proposal = theta + scale * rng.normal();
            double lpp = target(proposal);
            if (std::isnan(lpp)) throw std::runtime_error("non-finite log-density in MH chain");
            if (std::log(rng.uniform()) < lpp - lp) {
                theta = proposal;
                lp = lpp;
                ++accepted;
            }
        }
        if (round == cfg.max_adapt_rounds) break;
        double rate = static_cast<double>(accepted) / cfg.burn_in;
        if (rate < 0.2)
            scale *= 0.5;
        else if (rate > 0.5)
            scale *= 2.0;
        else
            break;
    }
    return theta;
}

}  // namespace expbandit
