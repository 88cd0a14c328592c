#pragma once

#include <string>
#include <string_view>

#include "expbandit/rng.hpp"
#include "expbandit/root_finding.hpp"

namespace expbandit {

enum class FamilyKind { bernoulli, gaussian, gamma, poisson, pareto, weibull };

// One-dimensional canonical exponential family in natural-parameter form,
//   p(x | theta) = A(x) exp(T(x) theta - F(theta)),
// with closed forms for the log-partition F, its derivatives, the mean map
// and its inverse, KL divergence (Bregman form of F) and Chernoff rates.
//
// Two theta intervals are exposed. natural_domain() is where the density
// exists (F finite and strictly convex); theta_domain() additionally
// restricts to finite reward means, which for Pareto cuts the tail index to
// lambda > 1. Environments live in theta_domain(); posterior samples may
// roam the natural domain.
//
// Each family also carries the conventional parametrization lambda
// (success probability, Gaussian mean, Gamma/Weibull rate, Poisson mean,
// Pareto tail index) with bijections both ways.
//
// Immutable after construction; all members are const-safe to share across
// threads. sample_reward mutates only the caller's RandomStream.
class Family {
  public:
    static Family bernoulli();
    static Family gaussian(double sigma2);
    static Family gamma(double shape_k);
    static Family poisson();
    static Family pareto(double xm);
    static Family weibull(double shape_k);

    // Textual form: kind[:key=value{,key=value}], e.g. "gaussian:sigma2=2.0",
    // "pareto:xm=1.0", "weibull:k=2.0", "gamma:k=3.0", "bernoulli", "poisson".
    static Family parse(std::string_view spec);
    std::string spec_string() const;

    FamilyKind kind() const { return kind_; }
    // Known nuisance constant: sigma^2 (gaussian), k (gamma, weibull),
    // x_m (pareto); 0 for families without one.
    double nuisance() const { return aux_; }

    Interval theta_domain() const;
    Interval natural_domain() const;
    Interval mean_domain() const;
    // Range of F' over the natural domain (attainable sufficient-statistic means).
    Interval suffstat_mean_range() const;

    bool in_support(double x) const;
    std::string support_string() const;

    double suff_stat(double x) const;                   // T(x)
    double log_density(double theta, double x) const;   // ln A + T(x) theta - F
    double log_partition(double theta) const;           // F
    double log_partition_d1(double theta) const;        // F'
    double log_partition_d2(double theta) const;        // F''
    double fisher_info(double theta) const { return log_partition_d2(theta); }

    double mean(double theta) const;          // mu, requires theta_domain
    double mean_inverse(double m) const;      // mu^{-1}, closed form
    // mu extended to the natural domain: +inf where the mean diverges
    // (Pareto with lambda <= 1).
    double mean_or_infinity(double theta) const;

    // K(theta, theta') = F(theta') - F(theta) - F'(theta) (theta' - theta)
    double kl(double theta, double theta_prime) const;

    // min over attainable branches of K(theta + g, theta), K(theta - h, theta)
    // where F'(theta + g) = F'(theta) + delta and F'(theta - h) = F'(theta) - delta.
    double chernoff_rate(double theta, double delta) const;

    double sample_reward(double theta, RandomStream& rng) const;

    // sup_x p(x | theta); closed form where the mode is explicit, otherwise a
    // grid scan over the bulk of the support.
    double mode_density(double theta) const;

    double lambda_from_theta(double theta) const;
    double theta_from_lambda(double lambda) const;

    friend bool operator==(const Family& a, const Family& b) {
        return a.kind_ == b.kind_ && a.aux_ == b.aux_;
    }

  private:
    Family(FamilyKind kind, double aux) : kind_(kind), aux_(aux) {}

    void require_natural(double theta) const;
    double grid_max_density(double theta, double hi) const;

    FamilyKind kind_;
    double aux_;
};

std::string to_string(FamilyKind kind);

}  // namespace expbandit
