#include "expbandit/exp_family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace expbandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454836;

double stable_log1pexp(double t) {  // ln(1 + e^t)
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

bool is_nonneg_integer(double x) {
    return x >= 0.0 && x == std::floor(x) && std::isfinite(x);
}

[[noreturn]] void fail_domain(const char* what, double v) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s (got %g)", what, v);
    throw std::domain_error(buf);
}

}  // namespace

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::bernoulli: return "bernoulli";
        case FamilyKind::gaussian: return "gaussian";
        case FamilyKind::gamma: return "gamma";
        case FamilyKind::poisson: return "poisson";
        case FamilyKind::pareto: return "pareto";
        case FamilyKind::weibull: return "weibull";
    }
    throw std::logic_error("unknown family kind");
}

Family Family::bernoulli() { return Family(FamilyKind::bernoulli, 0.0); }

Family Family::gaussian(double sigma2) {
    if (!(sigma2 > 0.0)) fail_domain("gaussian requires sigma2 > 0", sigma2);
    return Family(FamilyKind::gaussian, sigma2);
}

Family Family::gamma(double shape_k) {
    if (!(shape_k > 0.0)) fail_domain("gamma requires k > 0", shape_k);
    return Family(FamilyKind::gamma, shape_k);
}

Family Family::poisson() { return Family(FamilyKind::poisson, 0.0); }

Family Family::pareto(double xm) {
    if (!(xm > 0.0)) fail_domain("pareto requires xm > 0", xm);
    return Family(FamilyKind::pareto, xm);
}

Family Family::weibull(double shape_k) {
    if (!(shape_k > 0.0)) fail_domain("weibull requires k > 0", shape_k);
    return Family(FamilyKind::weibull, shape_k);
}

Family Family::parse(std::string_view spec) {
    std::string_view kind = spec;
    std::string_view args;
    if (auto colon = spec.find(':'); colon != std::string_view::npos) {
        kind = spec.substr(0, colon);
        args = spec.substr(colon + 1);
    }

    double value = 1.0;
    std::string key;
    bool have_kv = false;
    while (!args.empty()) {
        auto comma = args.find(',');
        std::string_view item = args.substr(0, comma);
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("family spec: expected key=value in '" + std::string(spec) + "'");
        if (have_kv) throw std::invalid_argument("family spec: at most one parameter supported");
        key = std::string(item.substr(0, eq));
        try {
            value = std::stod(std::string(item.substr(eq + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("family spec: bad numeric value in '" + std::string(spec) + "'");
        }
        have_kv = true;
        args = comma == std::string_view::npos ? std::string_view{} : args.substr(comma + 1);
    }

    auto expect_key = [&](const char* want) {
        if (have_kv && key != want)
            throw std::invalid_argument("family spec: unknown key '" + key + "' for " + std::string(kind));
        return value;  // defaults to 1.0 when the parameter is omitted
    };

    if (kind == "bernoulli") {
        if (have_kv) throw std::invalid_argument("family spec: bernoulli takes no parameters");
        return bernoulli();
    }
    if (kind == "gaussian") return gaussian(expect_key("sigma2"));
    if (kind == "gamma") return gamma(expect_key("k"));
    if (kind == "poisson") {
        if (have_kv) throw std::invalid_argument("family spec: poisson takes no parameters");
        return poisson();
    }
    if (kind == "pareto") return pareto(expect_key("xm"));
    if (kind == "weibull") return weibull(expect_key("k"));
    throw std::invalid_argument("family spec: unknown kind '" + std::string(kind) + "'");
}

std::string Family::spec_string() const {
    char buf[64];
    switch (kind_) {
        case FamilyKind::bernoulli: return "bernoulli";
        case FamilyKind::poisson: return "poisson";
        case FamilyKind::gaussian:
            std::snprintf(buf, sizeof(buf), "gaussian:sigma2=%.17g", aux_);
            return buf;
        case FamilyKind::gamma:
            std::snprintf(buf, sizeof(buf), "gamma:k=%.17g", aux_);
            return buf;
        case FamilyKind::pareto:
            std::snprintf(buf, sizeof(buf), "pareto:xm=%.17g", aux_);
            return buf;
        case FamilyKind::weibull:
            std::snprintf(buf, sizeof(buf), "weibull:k=%.17g", aux_);
            return buf;
    }
    throw std::logic_error("unknown family kind");
}

Interval Family::natural_domain() const {
    switch (kind_) {
        case FamilyKind::bernoulli:
        case FamilyKind::gaussian:
        case FamilyKind::poisson: return {-kInf, kInf};
        case FamilyKind::gamma:
        case FamilyKind::weibull: return {-kInf, 0.0};
        case FamilyKind::pareto: return {-kInf, -1.0};
    }
    throw std::logic_error("unknown family kind");
}

Interval Family::theta_domain() const {
    // Pareto means are finite only for lambda > 1, i.e. theta < -2.
    if (kind_ == FamilyKind::pareto) return {-kInf, -2.0};
    return natural_domain();
}

Interval Family::mean_domain() const {
    switch (kind_) {
        case FamilyKind::bernoulli: return {0.0, 1.0};
        case FamilyKind::gaussian: return {-kInf, kInf};
        case FamilyKind::gamma:
        case FamilyKind::poisson:
        case FamilyKind::weibull: return {0.0, kInf};
        case FamilyKind::pareto: return {aux_, kInf};
    }
    throw std::logic_error("unknown family kind");
}

Interval Family::suffstat_mean_range() const {
    switch (kind_) {
        case FamilyKind::bernoulli: return {0.0, 1.0};
        case FamilyKind::gaussian: return {-kInf, kInf};
        case FamilyKind::gamma:
        case FamilyKind::poisson:
        case FamilyKind::weibull: return {0.0, kInf};
        case FamilyKind::pareto: return {std::log(aux_), kInf};
    }
    throw std::logic_error("unknown family kind");
}

bool Family::in_support(double x) const {
    switch (kind_) {
        case FamilyKind::bernoulli: return x == 0.0 || x == 1.0;
        case FamilyKind::gaussian: return std::isfinite(x);
        case FamilyKind::gamma: return x > 0.0;
        case FamilyKind::poisson: return is_nonneg_integer(x);
        case FamilyKind::pareto: return x >= aux_;
        case FamilyKind::weibull: return x >= 0.0;
    }
    throw std::logic_error("unknown family kind");
}

std::string Family::support_string() const {
    char buf[64];
    switch (kind_) {
        case FamilyKind::bernoulli: return "{0, 1}";
        case FamilyKind::gaussian: return "(-inf, inf)";
        case FamilyKind::gamma: return "(0, inf)";
        case FamilyKind::poisson: return "{0, 1, 2, ...}";
        case FamilyKind::pareto:
            std::snprintf(buf, sizeof(buf), "[%g, inf)", aux_);
            return buf;
        case FamilyKind::weibull: return "[0, inf)";
    }
    throw std::logic_error("unknown family kind");
}

void Family::require_natural(double theta) const {
    if (!natural_domain().contains(theta))
        fail_domain(("theta outside natural domain of " + to_string(kind_)).c_str(), theta);
}

double Family::suff_stat(double x) const {
    if (!in_support(x))
        throw std::domain_error("observation outside support " + support_string() + " of " +
                                to_string(kind_));
    switch (kind_) {
        case FamilyKind::bernoulli:
        case FamilyKind::gaussian:
        case FamilyKind::gamma:
        case FamilyKind::poisson: return x;
        case FamilyKind::pareto: return std::log(x);
        case FamilyKind::weibull: return std::pow(x, aux_);
    }
    throw std::logic_error("unknown family kind");
}

double Family::log_partition(double theta) const {
    require_natural(theta);
    switch (kind_) {
        case FamilyKind::bernoulli: return stable_log1pexp(theta);
        case FamilyKind::gaussian: return 0.5 * aux_ * theta * theta;
        case FamilyKind::gamma: return -aux_ * std::log(-theta);
        case FamilyKind::poisson: return std::exp(theta);
        case FamilyKind::pareto: return -std::log(-(theta + 1.0)) + (theta + 1.0) * std::log(aux_);
        case FamilyKind::weibull: return -std::log(-theta);
    }
    throw std::logic_error("unknown family kind");
}

double Family::log_partition_d1(double theta) const {
    require_natural(theta);
    switch (kind_) {
        case FamilyKind::bernoulli: return sigmoid(theta);
        case FamilyKind::gaussian: return aux_ * theta;
        case FamilyKind::gamma: return aux_ / (-theta);
        case FamilyKind::poisson: return std::exp(theta);
        case FamilyKind::pareto: return -1.0 / (theta + 1.0) + std::log(aux_);
        case FamilyKind::weibull: return -1.0 / theta;
    }
    throw std::logic_error("unknown family kind");
}

double Family::log_partition_d2(double theta) const {
    require_natural(theta);
    switch (kind_) {
        case FamilyKind::bernoulli: {
            double p = sigmoid(theta);
            return p * (1.0 - p);
        }
        case FamilyKind::gaussian: return aux_;
        case FamilyKind::gamma: return aux_ / (theta * theta);
        case FamilyKind::poisson: return std::exp(theta);
        case FamilyKind::pareto: return 1.0 / ((theta + 1.0) * (theta + 1.0));
        case FamilyKind::weibull: return 1.0 / (theta * theta);
    }
    throw std::logic_error("unknown family kind");
}

double Family::log_density(double theta, double x) const {
    double t = suff_stat(x);  // also validates support
    double log_carrier = 0.0;
    switch (kind_) {
        case FamilyKind::bernoulli:
        case FamilyKind::pareto: break;
        case FamilyKind::gaussian:
            log_carrier = -x * x / (2.0 * aux_) - 0.5 * std::log(aux_) - 0.5 * kLogTwoPi;
            break;
        case FamilyKind::gamma:
            log_carrier = (aux_ - 1.0) * std::log(x) - std::lgamma(aux_);
            break;
        case FamilyKind::poisson:
            log_carrier = -std::lgamma(x + 1.0);
            break;
        case FamilyKind::weibull:
            // x = 0 sits in the support; the carrier x^(k-1) is 1 at k = 1
            log_carrier = std::log(aux_) +
                          (aux_ == 1.0 ? 0.0 : (aux_ - 1.0) * std::log(x));
            break;
    }
    return log_carrier + t * theta - log_partition(theta);
}

double Family::mean(double theta) const {
    if (!theta_domain().contains(theta))
        fail_domain(("theta outside domain of " + to_string(kind_)).c_str(), theta);
    switch (kind_) {
        case FamilyKind::bernoulli: return sigmoid(theta);
        case FamilyKind::gaussian: return aux_ * theta;
        case FamilyKind::gamma: return aux_ / (-theta);
        case FamilyKind::poisson: return std::exp(theta);
        case FamilyKind::pareto: {
            double lambda = -theta - 1.0;
            return lambda * aux_ / (lambda - 1.0);
        }
        case FamilyKind::weibull: {
            double lambda = std::pow(-theta, 1.0 / aux_);
            return std::tgamma(1.0 + 1.0 / aux_) / lambda;
        }
    }
    throw std::logic_error("unknown family kind");
}

double Family::mean_or_infinity(double theta) const {
    if (kind_ == FamilyKind::pareto && theta >= -2.0) {
        require_natural(theta);
        return kInf;
    }
    return mean(theta);
}

double Family::mean_inverse(double m) const {
    if (!mean_domain().contains(m))
        fail_domain(("mean outside attainable range of " + to_string(kind_)).c_str(), m);
    switch (kind_) {
        case FamilyKind::bernoulli: return std::log(m / (1.0 - m));
        case FamilyKind::gaussian: return m / aux_;
        case FamilyKind::gamma: return -aux_ / m;
        case FamilyKind::poisson: return std::log(m);
        case FamilyKind::pareto: return -m / (m - aux_) - 1.0;
        case FamilyKind::weibull: {
            double lambda = std::tgamma(1.0 + 1.0 / aux_) / m;
            return -std::pow(lambda, aux_);
        }
    }
    throw std::logic_error("unknown family kind");
}

double Family::kl(double theta, double theta_prime) const {
    require_natural(theta);
    require_natural(theta_prime);
    return log_partition(theta_prime) - log_partition(theta) -
           log_partition_d1(theta) * (theta_prime - theta);
}

double Family::chernoff_rate(double theta, double delta) const {
    require_natural(theta);
    if (!(delta > 0.0)) fail_domain("chernoff_rate requires delta > 0", delta);

    Interval dom = natural_domain();
    Interval range = suffstat_mean_range();
    double m = log_partition_d1(theta);
    auto d1 = [this](double t) { return log_partition_d1(t); };

    double rate = kInf;
    if (range.contains(m + delta)) {
        auto up = detail::invert_increasing(d1, m + delta, dom, theta);
        if (up) rate = std::fmin(rate, kl(*up, theta));
    }
    if (range.contains(m - delta)) {
        auto down = detail::invert_increasing(d1, m - delta, dom, theta);
        if (down) rate = std::fmin(rate, kl(*down, theta));
    }
    if (std::isinf(rate))
        fail_domain("chernoff_rate: neither deviation branch attainable for delta", delta);
    return rate;
}

double Family::sample_reward(double theta, RandomStream& rng) const {
    require_natural(theta);
    switch (kind_) {
        case FamilyKind::bernoulli:
            return std::bernoulli_distribution(sigmoid(theta))(rng.engine()) ? 1.0 : 0.0;
        case FamilyKind::gaussian:
            return rng.normal(aux_ * theta, std::sqrt(aux_));
        case FamilyKind::gamma:
            return rng.gamma(aux_, -theta);
        case FamilyKind::poisson:
            return static_cast<double>(
                std::poisson_distribution<long>(std::exp(theta))(rng.engine()));
        case FamilyKind::pareto: {
            double lambda = -theta - 1.0;
            return aux_ * std::pow(rng.uniform(), -1.0 / lambda);
        }
        case FamilyKind::weibull: {
            double lambda = std::pow(-theta, 1.0 / aux_);
            return std::pow(-std::log(rng.uniform()), 1.0 / aux_) / lambda;
        }
    }
    throw std::logic_error("unknown family kind");
}

double Family::grid_max_density(double theta, double hi) const {
    constexpr int kPoints = 10000;
    double best = -kInf;
    for (int i = 1; i <= kPoints; ++i) {
        double x = hi * static_cast<double>(i) / kPoints;
        best = std::fmax(best, log_density(theta, x));
    }
    return std::exp(best);
}

double Family::mode_density(double theta) const {
    require_natural(theta);
    switch (kind_) {
        case FamilyKind::bernoulli: {
            double p = sigmoid(theta);
            return std::fmax(p, 1.0 - p);
        }
        case FamilyKind::gaussian:
            return 1.0 / std::sqrt(2.0 * M_PI * aux_);
        case FamilyKind::pareto:
            return (-theta - 1.0) / aux_;  // density peaks at x = xm
        case FamilyKind::poisson: {
            // pmf maximum sits at floor(lambda); scan the whole bulk
            double lambda = std::exp(theta);
            long hi = static_cast<long>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 20.0));
            double best = -kInf;
            for (long x = 0; x <= hi; ++x)
                best = std::fmax(best, log_density(theta, static_cast<double>(x)));
            return std::exp(best);
        }
        case FamilyKind::gamma: {
            double lambda = -theta;
            double hi = (aux_ + 12.0 * std::sqrt(aux_)) / lambda;
            if (aux_ < 1.0) return kInf;  // density unbounded at 0
            return grid_max_density(theta, hi);
        }
        case FamilyKind::weibull: {
            double lambda = std::pow(-theta, 1.0 / aux_);
            if (aux_ < 1.0) return kInf;
            double hi = std::pow(-std::log(1e-6), 1.0 / aux_) / lambda;  // 1 - 1e-6 quantile
            return grid_max_density(theta, hi);
        }
    }
    throw std::logic_error("unknown family kind");
}

double Family::lambda_from_theta(double theta) const {
    require_natural(theta);
    switch (kind_) {
        case FamilyKind::bernoulli: return sigmoid(theta);
        case FamilyKind::gaussian: return aux_ * theta;
        case FamilyKind::gamma: return -theta;
        case FamilyKind::poisson: return std::exp(theta);
        case FamilyKind::pareto: return -theta - 1.0;
        case FamilyKind::weibull: return std::pow(-theta, 1.0 / aux_);
    }
    throw std::logic_error("unknown family kind");
}

double Family::theta_from_lambda(double lambda) const {
    switch (kind_) {
        case FamilyKind::bernoulli:
            if (!(lambda > 0.0 && lambda < 1.0)) fail_domain("bernoulli lambda in (0,1)", lambda);
            return std::log(lambda / (1.0 - lambda));
        case FamilyKind::gaussian: return lambda / aux_;
        case FamilyKind::gamma:
            if (!(lambda > 0.0)) fail_domain("gamma rate lambda > 0", lambda);
            return -lambda;
        case FamilyKind::poisson:
            if (!(lambda > 0.0)) fail_domain("poisson mean lambda > 0", lambda);
            return std::log(lambda);
        case FamilyKind::pareto:
            if (!(lambda > 0.0)) fail_domain("pareto tail index lambda > 0", lambda);
            return -lambda - 1.0;
        case FamilyKind::weibull:
            if (!(lambda > 0.0)) fail_domain("weibull rate lambda > 0", lambda);
            return -std::pow(lambda, aux_);
    }
    throw std::logic_error("unknown family kind");
}

}  // namespace expbandit
