#include "expbandit/concentration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace expbandit {

namespace {

constexpr std::int64_t kChunk = 1024;  // fixed work unit so results do not depend on thread count

// Run fn(chunk_index, trial_lo, trial_hi) over [0, trials) in fixed chunks.
template <class Fn>
void parallel_chunks(std::int64_t trials, int threads, Fn&& fn) {
    std::int64_t n_chunks = (trials + kChunk - 1) / kChunk;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max<std::int64_t>(1, std::min<std::int64_t>(threads, n_chunks));

    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (std::int64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
            fn(c, c * kChunk, std::min(trials, (c + 1) * kChunk));
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace

LabConfig::LabConfig(Family fam, double theta_, double delta_, double mean_shift_,
                     std::vector<std::int64_t> sample_sizes_, std::int64_t trials_,
                     std::uint64_t seed_)
    : family(fam),
      theta(theta_),
      delta(delta_),
      mean_shift(mean_shift_),
      sample_sizes(std::move(sample_sizes_)),
      trials(trials_),
      seed(seed_) {
    if (!family.theta_domain().contains(theta))
        throw std::invalid_argument("lab config: theta outside theta domain");
    if (!(delta > 0.0) || !(mean_shift > 0.0))
        throw std::invalid_argument("lab config: delta and mean shift must be positive");
    if (!family.mean_domain().contains(family.mean(theta) + mean_shift))
        throw std::invalid_argument("lab config: mu(theta) + shift escapes the mean domain");
    double c2 = c2_constant(family, theta, mean_shift);
    if (!(1.0 - delta * c2 > 0.0))
        throw std::invalid_argument(
            "lab config: admissibility 1 - delta*C2 > 0 violated (delta*C2 = " +
            std::to_string(delta * c2) + ")");
    if (trials < 1 || sample_sizes.empty() || posterior_draws < 1)
        throw std::invalid_argument("lab config: empty experiment");
    for (std::int64_t u : sample_sizes)
        if (u < 1) throw std::invalid_argument("lab config: sample sizes must be positive");
}

double c2_constant(const Family& fam, double theta, double mean_shift) {
    if (!fam.theta_domain().contains(theta))
        throw std::domain_error("c2_constant: theta outside theta domain");
    double target = fam.mean(theta) + mean_shift;
    if (!fam.mean_domain().contains(target))
        throw std::domain_error("c2_constant: shifted mean outside mean domain");
    double theta_shift = fam.mean_inverse(target);
    double chord = (fam.log_partition(theta_shift) - fam.log_partition(theta)) /
                   (theta_shift - theta);
    return 1.0 / (chord - fam.log_partition_d1(theta));
}

Interval kl_ball(const Family& fam, double theta, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("kl_ball: eps must be positive");
    Interval dom = fam.natural_domain();
    auto divergence = [&](double t) { return fam.kl(theta, t); };

    Interval ball;
    auto up = detail::invert_increasing(divergence, eps, {theta, dom.hi}, theta);
    ball.hi = up ? *up : dom.hi;  // clamp when the ball escapes the domain
    // mirror the left side so the objective increases away from theta
    auto down = detail::invert_increasing([&](double t) { return divergence(2.0 * theta - t); },
                                          eps, {theta, 2.0 * theta - dom.lo}, theta);
    ball.lo = down ? 2.0 * theta - *down : dom.lo;
    return ball;
}

namespace {

bool event_check_gated(const Family& fam, double theta, double delta,
                       std::span<const double> data, double log_gate, double mean_t) {
    double sum_t = 0.0;
    for (double x : data) sum_t += fam.suff_stat(x);

    std::int64_t u = static_cast<std::int64_t>(data.size());
    for (std::int64_t i = 0; i < u; ++i) {
        if (fam.log_density(theta, data[i]) < log_gate) continue;
        double deviation = 0.0;  // empty leave-one-out average for u = 1
        if (u > 1)
            deviation = (sum_t - fam.suff_stat(data[i])) / static_cast<double>(u - 1) - mean_t;
        if (std::fabs(deviation) <= delta) return true;
    }
    return false;
}

}  // namespace

bool event_check(const Family& fam, double theta, double delta, std::span<const double> data) {
    if (data.empty()) throw std::invalid_argument("event_check: empty data");
    double log_gate = std::log(0.5 * std::fmin(fam.mode_density(theta), 1.0));
    return event_check_gated(fam, theta, delta, data, log_gate, fam.log_partition_d1(theta));
}

std::vector<TailEstimate> suffstat_tail_experiment(const LabConfig& cfg) {
    double mean_t = cfg.family.log_partition_d1(cfg.theta);
    RandomStream root(cfg.seed);

    std::vector<TailEstimate> out;
    out.reserve(cfg.sample_sizes.size());
    for (std::size_t ui = 0; ui < cfg.sample_sizes.size(); ++ui) {
        std::int64_t u = cfg.sample_sizes[ui];
        std::int64_t n_chunks = (cfg.trials + kChunk - 1) / kChunk;
        std::vector<std::int64_t> chunk_hits(n_chunks, 0);

        parallel_chunks(cfg.trials, cfg.threads, [&](std::int64_t c, std::int64_t lo,
                                                     std::int64_t hi) {
            std::int64_t hits = 0;
            for (std::int64_t trial = lo; trial < hi; ++trial) {
                RandomStream rng = root.split(ui * static_cast<std::uint64_t>(cfg.trials) +
                                              static_cast<std::uint64_t>(trial));
                double sum_t = 0.0;
                for (std::int64_t i = 0; i < u; ++i)
                    sum_t += cfg.family.suff_stat(cfg.family.sample_reward(cfg.theta, rng));
                if (std::fabs(sum_t / static_cast<double>(u) - mean_t) >= cfg.delta) ++hits;
            }
            chunk_hits[c] = hits;
        });

        std::int64_t hits = 0;
        for (std::int64_t h : chunk_hits) hits += h;
        TailEstimate est;
        est.u = u;
        est.empirical_prob = static_cast<double>(hits) / static_cast<double>(cfg.trials);
        est.bound = 2.0 * std::exp(-static_cast<double>(u) *
                                   cfg.family.chernoff_rate(cfg.theta, cfg.delta));
        est.trials_used = cfg.trials;
        est.samples = cfg.trials;
        est.event_pass_fraction = 1.0;
        out.push_back(est);
    }
    return out;
}

std::vector<TailEstimate> posterior_tail_experiment(const LabConfig& cfg) {
    double mu = cfg.family.mean(cfg.theta);
    double threshold = mu + cfg.mean_shift;
    double rate = (1.0 - cfg.delta * c2_constant(cfg.family, cfg.theta, cfg.mean_shift)) *
                  cfg.family.kl(cfg.theta, cfg.family.mean_inverse(threshold));
    double log_gate = std::log(0.5 * std::fmin(cfg.family.mode_density(cfg.theta), 1.0));
    double mean_t = cfg.family.log_partition_d1(cfg.theta);
    RandomStream root(cfg.seed);

    std::vector<TailEstimate> out;
    out.reserve(cfg.sample_sizes.size());
    for (std::size_t ui = 0; ui < cfg.sample_sizes.size(); ++ui) {
        std::int64_t u = cfg.sample_sizes[ui];
        std::int64_t n_chunks = (cfg.trials + kChunk - 1) / kChunk;
        std::vector<std::int64_t> chunk_kept(n_chunks, 0);
        std::vector<double> chunk_tail_sum(n_chunks, 0.0);

        parallel_chunks(cfg.trials, cfg.threads, [&](std::int64_t c, std::int64_t lo,
                                                     std::int64_t hi) {
            std::int64_t kept = 0;
            double tail_sum = 0.0;
            std::vector<double> data(static_cast<std::size_t>(u));
            for (std::int64_t trial = lo; trial < hi; ++trial) {
                RandomStream rng = root.split((64 + ui) * static_cast<std::uint64_t>(cfg.trials) +
                                              static_cast<std::uint64_t>(trial));
                ArmPosterior post;
                for (double& x : data) {
                    x = cfg.family.sample_reward(cfg.theta, rng);
                    post = post.updated(cfg.family, x);
                }
                if (!event_check_gated(cfg.family, cfg.theta, cfg.delta, data, log_gate, mean_t))
                    continue;
                ++kept;
                int exceed = 0;
                for (int d = 0; d < cfg.posterior_draws; ++d) {
                    double draw = sample_conjugate(cfg.family, post, rng);
                    if (cfg.family.mean_or_infinity(draw) > threshold) ++exceed;
                }
                tail_sum += static_cast<double>(exceed) / cfg.posterior_draws;
            }
            chunk_kept[c] = kept;
            chunk_tail_sum[c] = tail_sum;
        });

        std::int64_t kept = 0;
        double tail_sum = 0.0;  // summed in chunk order: identical for any thread count
        for (std::int64_t i = 0; i < n_chunks; ++i) {
            kept += chunk_kept[i];
            tail_sum += chunk_tail_sum[i];
        }
        if (kept * 10 < cfg.trials)
            throw std::runtime_error(
                "posterior tail experiment: fewer than 10% of datasets satisfy the "
                "conditioning event at u = " +
                std::to_string(u) + "; increase delta");

        TailEstimate est;
        est.u = u;
        est.empirical_prob = tail_sum / static_cast<double>(kept);
        est.bound = rate;
        est.trials_used = kept;
        est.samples = kept * cfg.posterior_draws;
        est.event_pass_fraction = static_cast<double>(kept) / static_cast<double>(cfg.trials);
        out.push_back(est);
    }
    return out;
}

double fit_decay_slope(std::span<const TailEstimate> estimates, double min_hits) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const TailEstimate& e : estimates) {
        if (e.empirical_prob * static_cast<double>(e.samples) < min_hits) continue;
        double x = static_cast<double>(e.u);
        double y = -std::log(e.empirical_prob);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::runtime_error("fit_decay_slope: fewer than two resolvable points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace expbandit
