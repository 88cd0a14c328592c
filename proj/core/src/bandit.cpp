#include "expbandit/bandit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace expbandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Reserved substream id for policy randomness; arm ids stay well below this.
constexpr std::uint64_t kPolicyStreamId = 0xffff'ffff'0000'0001ULL;

// argmax with uniform tie-breaking; values may contain +inf.
int argmax_random_ties(std::span<const double> values, RandomStream& tie_break) {
    double best = -kInf;
    int ties = 0;
    int pick = -1;
    for (int a = 0; a < static_cast<int>(values.size()); ++a) {
        if (values[a] > best) {
            best = values[a];
            ties = 1;
            pick = a;
        } else if (values[a] == best) {
            // reservoir over the tied set; one uniform per extra tie
            ++ties;
            if (tie_break.below(static_cast<std::uint64_t>(ties)) == 0) pick = a;
        }
    }
    return pick;
}

double interior_anchor(const Interval& dom) {
    if (std::isfinite(dom.lo) && std::isfinite(dom.hi)) return 0.5 * (dom.lo + dom.hi);
    if (std::isfinite(dom.lo)) return dom.lo + 1.0;
    if (std::isfinite(dom.hi)) return dom.hi - 1.0;
    return 0.0;
}

}  // namespace

BanditInstance::BanditInstance(std::vector<Arm> arms) : arms_(std::move(arms)) {
    if (arms_.size() < 2) throw std::invalid_argument("bandit instance needs K >= 2 arms");
    means_.reserve(arms_.size());
    for (const Arm& arm : arms_) {
        if (!arm.family.theta_domain().contains(arm.theta))
            throw std::invalid_argument("arm parameter outside theta domain of " +
                                        to_string(arm.family.kind()));
        means_.push_back(arm.family.mean(arm.theta));
    }
    best_ = static_cast<int>(std::max_element(means_.begin(), means_.end()) - means_.begin());
    for (int a = 0; a < num_arms(); ++a)
        if (a != best_ && means_[a] == means_[best_])
            throw std::invalid_argument("bandit instance needs a strictly unique best arm");
}

int ts_step(const BanditInstance& instance, std::span<const ArmPosterior> states,
            const PosteriorSampler& sampler, std::span<RandomStream> arm_streams,
            RandomStream& tie_break) {
    int K = instance.num_arms();
    if (static_cast<int>(states.size()) != K || static_cast<int>(arm_streams.size()) != K)
        throw std::invalid_argument("ts_step: per-arm state/stream size mismatch");

    std::vector<double> posterior_means(K);
    for (int a = 0; a < K; ++a) {
        const Family& fam = instance.arms()[a].family;
        if (states[a].n < properness_threshold(fam))
            throw std::logic_error("ts_step reached an improper posterior; init rounds missing");
        double theta = sampler(fam, states[a], arm_streams[a]);
        posterior_means[a] = fam.mean_or_infinity(theta);
    }
    return argmax_random_ties(posterior_means, tie_break);
}

int ucb1_step(std::span<const std::int64_t> pulls, std::span<const double> reward_sums,
              double exploration_c, std::int64_t t, RandomStream& tie_break) {
    if (!(exploration_c > 0.0)) throw std::invalid_argument("ucb1 requires exploration_c > 0");
    std::vector<double> index(pulls.size());
    for (std::size_t a = 0; a < pulls.size(); ++a) {
        if (pulls[a] < 1) throw std::logic_error("ucb1_step requires every arm pulled once");
        double n = static_cast<double>(pulls[a]);
        index[a] = reward_sums[a] / n +
                   exploration_c * std::sqrt(2.0 * std::log(static_cast<double>(t)) / n);
    }
    return argmax_random_ties(index, tie_break);
}

double klucb_index(const Family& fam, double empirical_mean, std::int64_t n_pulls,
                   double log_time) {
    Interval dom = fam.mean_domain();
    double m_hat = empirical_mean;
    if (!dom.contains(m_hat)) {
        // pull a boundary estimate slightly inside, shrinking with n
        double n = static_cast<double>(n_pulls);
        m_hat = (n * m_hat + interior_anchor(dom)) / (n + 1.0);
    }
    if (!dom.contains(m_hat)) throw std::domain_error("klucb: empirical mean outside mean domain");

    double theta_hat = fam.mean_inverse(m_hat);
    double budget = std::fmax(log_time, 0.0);
    auto cost = [&](double m) { return static_cast<double>(n_pulls) * fam.kl(theta_hat, fam.mean_inverse(m)); };
    auto root = detail::invert_increasing(cost, budget, {m_hat, dom.hi}, m_hat);
    return root ? *root : kInf;
}

int klucb_step(const BanditInstance& instance, std::span<const std::int64_t> pulls,
               std::span<const double> reward_sums, double log_time, RandomStream& tie_break) {
    int K = instance.num_arms();
    std::vector<double> index(K);
    for (int a = 0; a < K; ++a) {
        if (pulls[a] < 1) throw std::logic_error("klucb_step requires every arm pulled once");
        index[a] = klucb_index(instance.arms()[a].family,
                               reward_sums[a] / static_cast<double>(pulls[a]), pulls[a], log_time);
    }
    return argmax_random_ties(index, tie_break);
}

RegretTrace run_episode(const BanditInstance& instance, const PolicyKind& policy,
                        std::int64_t horizon, std::uint64_t seed,
                        std::span<const std::uint64_t> arm_stream_ids) {
    int K = instance.num_arms();
    if (horizon < K) throw std::invalid_argument("horizon must be at least the number of arms");
    if (!arm_stream_ids.empty() && static_cast<int>(arm_stream_ids.size()) != K)
        throw std::invalid_argument("arm_stream_ids size mismatch");

    RandomStream root(seed);
    std::vector<RandomStream> arm_streams;
    arm_streams.reserve(K);
    for (int a = 0; a < K; ++a)
        arm_streams.push_back(
            root.split(arm_stream_ids.empty() ? static_cast<std::uint64_t>(a) : arm_stream_ids[a]));
    RandomStream policy_stream = root.split(kPolicyStreamId);

    RegretTrace trace;
    trace.horizon = horizon;
    trace.chosen.resize(horizon);
    trace.rewards.resize(horizon);
    trace.pulls.assign(K, 0);
    trace.cum_pseudo_regret.resize(horizon);

    std::vector<ArmPosterior> states(K);
    std::vector<double> reward_sums(K, 0.0);

    const TsJeffreysPolicy* ts = std::get_if<TsJeffreysPolicy>(&policy);
    PosteriorSampler sampler;
    if (ts) {
        if (ts->sampler == TsSamplerKind::conjugate)
            sampler = [](const Family& f, const ArmPosterior& p, RandomStream& r) {
                return sample_conjugate(f, p, r);
            };
        else
            sampler = [cfg = ts->mh](const Family& f, const ArmPosterior& p, RandomStream& r) {
                return sample_mh(f, p, cfg, r);
            };
    }
    double log_horizon = std::log(static_cast<double>(horizon));

    for (std::int64_t t = 1; t <= horizon; ++t) {
        int a;
        if (t <= K) {
            a = static_cast<int>(t - 1);
        } else if (ts) {
            a = ts_step(instance, states, sampler, arm_streams, policy_stream);
        } else if (const auto* ucb = std::get_if<Ucb1Policy>(&policy)) {
            a = ucb1_step(trace.pulls, reward_sums, ucb->exploration_c, t, policy_stream);
        } else if (const auto* klucb = std::get_if<KlUcbPolicy>(&policy)) {
            double log_time = klucb->horizon_aware ? log_horizon : std::log(static_cast<double>(t));
            a = klucb_step(instance, trace.pulls, reward_sums, log_time, policy_stream);
        } else {
            a = static_cast<int>(policy_stream.below(static_cast<std::uint64_t>(K)));
        }

        const BanditInstance::Arm& arm = instance.arms()[a];
        double x = arm.family.sample_reward(arm.theta, arm_streams[a]);
        states[a] = states[a].updated(arm.family, x);
        reward_sums[a] += x;
        trace.pulls[a] += 1;
        trace.chosen[t - 1] = a;
        trace.rewards[t - 1] = x;

        double regret = 0.0;  // recomputed from counts so the identity is exact
        for (int b = 0; b < K; ++b)
            regret += instance.mean_gap(b) * static_cast<double>(trace.pulls[b]);
        trace.cum_pseudo_regret[t - 1] = regret;
    }
    return trace;
}

std::vector<RegretTrace> run_batch(const BanditInstance& instance, const PolicyKind& policy,
                                   std::int64_t horizon, std::span<const std::uint64_t> seeds,
                                   int threads) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));

    std::vector<RegretTrace> traces(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1))
            traces[i] = run_episode(instance, policy, horizon, seeds[i]);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return traces;
}

double lai_robbins_coefficient(const BanditInstance& instance) {
    const auto& arms = instance.arms();
    for (const auto& arm : arms)
        if (!(arm.family == arms[0].family))
            throw std::invalid_argument(
                "lai_robbins_coefficient is defined within a single family");
    int best = instance.best_arm();
    double coeff = 0.0;
    for (int a = 0; a < instance.num_arms(); ++a) {
        if (a == best) continue;
        coeff += instance.mean_gap(a) / arms[a].family.kl(arms[a].theta, arms[best].theta);
    }
    return coeff;
}

}  // namespace expbandit
