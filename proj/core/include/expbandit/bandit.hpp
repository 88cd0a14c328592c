#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "expbandit/exp_family.hpp"
#include "expbandit/posterior.hpp"
#include "expbandit/rng.hpp"

namespace expbandit {

// K >= 2 reward distributions with a strictly unique best mean.
class BanditInstance {
  public:
    struct Arm {
        Family family;
        double theta;
    };

    explicit BanditInstance(std::vector<Arm> arms);

    const std::vector<Arm>& arms() const { return arms_; }
    int num_arms() const { return static_cast<int>(arms_.size()); }
    double arm_mean(int a) const { return means_[a]; }
    int best_arm() const { return best_; }
    double best_mean() const { return means_[best_]; }
    double mean_gap(int a) const { return means_[best_] - means_[a]; }

  private:
    std::vector<Arm> arms_;
    std::vector<double> means_;
    int best_;
};

enum class TsSamplerKind { conjugate, metropolis_hastings };

struct TsJeffreysPolicy {
    TsSamplerKind sampler = TsSamplerKind::conjugate;
    MhConfig mh{};
};

struct Ucb1Policy {
    double exploration_c = 1.0;  // index = mean + c sqrt(2 ln t / N)
};

struct KlUcbPolicy {
    // true: explore against ln T (the full horizon); false: against ln t.
    bool horizon_aware = false;
};

struct UniformPolicy {};  // uniform arm choice every round; baseline only

using PolicyKind = std::variant<TsJeffreysPolicy, Ucb1Policy, KlUcbPolicy, UniformPolicy>;

struct RegretTrace {
    std::int64_t horizon = 0;
    std::vector<std::int32_t> chosen;          // size horizon, 0-based arm index
    std::vector<double> rewards;               // size horizon
    std::vector<std::int64_t> pulls;           // size K
    std::vector<double> cum_pseudo_regret;     // size horizon

    friend bool operator==(const RegretTrace&, const RegretTrace&) = default;
};

using PosteriorSampler =
    std::function<double(const Family&, const ArmPosterior&, RandomStream&)>;

// One Thompson sampling decision: draw theta_a from each arm's posterior via
// `sampler` (consuming that arm's stream) and return the argmax of posterior
// means. Draws whose mean diverges (Pareto with lambda <= 1) count as +inf;
// exact ties break uniformly via tie_break.
int ts_step(const BanditInstance& instance, std::span<const ArmPosterior> states,
            const PosteriorSampler& sampler, std::span<RandomStream> arm_streams,
            RandomStream& tie_break);

// Index policies over per-arm empirical reward means. Both require every arm
// pulled at least once.
int ucb1_step(std::span<const std::int64_t> pulls, std::span<const double> reward_sums,
              double exploration_c, std::int64_t t, RandomStream& tie_break);
int klucb_step(const BanditInstance& instance, std::span<const std::int64_t> pulls,
               std::span<const double> reward_sums, double log_time, RandomStream& tie_break);

// Largest mean m with N * K(mu^{-1}(empirical), mu^{-1}(m)) <= log_time;
// +inf when no mean in the family exhausts the budget.
double klucb_index(const Family& fam, double empirical_mean, std::int64_t n_pulls,
                   double log_time);

// Runs one bandit episode: rounds 1..K pull each arm once, afterwards the
// policy chooses. Deterministic given the seed: arm a consumes substream
// split(arm_stream_ids[a]) (ids default to 0..K-1) for rewards and posterior
// draws, the policy consumes a reserved substream for tie-breaks and uniform
// choices.
RegretTrace run_episode(const BanditInstance& instance, const PolicyKind& policy,
                        std::int64_t horizon, std::uint64_t seed,
                        std::span<const std::uint64_t> arm_stream_ids = {});

// Independent episodes for each seed, fanned out over up to `threads` workers
// (0 = hardware concurrency); results are returned in seed order.
std::vector<RegretTrace> run_batch(const BanditInstance& instance, const PolicyKind& policy,
                                   std::int64_t horizon, std::span<const std::uint64_t> seeds,
                                   int threads = 0);

// Asymptotic regret/ln T optimum: sum over suboptimal arms of
// (mu* - mu_a) / K(theta_a, theta*). Defined within a single family; mixed
// instances are rejected.
double lai_robbins_coefficient(const BanditInstance& instance);

}  // namespace expbandit
