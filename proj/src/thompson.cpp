#include "whittle/thompson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "whittle/parallel.hpp"
#include "whittle/whittle_index.hpp"

namespace whittle {

namespace {

constexpr std::uint64_t kEnvSalt = 0;      // must match run_episode's layout
constexpr std::uint64_t kLearnerSalt = 1;  // candidate sampling side-channel

double reset_belief(ArmKind kind) { return kind == ArmKind::TypeA ? 1.0 : 0.0; }

ArmModel candidate_model(const ArmModel& true_arm, const Candidate& theta) {
    ArmModel m = true_arm;  // keep kind and variant
    m.p = theta.p;
    m.rho0 = theta.rho0;
    m.rho1 = theta.rho1;
    return m;
}

int sample_from(const std::vector<double>& weights, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

}  // namespace

Belief derived_belief(ArmKind kind, double p_hat, long k, double pi_ref) {
    if (k < 0) throw std::invalid_argument("rest count must be nonnegative");
    const double decay = std::pow(1.0 - p_hat, static_cast<double>(k));
    if (kind == ArmKind::TypeA) return Belief{clamp01(decay * pi_ref)};
    return Belief{clamp01(1.0 - decay * (1.0 - pi_ref))};
}

double likelihood(ArmKind kind, const Candidate& theta, long k, int reward, double pi_ref) {
    const Belief b = derived_belief(kind, theta.p, k, pi_ref);
    const double f = b.pi * theta.rho0 + (1.0 - b.pi) * theta.rho1;
    return reward == 1 ? f : 1.0 - f;
}

double likelihood(ArmKind kind, const Candidate& theta, long k, int reward) {
    return likelihood(kind, theta, k, reward, reset_belief(kind));
}

std::vector<double> ArmPosterior::weights() const {
    std::vector<double> w(log_weights.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i]);
    return w;
}

void ArmPosterior::normalize() {
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    double sum = 0.0;
    for (double lw : log_weights) sum += std::exp(lw - top);
    const double log_total = top + std::log(sum);
    for (double& lw : log_weights) lw -= log_total;
}

void posterior_update(ArmPosterior& posterior, ArmKind kind,
                      const std::vector<Candidate>& grid, long k, int reward, double pi_ref) {
    if (grid.size() != posterior.log_weights.size())
        throw std::invalid_argument("posterior/grid size mismatch");
    bool any = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double like = likelihood(kind, grid[i], k, reward, pi_ref);
        if (like > 0.0) {
            posterior.log_weights[i] += std::log(like);
            any = true;
        } else {
            posterior.log_weights[i] = -std::numeric_limits<double>::infinity();
        }
    }
    if (!any) throw std::logic_error("all candidate likelihoods vanished (zero evidence)");
    posterior.normalize();
}

void LearningConfig::validate() const {
    if (true_arms.empty()) throw std::invalid_argument("learning needs at least one arm");
    if (grids.size() != true_arms.size())
        throw std::invalid_argument("one candidate grid per arm is required");
    for (const auto& a : true_arms) a.validate();
    for (std::size_t i = 0; i < grids.size(); ++i) {
        if (grids[i].empty()) throw std::invalid_argument("candidate grids must be nonempty");
        for (const auto& c : grids[i]) candidate_model(true_arms[i], c).validate();
    }
    if (!prior.empty()) {
        if (prior.size() != grids.size())
            throw std::invalid_argument("prior must list one weight vector per arm");
        for (std::size_t i = 0; i < prior.size(); ++i) {
            if (prior[i].size() != grids[i].size())
                throw std::invalid_argument("prior size must match the candidate grid");
            double sum = 0.0;
            for (double w : prior[i]) {
                if (w < 0.0) throw std::invalid_argument("prior weights must be nonnegative");
                sum += w;
            }
            if (std::fabs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("prior weights must sum to 1");
        }
    }
    if (!initial_beliefs.empty() && initial_beliefs.size() != true_arms.size())
        throw std::invalid_argument("initial_beliefs must match the number of arms");
    if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
    if (true_candidate_indices().empty())
        throw std::invalid_argument("each arm's true parameters must be a grid member");
    if (base_policy == PolicyKind::UniformRandom)
        throw std::invalid_argument("the learner's base policy must be whittle or myopic");
}

std::vector<int> LearningConfig::true_candidate_indices() const {
    std::vector<int> idx;
    for (std::size_t i = 0; i < true_arms.size(); ++i) {
        int found = -1;
        for (std::size_t c = 0; c < grids[i].size(); ++c) {
            const auto& cand = grids[i][c];
            if (std::fabs(cand.p - true_arms[i].p) < 1e-12 &&
                std::fabs(cand.rho0 - true_arms[i].rho0) < 1e-12 &&
                std::fabs(cand.rho1 - true_arms[i].rho1) < 1e-12) {
                found = static_cast<int>(c);
                break;
            }
        }
        if (found < 0) return {};
        idx.push_back(found);
    }
    return idx;
}

LearningTrace run_learning(const LearningConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t n = config.true_arms.size();
    const std::vector<double> init_beliefs =
        config.initial_beliefs.empty() ? std::vector<double>(n, 1.0) : config.initial_beliefs;
    const std::vector<int> true_idx = config.true_candidate_indices();

    ArmStreams env_streams(seed, n, kEnvSalt);
    ArmStreams learner_streams(seed, n, kLearnerSalt);
    EnvState env = env_init(config.true_arms, init_beliefs, env_streams);

    std::vector<ArmPosterior> posteriors(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& post = posteriors[i];
        post.log_weights.resize(config.grids[i].size());
        if (config.prior.empty()) {
            const double lw = -std::log(static_cast<double>(config.grids[i].size()));
            std::fill(post.log_weights.begin(), post.log_weights.end(), lw);
        } else {
            for (std::size_t c = 0; c < config.prior[i].size(); ++c)
                post.log_weights[c] = config.prior[i][c] > 0.0
                                          ? std::log(config.prior[i][c])
                                          : -std::numeric_limits<double>::infinity();
            post.normalize();
        }
        post.sampled = sample_from(post.weights(), learner_streams.arm(i).next_double());
    }

    // rest counters and reference beliefs for the learner's derived beliefs
    std::vector<long> rest(n, 0);
    std::vector<double> pi_ref(init_beliefs);

    LearningTrace out;
    out.trace.play_counts.assign(n, 0);
    out.mismatch_cum.reserve(config.horizon);
    double total = 0.0;
    long mismatches = 0;
    std::vector<Belief> beliefs_hat(n);
    std::vector<ArmModel> sampled_arms(n, config.true_arms[0]);
    for (std::size_t i = 0; i < n; ++i)
        sampled_arms[i] = candidate_model(config.true_arms[i], config.grids[i][posteriors[i].sampled]);

    for (long t = 0; t < config.horizon; ++t) {
        for (std::size_t i = 0; i < n; ++i)
            beliefs_hat[i] =
                derived_belief(config.true_arms[i].kind, sampled_arms[i].p, rest[i], pi_ref[i]);
        const int a = config.base_policy == PolicyKind::Whittle
                          ? select_whittle(beliefs_hat, sampled_arms, config.criterion)
                          : select_myopic(beliefs_hat, sampled_arms);
        const int r = env_step(env, config.true_arms, a, env_streams);
        total += r;

        // Bayes update for the played arm with its pre-play rest count, then
        // resample that arm's candidate (optionally all arms).
        posterior_update(posteriors[a], config.true_arms[a].kind, config.grids[a], rest[a], r,
                         pi_ref[a]);
        if (config.resample_all) {
            for (std::size_t i = 0; i < n; ++i) {
                posteriors[i].sampled =
                    sample_from(posteriors[i].weights(), learner_streams.arm(i).next_double());
                sampled_arms[i] = candidate_model(config.true_arms[i], config.grids[i][posteriors[i].sampled]);
            }
        } else {
            posteriors[a].sampled =
                sample_from(posteriors[a].weights(), learner_streams.arm(a).next_double());
            sampled_arms[a] = candidate_model(config.true_arms[a], config.grids[a][posteriors[a].sampled]);
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<int>(i) == a) {
                rest[i] = 0;
                pi_ref[i] = reset_belief(config.true_arms[i].kind);
            } else {
                rest[i] += 1;
            }
        }

        bool wrong = false;
        std::vector<double> mass(n);
        for (std::size_t i = 0; i < n; ++i) {
            mass[i] = posteriors[i].weights()[true_idx[i]];
            if (posteriors[i].sampled != true_idx[i]) wrong = true;
        }
        if (wrong) ++mismatches;

        out.trace.actions.push_back(a);
        out.trace.rewards.push_back(r);
        out.trace.cumulative.push_back(total);
        out.trace.play_counts[a] += 1;
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = beliefs_hat[i].pi;
        out.trace.beliefs.push_back(std::move(row));
        out.mass_on_true.push_back(std::move(mass));
        out.mismatch_cum.push_back(mismatches);
    }
    return out;
}

LearningReport learning_report(const LearningConfig& config) {
    config.validate();
    const std::size_t n_seeds = config.seeds.size();
    const std::size_t horizon = static_cast<std::size_t>(config.horizon);
    const std::size_t n = config.true_arms.size();
    if (n_seeds == 0) throw std::invalid_argument("learning report needs at least one seed");

    SimConfig oracle_cfg;
    oracle_cfg.arms = config.true_arms;
    oracle_cfg.initial_beliefs =
        config.initial_beliefs.empty() ? std::vector<double>(n, 1.0) : config.initial_beliefs;
    oracle_cfg.criterion = config.criterion;
    oracle_cfg.policy = config.base_policy;
    oracle_cfg.horizon = config.horizon;

    struct PerSeed {
        std::vector<double> learner, oracle, random, mismatch;
        std::vector<std::vector<double>> mass;
    };
    std::vector<PerSeed> runs(n_seeds);
    parallel_for(n_seeds, [&](std::size_t s) {
        const std::uint64_t seed = config.seeds[s];
        LearningTrace lt = run_learning(config, seed);
        runs[s].learner = std::move(lt.trace.cumulative);
        runs[s].mass = std::move(lt.mass_on_true);
        runs[s].mismatch.assign(lt.mismatch_cum.begin(), lt.mismatch_cum.end());
        runs[s].oracle = run_episode(oracle_cfg, seed).cumulative;
        SimConfig rnd = oracle_cfg;
        rnd.policy = PolicyKind::UniformRandom;
        runs[s].random = run_episode(rnd, seed).cumulative;
    });

    LearningReport rep;
    rep.mean_learner_cum.assign(horizon, 0.0);
    rep.mean_oracle_cum.assign(horizon, 0.0);
    rep.mean_random_cum.assign(horizon, 0.0);
    rep.regret_vs_oracle.assign(horizon, 0.0);
    rep.mean_mismatch.assign(horizon, 0.0);
    rep.mean_mass_on_true.assign(horizon, std::vector<double>(n, 0.0));
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t s = 0; s < n_seeds; ++s) {
            rep.mean_learner_cum[t] += runs[s].learner[t];
            rep.mean_oracle_cum[t] += runs[s].oracle[t];
            rep.mean_random_cum[t] += runs[s].random[t];
            rep.mean_mismatch[t] += runs[s].mismatch[t];
            for (std::size_t i = 0; i < n; ++i) rep.mean_mass_on_true[t][i] += runs[s].mass[t][i];
        }
        const double inv = 1.0 / static_cast<double>(n_seeds);
        rep.mean_learner_cum[t] *= inv;
        rep.mean_oracle_cum[t] *= inv;
        rep.mean_random_cum[t] *= inv;
        rep.mean_mismatch[t] *= inv;
        for (std::size_t i = 0; i < n; ++i) rep.mean_mass_on_true[t][i] *= inv;
        rep.regret_vs_oracle[t] = rep.mean_oracle_cum[t] - rep.mean_learner_cum[t];
    }
    return rep;
}

}  // namespace whittle
