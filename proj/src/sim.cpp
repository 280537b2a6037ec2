#include "whittle/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "whittle/parallel.hpp"
#include "whittle/whittle_index.hpp"

namespace whittle {

namespace {

constexpr std::uint64_t kEnvSalt = 0;
constexpr std::uint64_t kPolicyStream = 0;  // arm streams start at id 1

int passive_hidden_step(const ArmModel& m, int hidden, double u) {
    if (m.variant == ModelVariant::DualSpeedZero)
        return hidden == 0 ? (u < m.p ? 1 : 0) : (u < m.q ? 0 : 1);
    if (m.kind == ArmKind::TypeA) return hidden == 0 ? (u < m.p ? 1 : 0) : 1;
    return hidden == 1 ? (u < m.p ? 0 : 1) : 0;
}

}  // namespace

std::string to_string(PolicyKind policy) {
    switch (policy) {
        case PolicyKind::Whittle: return "whittle";
        case PolicyKind::Myopic: return "myopic";
        default: return "random";
    }
}

void SimConfig::validate() const {
    if (arms.empty()) throw std::invalid_argument("simulation needs at least one arm");
    if (arms.size() != initial_beliefs.size())
        throw std::invalid_argument("initial_beliefs must match the number of arms");
    for (const auto& a : arms) a.validate();
    for (double b : initial_beliefs)
        if (!(b >= 0.0 && b <= 1.0))
            throw std::invalid_argument("initial beliefs must lie in [0,1]");
    if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
    if (!criterion.average) Criterion::discounted(criterion.beta);
}

int argmax_tie_lowest(const std::vector<double>& values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

int select_whittle(const std::vector<Belief>& beliefs, const std::vector<ArmModel>& arms,
                   const Criterion& criterion) {
    std::vector<double> w(arms.size());
    for (std::size_t i = 0; i < arms.size(); ++i)
        w[i] = criterion.average ? index_average(arms[i], beliefs[i]).w
                                 : index_discounted(arms[i], criterion.beta, beliefs[i]).w;
    return argmax_tie_lowest(w);
}

int select_myopic(const std::vector<Belief>& beliefs, const std::vector<ArmModel>& arms) {
    std::vector<double> r(arms.size());
    for (std::size_t i = 0; i < arms.size(); ++i) r[i] = expected_reward(arms[i], beliefs[i]);
    return argmax_tie_lowest(r);
}

EnvState env_init(const std::vector<ArmModel>& arms, const std::vector<double>& initial_beliefs,
                  ArmStreams& streams) {
    EnvState st;
    const std::size_t n = arms.size();
    st.hidden.resize(n);
    st.beliefs.resize(n);
    st.steps_since_play.assign(n, 0);
    st.t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        st.beliefs[i] = Belief{clamp01(initial_beliefs[i])};
        st.hidden[i] = streams.arm(i).next_double() < initial_beliefs[i] ? 0 : 1;
    }
    return st;
}

int env_step(EnvState& state, const std::vector<ArmModel>& arms, int action, ArmStreams& streams) {
    if (action < 0 || action >= static_cast<int>(arms.size()))
        throw std::invalid_argument("played arm out of range");
    int reward = 0;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const ArmModel& m = arms[i];
        const double u_trans = streams.arm(i).next_double();
        const double u_reward = streams.arm(i).next_double();
        if (static_cast<int>(i) == action) {
            const double rho = state.hidden[i] == 0 ? m.rho0 : m.rho1;
            reward = u_reward < rho ? 1 : 0;
            // play resets the state with probability one in both variants
            state.hidden[i] = m.kind == ArmKind::TypeA ? 0 : 1;
            state.beliefs[i] = belief_step_active(m, state.beliefs[i]);
            state.steps_since_play[i] = 0;
        } else {
            state.hidden[i] = passive_hidden_step(m, state.hidden[i], u_trans);
            state.beliefs[i] = belief_step_passive(m, state.beliefs[i]);
            state.steps_since_play[i] += 1;
        }
    }
    state.t += 1;
    return reward;
}

SimulationTrace run_episode(const SimConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t n = config.arms.size();
    ArmStreams streams(seed, n, kEnvSalt);
    SplitMix64 policy_rng(stream_seed(seed, kPolicyStream, kEnvSalt));
    EnvState st = env_init(config.arms, config.initial_beliefs, streams);

    SimulationTrace trace;
    trace.actions.reserve(config.horizon);
    trace.rewards.reserve(config.horizon);
    trace.cumulative.reserve(config.horizon);
    trace.beliefs.reserve(config.horizon);
    trace.play_counts.assign(n, 0);
    double total = 0.0;
    for (long t = 0; t < config.horizon; ++t) {
        int a;
        switch (config.policy) {
            case PolicyKind::Whittle: a = select_whittle(st.beliefs, config.arms, config.criterion); break;
            case PolicyKind::Myopic: a = select_myopic(st.beliefs, config.arms); break;
            default: {
                const double u = policy_rng.next_double();
                a = std::min(static_cast<int>(u * static_cast<double>(n)),
                             static_cast<int>(n) - 1);
            }
        }
        const int r = env_step(st, config.arms, a, streams);
        total += r;
        trace.actions.push_back(a);
        trace.rewards.push_back(r);
        trace.cumulative.push_back(total);
        trace.play_counts[a] += 1;
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = st.beliefs[i].pi;
        trace.beliefs.push_back(std::move(row));
    }
    return trace;
}

std::vector<PolicyBatch> run_batch(const SimConfig& config,
                                   const std::vector<PolicyKind>& policies) {
    config.validate();
    const std::size_t n_seeds = config.seeds.size();
    const std::size_t n_arms = config.arms.size();
    const std::size_t horizon = static_cast<std::size_t>(config.horizon);
    std::vector<PolicyBatch> out;
    for (PolicyKind policy : policies) {
        SimConfig cfg = config;
        cfg.policy = policy;
        std::vector<std::vector<double>> cum(n_seeds);
        std::vector<std::vector<long>> plays(n_seeds);
        parallel_for(n_seeds, [&](std::size_t s) {
            SimulationTrace tr = run_episode(cfg, cfg.seeds[s]);
            cum[s] = std::move(tr.cumulative);
            plays[s] = std::move(tr.play_counts);
        });
        PolicyBatch batch;
        batch.policy = policy;
        batch.mean_cumulative.assign(horizon, 0.0);
        batch.stderr_cumulative.assign(horizon, 0.0);
        batch.mean_play_counts.assign(n_arms, 0.0);
        if (n_seeds == 0) {
            out.push_back(std::move(batch));
            continue;
        }
        for (std::size_t t = 0; t < horizon; ++t) {
            double sum = 0.0;
            for (std::size_t s = 0; s < n_seeds; ++s) sum += cum[s][t];
            const double mean = sum / static_cast<double>(n_seeds);
            batch.mean_cumulative[t] = mean;
            if (n_seeds > 1) {
                double ss = 0.0;
                for (std::size_t s = 0; s < n_seeds; ++s) {
                    const double d = cum[s][t] - mean;
                    ss += d * d;
                }
                batch.stderr_cumulative[t] =
                    std::sqrt(ss / static_cast<double>(n_seeds - 1)) /
                    std::sqrt(static_cast<double>(n_seeds));
            }
        }
        for (std::size_t i = 0; i < n_arms; ++i) {
            double sum = 0.0;
            for (std::size_t s = 0; s < n_seeds; ++s) sum += static_cast<double>(plays[s][i]);
            batch.mean_play_counts[i] = sum / static_cast<double>(n_seeds);
        }
        if (horizon > 0) {
            batch.final_mean = batch.mean_cumulative.back();
            batch.final_stderr = batch.stderr_cumulative.back();
        }
        out.push_back(std::move(batch));
    }
    return out;
}

PolicyBatch run_batch(const SimConfig& config) {
    return run_batch(config, std::vector<PolicyKind>{config.policy}).front();
}

std::vector<ArmModel> generate_random_arms(int n, int n_type_b, std::uint64_t seed) {
    if (n <= 0 || n_type_b < 0 || n_type_b > n)
        throw std::invalid_argument("invalid catalog sizes");
    SplitMix64 rng(stream_seed(seed, 42, /*salt=*/7));
    std::vector<double> rho0(n), rho1(n), p(n);
    for (int i = 0; i < n; ++i) rho0[i] = 0.01 + 0.19 * rng.next_double();
    for (int i = 0; i < n; ++i) rho1[i] = 0.6 + 0.3 * rng.next_double();
    for (int i = 0; i < n; ++i) p[i] = 0.01 + 0.29 * rng.next_double();
    std::vector<ArmModel> arms;
    arms.reserve(n);
    for (int i = 0; i < n; ++i) {
        const ArmKind kind = i < n - n_type_b ? ArmKind::TypeA : ArmKind::TypeB;
        arms.push_back(ArmModel::base(kind, p[i], rho0[i], rho1[i]));
    }
    return arms;
}

}  // namespace whittle
