#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "whittle/bandit_core.hpp"
#include "whittle/rng.hpp"
#include "whittle/sim.hpp"
#include "whittle/whittle_index.hpp"

using namespace whittle;

namespace {

// Five-arm demo catalogs: four TypeA arms and one TypeB arm.
SimConfig five_arm_config(const double* rho0, const double* rho1, const double* p) {
    SimConfig c;
    for (int i = 0; i < 5; ++i)
        c.arms.push_back(i < 4 ? ArmModel::base(ArmKind::TypeA, p[i], rho0[i], rho1[i])
                               : ArmModel::base(ArmKind::TypeB, p[i], rho0[i], rho1[i]));
    c.initial_beliefs.assign(5, 0.4);
    c.criterion = Criterion::discounted(0.99);
    return c;
}

SimConfig catalog_a() {
    const double r0[] = {0.07, 0.04, 0.05, 0.12, 0.99};
    const double r1[] = {0.71, 0.85, 0.77, 0.76, 0.88};
    const double p[] = {0.09, 0.23, 0.23, 0.12, 0.27};
    return five_arm_config(r0, r1, p);
}

SimConfig catalog_c() {
    const double r0[] = {0.07, 0.09, 0.01, 0.19, 0.04};
    const double r1[] = {0.63, 0.71, 0.66, 0.75, 0.77};
    const double p[] = {0.29, 0.28, 0.03, 0.22, 0.18};
    return five_arm_config(r0, r1, p);
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig c = catalog_a();
    CHECK_NOTHROW(c.validate());
    c.initial_beliefs.pop_back();
    CHECK_THROWS(c.validate());
    c = catalog_a();
    c.horizon = -1;
    CHECK_THROWS(c.validate());
    c = catalog_a();
    c.initial_beliefs[0] = 1.5;
    CHECK_THROWS(c.validate());
    SimConfig empty;
    CHECK_THROWS(empty.validate());
}

TEST_CASE("whittle selection") {
    auto c = catalog_a();
    std::vector<Belief> b(5, Belief{0.4});
    // the TypeB arm with near-unit reward probabilities dominates
    CHECK(select_whittle(b, c.arms, Criterion::discounted(0.99)) == 4);

    // two identical arms at identical beliefs: lowest id wins
    std::vector<ArmModel> twins(2, ArmModel::base(ArmKind::TypeA, 0.2, 0.1, 0.7));
    std::vector<Belief> tb(2, Belief{0.3});
    CHECK(select_whittle(tb, twins, Criterion::discounted(0.9)) == 0);

    // average criterion: a TypeB arm's constant rho1 beats TypeA arms whose
    // indices stay strictly below it
    std::vector<ArmModel> mix = {ArmModel::base(ArmKind::TypeA, 0.2, 0.1, 0.6),
                                 ArmModel::base(ArmKind::TypeA, 0.3, 0.2, 0.65),
                                 ArmModel::base(ArmKind::TypeB, 0.25, 0.1, 0.7)};
    std::vector<Belief> mb = {Belief{0.5}, Belief{0.5}, Belief{0.5}};
    CHECK(select_whittle(mb, mix, Criterion::average_reward()) == 2);
}

TEST_CASE("myopic selection") {
    auto c = catalog_a();
    std::vector<Belief> b(5, Belief{0.4});
    CHECK(select_myopic(b, c.arms) == 4);
    // all beliefs at 0: argmax rho1 (arm 5 of catalog a has the odd rho0 > rho1)
    std::vector<Belief> zeros(5, Belief{0.0});
    CHECK(select_myopic(zeros, c.arms) == 4);  // rho1 = 0.88 is the largest
    // all beliefs at 1: argmax rho0
    std::vector<Belief> ones(5, Belief{1.0});
    CHECK(select_myopic(ones, c.arms) == 4);  // rho0 = 0.99
}

TEST_CASE("argmax invariance under a common index shift") {
    SplitMix64 rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> w(7);
        for (auto& x : w) x = rng.next_double();
        std::vector<double> shifted = w;
        const double c = 10.0 * (rng.next_double() - 0.5);
        for (auto& x : shifted) x += c;
        CHECK(argmax_tie_lowest(w) == argmax_tie_lowest(shifted));
    }
}

TEST_CASE("environment transitions follow the arm diagrams") {
    // Played TypeA arm in hidden state 0 stays in state 0 with probability 1.
    auto a = ArmModel::base(ArmKind::TypeA, 0.3, 0.1, 0.7);
    auto b = ArmModel::base(ArmKind::TypeB, 0.3, 0.1, 0.7);
    std::vector<ArmModel> arms = {a, b};
    ArmStreams streams(5, arms.size());
    EnvState st;
    st.hidden = {0, 0};
    st.beliefs = {Belief{0.5}, Belief{0.5}};
    st.steps_since_play = {0, 0};
    for (int rep = 0; rep < 200; ++rep) {
        st.hidden = {0, 0};
        env_step(st, arms, 0, streams);
        CHECK(st.hidden[0] == 0);   // played TypeA resets to 0
        CHECK(st.hidden[1] == 0);   // unplayed TypeB in state 0 stays 0
        CHECK(st.beliefs[0].pi == 1.0);
        CHECK(st.steps_since_play[0] == 0);
        CHECK(st.steps_since_play[1] == rep + 1);
    }
    // Unplayed TypeA in state 0 flips to 1 at rate p (3-sigma band).
    int flips = 0;
    const int n = 4000;
    ArmStreams s2(17, 2);
    for (int rep = 0; rep < n; ++rep) {
        EnvState e;
        e.hidden = {0, 0};
        e.beliefs = {Belief{0.5}, Belief{0.5}};
        e.steps_since_play = {0, 0};
        env_step(e, arms, 1, s2);
        flips += e.hidden[0];
    }
    const double phat = static_cast<double>(flips) / n;
    CHECK(std::fabs(phat - a.p) < 3.0 * std::sqrt(a.p * (1 - a.p) / n));
    // played TypeB resets to state 1 / belief 0
    EnvState e;
    e.hidden = {0, 0};
    e.beliefs = {Belief{0.5}, Belief{0.5}};
    e.steps_since_play = {0, 0};
    env_step(e, arms, 1, s2);
    CHECK(e.hidden[1] == 1);
    CHECK(e.beliefs[1].pi == 0.0);
    CHECK_THROWS(env_step(e, arms, 9, s2));
}

TEST_CASE("episodes: degenerate horizons, single arm, determinism") {
    auto c = catalog_a();
    c.horizon = 0;
    auto empty = run_episode(c, 1);
    CHECK(empty.actions.empty());
    CHECK(empty.cumulative.empty());

    SimConfig solo;
    solo.arms = {ArmModel::base(ArmKind::TypeA, 0.2, 0.1, 0.7)};
    solo.initial_beliefs = {0.4};
    solo.horizon = 50;
    auto tr = run_episode(solo, 3);
    CHECK(tr.play_counts[0] == 50);
    for (int a : tr.actions) CHECK(a == 0);
    // played TypeA arm's belief reads 1 after every step
    for (const auto& row : tr.beliefs) CHECK(row[0] == 1.0);

    c = catalog_a();
    c.horizon = 300;
    auto t1 = run_episode(c, 77);
    auto t2 = run_episode(c, 77);
    CHECK(t1.actions == t2.actions);
    CHECK(t1.rewards == t2.rewards);
    CHECK(t1.cumulative == t2.cumulative);
    auto t3 = run_episode(c, 78);
    CHECK(t1.rewards != t3.rewards);

    // exactly one arm per step, cumulative reward non-decreasing
    long total_plays = std::accumulate(t1.play_counts.begin(), t1.play_counts.end(), 0L);
    CHECK(total_plays == 300);
    for (std::size_t t = 1; t < t1.cumulative.size(); ++t)
        CHECK(t1.cumulative[t] >= t1.cumulative[t - 1]);
}

TEST_CASE("adding an arm does not perturb existing arms' draws") {
    // Myopic keeps playing arm 1 (rho(pi) >= 0.1 beats the dead arm's 0.02
    // ceiling), so the action sequence is unchanged and arm 1's stream must
    // deliver identical rewards.
    SimConfig solo;
    solo.arms = {ArmModel::base(ArmKind::TypeA, 0.2, 0.1, 0.7)};
    solo.initial_beliefs = {0.4};
    solo.policy = PolicyKind::Myopic;
    solo.horizon = 80;
    auto before = run_episode(solo, 911);

    SimConfig duo = solo;
    duo.arms.push_back(ArmModel::base(ArmKind::TypeA, 0.2, 0.01, 0.02));
    duo.initial_beliefs.push_back(0.4);
    auto after = run_episode(duo, 911);
    for (int t = 0; t < 80; ++t) {
        CHECK(after.actions[t] == 0);
        CHECK(after.rewards[t] == before.rewards[t]);
    }
}

TEST_CASE("forced single-arm rewards track the belief sequence (LLN)") {
    // With one arm the policy is forced; the belief sequence is deterministic
    // (play resets it to 1 every step for TypeA, so rho(1) = rho0 after step
    // one). Compare empirical means per step against the closed form.
    SimConfig solo;
    solo.arms = {ArmModel::base(ArmKind::TypeB, 0.25, 0.15, 0.8)};
    solo.initial_beliefs = {0.6};
    solo.horizon = 6;
    const int n_seeds = 4000;
    std::vector<double> mean(solo.horizon, 0.0);
    for (int s = 0; s < n_seeds; ++s) {
        auto tr = run_episode(solo, 50000 + s);
        for (long t = 0; t < solo.horizon; ++t) mean[t] += tr.rewards[t];
    }
    // expected per-step reward: rho(belief_t); belief gets pinned to 0 by play
    std::vector<double> expected = {expected_reward(solo.arms[0], Belief{0.6})};
    for (long t = 1; t < solo.horizon; ++t)
        expected.push_back(expected_reward(solo.arms[0], Belief{0.0}));
    for (long t = 0; t < solo.horizon; ++t) {
        mean[t] /= n_seeds;
        const double sigma = std::sqrt(expected[t] * (1 - expected[t]) / n_seeds);
        CHECK(std::fabs(mean[t] - expected[t]) < 3.5 * sigma);
    }
}

TEST_CASE("hidden states match beliefs in frequency for rested arms") {
    // Arm 2 is never selected (tiny rewards); its belief trajectory is
    // deterministic and its hidden state is sampled independently per seed.
    SimConfig c;
    c.arms = {ArmModel::base(ArmKind::TypeB, 0.3, 0.4, 0.9),
              ArmModel::base(ArmKind::TypeA, 0.2, 0.01, 0.02)};
    c.initial_beliefs = {0.5, 0.7};
    c.policy = PolicyKind::Myopic;
    c.horizon = 5;
    const int n_seeds = 4000;
    std::vector<double> freq0(c.horizon, 0.0);
    std::vector<double> belief(c.horizon, 0.0);
    for (int s = 0; s < n_seeds; ++s) {
        ArmStreams streams(40000 + s, 2);
        EnvState st = env_init(c.arms, c.initial_beliefs, streams);
        for (long t = 0; t < c.horizon; ++t) {
            env_step(st, c.arms, 0, streams);  // always play arm 1, rest arm 2
            freq0[t] += st.hidden[1] == 0 ? 1.0 : 0.0;
            belief[t] = st.beliefs[1].pi;
        }
    }
    for (long t = 0; t < c.horizon; ++t) {
        freq0[t] /= n_seeds;
        const double sigma = std::sqrt(belief[t] * (1 - belief[t]) / n_seeds);
        CHECK(std::fabs(freq0[t] - belief[t]) < 3.5 * sigma);
    }
}

TEST_CASE("batch aggregation: catalog c separates whittle from myopic") {
    auto c = catalog_c();
    c.horizon = 400;
    for (int s = 0; s < 40; ++s) c.seeds.push_back(2000 + s);
    auto batches = run_batch(c, {PolicyKind::Whittle, PolicyKind::Myopic});
    REQUIRE(batches.size() == 2);
    const auto& wi = batches[0];
    const auto& my = batches[1];
    CHECK(wi.final_mean >
          my.final_mean + 1.645 * std::hypot(wi.final_stderr, my.final_stderr));
    // whittle farms the type-B arm, myopic abandons it
    CHECK(wi.mean_play_counts[4] > my.mean_play_counts[4]);
    // identical seed list twice is bit-identical
    auto again = run_batch(c, {PolicyKind::Whittle});
    CHECK(again[0].mean_cumulative == wi.mean_cumulative);
    // mean cumulative curves are non-decreasing
    for (std::size_t t = 1; t < wi.mean_cumulative.size(); ++t)
        CHECK(wi.mean_cumulative[t] >= wi.mean_cumulative[t - 1]);
}

TEST_CASE("random catalog generator") {
    auto arms = generate_random_arms(50, 2, 99);
    REQUIRE(arms.size() == 50);
    for (int i = 0; i < 48; ++i) CHECK(arms[i].kind == ArmKind::TypeA);
    for (int i = 48; i < 50; ++i) CHECK(arms[i].kind == ArmKind::TypeB);
    for (const auto& a : arms) {
        CHECK(a.rho0 >= 0.01);
        CHECK(a.rho0 <= 0.2);
        CHECK(a.rho1 >= 0.6);
        CHECK(a.rho1 <= 0.9);
        CHECK(a.p >= 0.01);
        CHECK(a.p <= 0.3);
    }
    // deterministic in the seed
    auto again = generate_random_arms(50, 2, 99);
    CHECK(again[17].p == arms[17].p);
    auto other = generate_random_arms(50, 2, 100);
    CHECK(other[17].p != arms[17].p);
    CHECK_THROWS(generate_random_arms(0, 0, 1));
    CHECK_THROWS(generate_random_arms(5, 6, 1));
}
