#include <doctest.h>

#include <cmath>

#include "rlcore/agent.hpp"
#include "rlcore/env.hpp"

using namespace rlcore;

namespace {

double sparse_reward(const std::vector<double>& achieved, const std::vector<double>& desired) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < achieved.size(); ++i)
        d2 += (achieved[i] - desired[i]) * (achieved[i] - desired[i]);
    return std::sqrt(d2) <= 0.05 ? 0.0 : -1.0;
}

/// Synthetic goal episode: the agent walks along x, goal fixed far away.
/// obs layout matches the env contract: (features..., desired_goal).
std::vector<Transition> make_episode(int n) {
    std::vector<Transition> ep(n);
    const std::vector<double> goal = {10.0, 10.0};
    for (int i = 0; i < n; ++i) {
        const double x0 = 0.1 * i, x1 = 0.1 * (i + 1);
        ep[i].state = {x0, 0.0, goal[0], goal[1]};
        ep[i].action = {1.0, 0.0};
        ep[i].next_state = {x1, 0.0, goal[0], goal[1]};
        ep[i].achieved_goal = {x1, 0.0};
        ep[i].desired_goal = goal;
        ep[i].reward = sparse_reward(ep[i].achieved_goal, goal);
        ep[i].done = ep[i].reward == 0.0;
    }
    return ep;
}

} // namespace

TEST_CASE("her: k=0 returns the episode unchanged") {
    auto ep = make_episode(5);
    Rng rng(1);
    auto out = her_relabel(ep, 0, rng, sparse_reward);
    REQUIRE(out.size() == ep.size());
    for (std::size_t i = 0; i < ep.size(); ++i) {
        CHECK(out[i].state == ep[i].state);
        CHECK(out[i].reward == ep[i].reward);
        CHECK(out[i].desired_goal == ep[i].desired_goal);
    }
}

TEST_CASE("her: output cardinality follows the k-future formula") {
    auto ep = make_episode(10);
    Rng rng(2);
    const int k = 4;
    auto out = her_relabel(ep, k, rng, sparse_reward);
    // non-final steps: 1 original + k relabels; final step: 1 original + 1 self relabel
    CHECK(out.size() == (ep.size() - 1) * (k + 1) + 2);
}

TEST_CASE("her: final transition relabeled with its own achieved goal succeeds") {
    auto ep = make_episode(4);
    Rng rng(3);
    auto out = her_relabel(ep, 2, rng, sparse_reward);
    // the last two entries are the final original and its self-goal relabel
    const Transition& self = out.back();
    CHECK(self.desired_goal == ep.back().achieved_goal);
    CHECK(self.reward == 0.0);
    CHECK(self.done);
}

TEST_CASE("her: every relabeled reward matches the environment oracle exactly") {
    auto ep = make_episode(12);
    Rng rng(4);
    auto out = her_relabel(ep, 4, rng, sparse_reward);
    for (const Transition& t : out) {
        CHECK(t.reward == sparse_reward(t.achieved_goal, t.desired_goal));
        CHECK(t.done == (t.reward == 0.0));
        // the goal slice of the observations was rewritten to the new goal
        REQUIRE(t.state.size() == 4);
        CHECK(t.state[2] == t.desired_goal[0]);
        CHECK(t.state[3] == t.desired_goal[1]);
        CHECK(t.next_state[2] == t.desired_goal[0]);
        CHECK(t.next_state[3] == t.desired_goal[1]);
    }
}

TEST_CASE("her: relabeled goals come from the future of the same episode") {
    auto ep = make_episode(8);
    Rng rng(5);
    auto out = her_relabel(ep, 3, rng, sparse_reward);
    // walk the output: per original index i, relabels carry goals achieved at j > i
    std::size_t pos = 0;
    for (int i = 0; i < 8; ++i) {
        const Transition& original = out[pos++];
        CHECK(original.desired_goal == ep[i].desired_goal);
        const int copies = i == 7 ? 1 : 3;
        for (int c = 0; c < copies; ++c) {
            const Transition& relabeled = out[pos++];
            bool from_future = false;
            for (int j = i == 7 ? i : i + 1; j < 8; ++j)
                if (relabeled.desired_goal == ep[j].achieved_goal) from_future = true;
            CHECK(from_future);
        }
    }
    CHECK(pos == out.size());
}

TEST_CASE("her: transitions without goals are rejected") {
    std::vector<Transition> ep(3);
    for (auto& t : ep) {
        t.state = {0, 0};
        t.action = {0};
        t.next_state = {0, 0};
    }
    Rng rng(6);
    CHECK_THROWS_AS(her_relabel(ep, 2, rng, sparse_reward), DimensionError);
}

TEST_CASE("her: pointmass env oracle agrees with relabeled rewards end to end") {
    PointmassGoalEnv env;
    std::vector<Transition> ep;
    std::vector<double> obs = env.reset(17);
    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        std::vector<double> a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        StepResult sr = env.step(a);
        Transition t;
        t.state = obs;
        t.action = a;
        t.reward = sr.reward;
        t.next_state = sr.obs;
        t.done = sr.done;
        t.achieved_goal = sr.achieved_goal;
        t.desired_goal = env.desired_goal();
        ep.push_back(t);
        obs = sr.obs;
        if (sr.done || sr.truncated) break;
    }
    auto out = her_relabel(ep, 4, rng, [&env](const auto& a, const auto& d) {
        return env.goal_reward(a, d);
    });
    for (const Transition& t : out)
        CHECK(t.reward == env.goal_reward(t.achieved_goal, t.desired_goal));
}
