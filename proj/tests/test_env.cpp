#include <doctest.h>

#include <cmath>

#include "rlcore/env.hpp"

using namespace rlcore;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi)); // endpoint convention
    CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(2 * kPi + 0.25) == doctest::Approx(0.25));
    CHECK(wrap_angle(-2 * kPi - 0.25) == doctest::Approx(-0.25));
}

TEST_CASE("registry knows the three environments") {
    CHECK(make_env("pendulum")->spec().obs_dim == 3);
    CHECK(make_env("cartpole-swingup")->spec().obs_dim == 5);
    CHECK(make_env("pointmass-goal")->spec().obs_dim == 6);
    CHECK(make_env("pointmass-goal")->spec().goal_dim == 2);
    CHECK_THROWS_AS(make_env("mujoco-ant"), ConfigError);
}

TEST_CASE("reset determinism and trajectory determinism") {
    for (const char* name : {"pendulum", "cartpole-swingup", "pointmass-goal"}) {
        auto env1 = make_env(name);
        auto env2 = make_env(name);
        const auto o1 = env1->reset(12345);
        const auto o2 = env2->reset(12345);
        REQUIRE(o1.size() == o2.size());
        for (std::size_t i = 0; i < o1.size(); ++i) CHECK(o1[i] == o2[i]);

        Rng rng(7);
        for (int step = 0; step < 50; ++step) {
            std::vector<double> a(env1->spec().action_dim);
            for (double& v : a) v = rng.uniform(-1.0, 1.0);
            StepResult r1 = env1->step(a);
            StepResult r2 = env2->step(a);
            CHECK(r1.reward == r2.reward);
            for (std::size_t i = 0; i < r1.obs.size(); ++i) CHECK(r1.obs[i] == r2.obs[i]);
            if (r1.done || r1.truncated) break;
        }
    }
}

TEST_CASE("observation dims match the spec on every reset and step") {
    Rng rng(3);
    for (const char* name : {"pendulum", "cartpole-swingup", "pointmass-goal"}) {
        auto env = make_env(name);
        const EnvSpec& spec = env->spec();
        auto obs = env->reset(5);
        CHECK(static_cast<int>(obs.size()) == spec.obs_dim);
        for (int step = 0; step < 30; ++step) {
            std::vector<double> a(spec.action_dim);
            for (double& v : a) v = rng.uniform(spec.action_low[0], spec.action_high[0]);
            StepResult r = env->step(a);
            CHECK(static_cast<int>(r.obs.size()) == spec.obs_dim);
            if (r.done || r.truncated) {
                obs = env->reset(step);
                CHECK(static_cast<int>(obs.size()) == spec.obs_dim);
            }
        }
    }
}

TEST_CASE("pendulum: initial distribution ranges over 10k resets") {
    PendulumEnv env;
    double min_th = 1e9, max_th = -1e9, min_td = 1e9, max_td = -1e9;
    for (int i = 0; i < 10000; ++i) {
        env.reset(static_cast<std::uint64_t>(i) * 2654435761ULL + 17);
        min_th = std::min(min_th, env.theta());
        max_th = std::max(max_th, env.theta());
        min_td = std::min(min_td, env.theta_dot());
        max_td = std::max(max_td, env.theta_dot());
    }
    CHECK(min_th >= -kPi);
    CHECK(max_th <= kPi);
    CHECK(min_td >= -1.0);
    CHECK(max_td <= 1.0);
    // uniform draws should come close to the edges
    CHECK(min_th < -3.0);
    CHECK(max_th > 3.0);
    CHECK(min_td < -0.95);
    CHECK(max_td > 0.95);
}

TEST_CASE("pendulum: upright equilibrium is a fixed point with zero reward") {
    PendulumEnv env;
    env.set_state(0.0, 0.0);
    StepResult r = env.step({0.0});
    CHECK(r.reward == 0.0);
    CHECK(r.obs[0] == 1.0); // cos(0)
    CHECK(r.obs[1] == 0.0);
    CHECK(r.obs[2] == 0.0);
}

TEST_CASE("pendulum: reward bounds over random steps") {
    PendulumEnv env;
    env.reset(11);
    Rng rng(13);
    const double lower = -(kPi * kPi + 0.1 * 64.0 + 0.001 * 4.0);
    for (int i = 0; i < 100000; ++i) {
        StepResult r = env.step({rng.uniform(-2.0, 2.0)});
        CHECK(r.reward <= 0.0);
        CHECK(r.reward >= lower);
        if (r.truncated) env.reset(i);
    }
}

TEST_CASE("pendulum: horizon 200, never terminal") {
    PendulumEnv env;
    env.reset(1);
    for (int i = 0; i < 199; ++i) {
        StepResult r = env.step({1.0});
        CHECK(!r.done);
        CHECK(!r.truncated);
    }
    StepResult last = env.step({1.0});
    CHECK(!last.done);
    CHECK(last.truncated);
}

TEST_CASE("pendulum: passive energy drift under fine semi-implicit Euler < 1%") {
    PendulumEnv env(0.001); // fine-step variant, test only
    env.set_state(2.0, 0.0);
    const double e0 = env.energy();
    REQUIRE(std::fabs(e0) > 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        env.step({0.0});
        worst = std::max(worst, std::fabs(env.energy() - e0));
    }
    CHECK(worst / std::fabs(e0) < 0.01);
}

TEST_CASE("pendulum: non-finite action rejected, action clamped to bounds") {
    PendulumEnv env;
    env.reset(2);
    CHECK_THROWS_AS(env.step({std::numeric_limits<double>::quiet_NaN()}), NumericError);
    CHECK_THROWS_AS(env.step({1.0, 2.0}), DimensionError);
    // out-of-bounds torque behaves like the clamped torque
    PendulumEnv a, b;
    a.set_state(1.0, 0.5);
    b.set_state(1.0, 0.5);
    StepResult ra = a.step({100.0});
    StepResult rb = b.step({2.0});
    CHECK(ra.obs[2] == rb.obs[2]);
    CHECK(ra.reward == rb.reward);
}

TEST_CASE("cartpole: starts hanging down, reward in [-1.0576, 1]") {
    CartpoleSwingupEnv env;
    auto obs = env.reset(21);
    CHECK(obs[2] < -0.99); // cos(theta) near -1: hanging
    Rng rng(5);
    for (int i = 0; i < 100000; ++i) {
        StepResult r = env.step({rng.uniform(-10.0, 10.0)});
        CHECK(r.reward <= 1.0);
        CHECK(r.reward >= -1.0 - 0.01 * 2.4 * 2.4);
        CHECK(std::fabs(r.obs[0]) <= 2.4);
        if (r.truncated) env.reset(i);
    }
}

TEST_CASE("cartpole: upright balance is sustained near theta = 0") {
    CartpoleSwingupEnv env;
    env.set_state(0.0, 0.0, 0.0, 0.0);
    StepResult r = env.step({0.0});
    CHECK(r.reward == doctest::Approx(1.0).epsilon(1e-9));
    // unstable equilibrium: for small perturbation gravity tips it over
    env.set_state(0.0, 0.0, 0.1, 0.0);
    double th_prev = 0.1;
    for (int i = 0; i < 20; ++i) {
        StepResult s = env.step({0.0});
        const double th = std::atan2(s.obs[3], s.obs[2]);
        CHECK(th >= th_prev - 1e-12);
        th_prev = th;
    }
}

TEST_CASE("pointmass: success definition and separation invariant") {
    PointmassGoalEnv env;
    for (int i = 0; i < 5000; ++i) {
        auto obs = env.reset(i);
        const double dx = obs[0] - obs[4], dy = obs[1] - obs[5];
        CHECK(std::hypot(dx, dy) >= 2.0 * PointmassGoalEnv::kSuccessRadius);
    }

    // pos == goal: success, reward 0, done
    env.set_state(0.3, 0.3, 0.0, 0.0, 0.3, 0.3);
    StepResult r = env.step({0.0, 0.0});
    CHECK(r.reward == 0.0);
    CHECK(r.done);

    // sparse reward boundary: inclusive at exactly the radius
    CHECK(env.goal_reward({0.05, 0.0}, {0.0, 0.0}) == 0.0);
    CHECK(env.goal_reward({0.0501, 0.0}, {0.0, 0.0}) == -1.0);
    CHECK(env.goal_reward({0.0, 0.0}, {0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(env.goal_reward({0.0}, {0.0, 0.0}), DimensionError);
}

TEST_CASE("pointmass: rewards are sparse {-1, 0} and truncation at horizon 100") {
    PointmassGoalEnv env;
    env.reset(77);
    Rng rng(9);
    int steps = 0;
    for (int i = 0; i < 100000; ++i) {
        StepResult r = env.step({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        CHECK((r.reward == 0.0 || r.reward == -1.0));
        steps += 1;
        if (r.done) {
            CHECK(r.reward == 0.0);
            env.reset(i);
            steps = 0;
        } else if (r.truncated) {
            CHECK(steps == 100);
            env.reset(i);
            steps = 0;
        }
    }
}

TEST_CASE("goal_reward on non-goal environments is an error") {
    PendulumEnv env;
    CHECK_THROWS_AS(env.goal_reward({0.0}, {0.0}), DimensionError);
    CHECK_THROWS_AS(env.desired_goal(), DimensionError);
}
