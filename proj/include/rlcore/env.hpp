#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rlcore/errors.hpp"
#include "rlcore/rng.hpp"

namespace rlcore {

struct EnvSpec {
    int obs_dim = 0;
    int action_dim = 0;
    std::vector<double> action_low;
    std::vector<double> action_high;
    int max_episode_steps = 0;
    int goal_dim = 0; // 0 unless goal-conditioned
};

struct StepResult {
    std::vector<double> obs;
    double reward = 0.0;
    bool done = false;      // genuine terminal only
    bool truncated = false; // horizon reached, not a terminal for bootstrapping
    std::vector<double> achieved_goal; // goal-conditioned envs only
};

/// Single-owner deterministic environment: reset(seed) fully determines the
/// trajectory under a fixed action sequence.
class Env {
public:
    virtual ~Env() = default;
    virtual const EnvSpec& spec() const = 0;
    virtual std::vector<double> reset(std::uint64_t seed) = 0;
    virtual StepResult step(const std::vector<double>& action) = 0;
    /// Fresh instance with the same parameters (for evaluation episodes).
    virtual std::unique_ptr<Env> clone() const = 0;
    virtual const std::vector<double>& desired_goal() const {
        throw DimensionError("desired_goal: not a goal-conditioned environment");
    }
    /// Sparse goal reward; only goal-conditioned envs implement it.
    virtual double goal_reward(const std::vector<double>& achieved,
                               const std::vector<double>& desired) const;
};

/// Pendulum swing-up. theta measured from upright, wrapped to (-pi, pi].
///   theta_dd = 3g/(2l) sin(theta) + 3/(m l^2) u,  g=10, m=1, l=1
/// Semi-implicit Euler at dt (default 0.05), theta_dot clamped to [-8, 8].
/// obs = (cos theta, sin theta, theta_dot); u in [-2, 2]; horizon 200;
/// reward = -(wrap(theta)^2 + 0.1 theta_dot^2 + 0.001 u^2); never terminal.
class PendulumEnv : public Env {
public:
    explicit PendulumEnv(double dt = 0.05);
    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<double>& action) override;
    std::unique_ptr<Env> clone() const override;

    void set_state(double theta, double theta_dot);
    double theta() const { return theta_; }
    double theta_dot() const { return theta_dot_; }
    /// Total mechanical energy of the unforced rod (for integrator checks).
    double energy() const;

private:
    std::vector<double> observe() const;
    EnvSpec spec_;
    double dt_;
    double theta_ = 0.0, theta_dot_ = 0.0;
    int steps_ = 0;
};

/// Cart-pole swing-up: pole starts hanging down, force f in [-10, 10],
/// reward = cos(theta) - 0.01 x^2, cart clamped to the track [-2.4, 2.4],
/// horizon 500, never terminal. obs = (x, x_dot, cos theta, sin theta, theta_dot).
class CartpoleSwingupEnv : public Env {
public:
    CartpoleSwingupEnv();
    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<double>& action) override;
    std::unique_ptr<Env> clone() const override;

    void set_state(double x, double x_dot, double theta, double theta_dot);

private:
    std::vector<double> observe() const;
    EnvSpec spec_;
    double x_ = 0.0, x_dot_ = 0.0, theta_ = 0.0, theta_dot_ = 0.0;
    int steps_ = 0;
};

/// Goal-conditioned 2-D double integrator with a sparse reward:
/// 0 if ||pos - goal|| <= 0.05 (boundary inclusive) else -1; done on success.
/// force in [-1,1]^2, dt = 0.1, velocity clamped to [-1,1], horizon 100.
/// obs = (pos, vel, desired_goal); achieved_goal = pos after the step.
class PointmassGoalEnv : public Env {
public:
    PointmassGoalEnv();
    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<double>& action) override;
    std::unique_ptr<Env> clone() const override;
    const std::vector<double>& desired_goal() const override { return goal_; }
    double goal_reward(const std::vector<double>& achieved,
                       const std::vector<double>& desired) const override;

    static constexpr double kSuccessRadius = 0.05;
    void set_state(double px, double py, double vx, double vy, double gx, double gy);

private:
    std::vector<double> observe() const;
    EnvSpec spec_;
    double pos_[2] = {0, 0}, vel_[2] = {0, 0};
    std::vector<double> goal_{0, 0};
    int steps_ = 0;
};

/// Registry: "pendulum", "cartpole-swingup", "pointmass-goal".
std::unique_ptr<Env> make_env(const std::string& name);

/// Angle wrapped into (-pi, pi].
double wrap_angle(double theta);

} // namespace rlcore
