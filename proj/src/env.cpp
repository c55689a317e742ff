#include "rlcore/env.hpp"

#include <algorithm>
#include <cmath>

namespace rlcore {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_action(const std::vector<double>& action, const EnvSpec& spec) {
    if (static_cast<int>(action.size()) != spec.action_dim)
        throw DimensionError("step: action dim mismatch");
    double s = 0.0;
    for (double a : action) s += std::fabs(a);
    if (!std::isfinite(s)) throw NumericError("step: non-finite action");
}

double clampd(double v, double lo, double hi) { return std::clamp(v, lo, hi); }
} // namespace

double wrap_angle(double theta) {
    theta = std::fmod(theta + kPi, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    theta -= kPi; // now in [-pi, pi)
    // move the -pi endpoint to +pi so the range is (-pi, pi]
    if (theta == -kPi) theta = kPi;
    return theta;
}

double Env::goal_reward(const std::vector<double>&, const std::vector<double>&) const {
    throw DimensionError("goal_reward: not a goal-conditioned environment");
}

// ---------------------------------------------------------------- pendulum

PendulumEnv::PendulumEnv(double dt) : dt_(dt) {
    spec_.obs_dim = 3;
    spec_.action_dim = 1;
    spec_.action_low = {-2.0};
    spec_.action_high = {2.0};
    spec_.max_episode_steps = 200;
}

std::vector<double> PendulumEnv::reset(std::uint64_t seed) {
    Rng rng(seed);
    theta_ = rng.uniform(-kPi, kPi);
    theta_dot_ = rng.uniform(-1.0, 1.0);
    steps_ = 0;
    return observe();
}

void PendulumEnv::set_state(double theta, double theta_dot) {
    theta_ = theta;
    theta_dot_ = theta_dot;
    steps_ = 0;
}

double PendulumEnv::energy() const {
    // rod pivoting at one end: I = m l^2 / 3, center of mass at l/2
    const double m = 1.0, l = 1.0, g = 10.0;
    const double inertia = m * l * l / 3.0;
    return 0.5 * inertia * theta_dot_ * theta_dot_ + 0.5 * m * g * l * std::cos(theta_);
}

std::vector<double> PendulumEnv::observe() const {
    return {std::cos(theta_), std::sin(theta_), theta_dot_};
}

StepResult PendulumEnv::step(const std::vector<double>& action) {
    check_action(action, spec_);
    const double g = 10.0, m = 1.0, l = 1.0;
    const double u = clampd(action[0], -2.0, 2.0);

    const double th = wrap_angle(theta_);
    const double cost = th * th + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;

    const double acc = 3.0 * g / (2.0 * l) * std::sin(theta_) + 3.0 / (m * l * l) * u;
    theta_dot_ = clampd(theta_dot_ + dt_ * acc, -8.0, 8.0);
    theta_ += dt_ * theta_dot_;
    steps_ += 1;

    StepResult r;
    r.obs = observe();
    r.reward = -cost;
    r.done = false;
    r.truncated = steps_ >= spec_.max_episode_steps;
    return r;
}

std::unique_ptr<Env> PendulumEnv::clone() const {
    return std::make_unique<PendulumEnv>(dt_);
}

// -------------------------------------------------------- cartpole swing-up

CartpoleSwingupEnv::CartpoleSwingupEnv() {
    spec_.obs_dim = 5;
    spec_.action_dim = 1;
    spec_.action_low = {-10.0};
    spec_.action_high = {10.0};
    spec_.max_episode_steps = 500;
}

std::vector<double> CartpoleSwingupEnv::reset(std::uint64_t seed) {
    Rng rng(seed);
    x_ = rng.uniform(-0.05, 0.05);
    x_dot_ = rng.uniform(-0.05, 0.05);
    theta_ = wrap_angle(kPi + rng.uniform(-0.05, 0.05)); // hanging down
    theta_dot_ = rng.uniform(-0.05, 0.05);
    steps_ = 0;
    return observe();
}

void CartpoleSwingupEnv::set_state(double x, double x_dot, double theta, double theta_dot) {
    x_ = x;
    x_dot_ = x_dot;
    theta_ = wrap_angle(theta);
    theta_dot_ = theta_dot;
    steps_ = 0;
}

std::vector<double> CartpoleSwingupEnv::observe() const {
    return {x_, x_dot_, std::cos(theta_), std::sin(theta_), theta_dot_};
}

StepResult CartpoleSwingupEnv::step(const std::vector<double>& action) {
    check_action(action, spec_);
    // classic cart-pole with theta measured from upright
    const double g = 9.8, m_cart = 1.0, m_pole = 0.1, half_len = 0.5, dt = 0.02;
    const double total_mass = m_cart + m_pole;
    const double f = clampd(action[0], -10.0, 10.0);

    const double sth = std::sin(theta_), cth = std::cos(theta_);
    const double temp = (f + m_pole * half_len * theta_dot_ * theta_dot_ * sth) / total_mass;
    const double theta_acc = (g * sth - cth * temp) /
                             (half_len * (4.0 / 3.0 - m_pole * cth * cth / total_mass));
    const double x_acc = temp - m_pole * half_len * theta_acc * cth / total_mass;

    theta_dot_ = clampd(theta_dot_ + dt * theta_acc, -15.0, 15.0);
    x_dot_ = clampd(x_dot_ + dt * x_acc, -10.0, 10.0);
    theta_ = wrap_angle(theta_ + dt * theta_dot_);
    x_ += dt * x_dot_;
    if (x_ < -2.4) { x_ = -2.4; x_dot_ = 0.0; }
    if (x_ > 2.4) { x_ = 2.4; x_dot_ = 0.0; }
    steps_ += 1;

    StepResult r;
    r.obs = observe();
    r.reward = std::cos(theta_) - 0.01 * x_ * x_;
    r.done = false;
    r.truncated = steps_ >= spec_.max_episode_steps;
    return r;
}

std::unique_ptr<Env> CartpoleSwingupEnv::clone() const {
    return std::make_unique<CartpoleSwingupEnv>();
}

// ---------------------------------------------------------- pointmass goal

PointmassGoalEnv::PointmassGoalEnv() {
    spec_.obs_dim = 6;
    spec_.action_dim = 2;
    spec_.action_low = {-1.0, -1.0};
    spec_.action_high = {1.0, 1.0};
    spec_.max_episode_steps = 100;
    spec_.goal_dim = 2;
}

std::vector<double> PointmassGoalEnv::reset(std::uint64_t seed) {
    Rng rng(seed);
    // rejection-sample until start and goal are at least two success radii apart
    do {
        pos_[0] = rng.uniform(-1.0, 1.0);
        pos_[1] = rng.uniform(-1.0, 1.0);
        goal_[0] = rng.uniform(-1.0, 1.0);
        goal_[1] = rng.uniform(-1.0, 1.0);
    } while (std::hypot(pos_[0] - goal_[0], pos_[1] - goal_[1]) < 2.0 * kSuccessRadius);
    vel_[0] = vel_[1] = 0.0;
    steps_ = 0;
    return observe();
}

void PointmassGoalEnv::set_state(double px, double py, double vx, double vy,
                                 double gx, double gy) {
    pos_[0] = px;
    pos_[1] = py;
    vel_[0] = vx;
    vel_[1] = vy;
    goal_ = {gx, gy};
    steps_ = 0;
}

std::vector<double> PointmassGoalEnv::observe() const {
    return {pos_[0], pos_[1], vel_[0], vel_[1], goal_[0], goal_[1]};
}

double PointmassGoalEnv::goal_reward(const std::vector<double>& achieved,
                                     const std::vector<double>& desired) const {
    if (achieved.size() != desired.size())
        throw DimensionError("goal_reward: goal dims disagree");
    double d2 = 0.0;
    for (std::size_t i = 0; i < achieved.size(); ++i) {
        const double d = achieved[i] - desired[i];
        d2 += d * d;
    }
    return std::sqrt(d2) <= kSuccessRadius ? 0.0 : -1.0;
}

StepResult PointmassGoalEnv::step(const std::vector<double>& action) {
    check_action(action, spec_);
    const double dt = 0.1;
    for (int i = 0; i < 2; ++i) {
        const double f = clampd(action[i], -1.0, 1.0);
        vel_[i] = clampd(vel_[i] + dt * f, -1.0, 1.0);
        pos_[i] = clampd(pos_[i] + dt * vel_[i], -2.0, 2.0);
    }
    steps_ += 1;

    StepResult r;
    r.achieved_goal = {pos_[0], pos_[1]};
    r.reward = goal_reward(r.achieved_goal, goal_);
    r.done = r.reward == 0.0;
    r.truncated = !r.done && steps_ >= spec_.max_episode_steps;
    r.obs = observe();
    return r;
}

std::unique_ptr<Env> PointmassGoalEnv::clone() const {
    return std::make_unique<PointmassGoalEnv>();
}

// ------------------------------------------------------------------ registry

std::unique_ptr<Env> make_env(const std::string& name) {
    if (name == "pendulum") return std::make_unique<PendulumEnv>();
    if (name == "cartpole-swingup") return std::make_unique<CartpoleSwingupEnv>();
    if (name == "pointmass-goal") return std::make_unique<PointmassGoalEnv>();
    throw ConfigError("unknown environment: " + name);
}

} // namespace rlcore
