#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rollroller {

// State vector: [theta, theta_dot, gamma, gamma_dot]
// theta: sphere roll angle (rad), unwrapped/cumulative
// gamma: core angle along the pipe (rad), unwrapped/cumulative
struct State {
    double theta = 0.0;
    double theta_dot = 0.0;
    double gamma = 0.0;
    double gamma_dot = 0.0;

    std::array<double, 4> to_array() const { return {theta, theta_dot, gamma, gamma_dot}; }
    static State from_array(const std::array<double, 4>& a) {
        return State{a[0], a[1], a[2], a[3]};
    }

    bool finite() const {
        return std::isfinite(theta) && std::isfinite(theta_dot) &&
               std::isfinite(gamma) && std::isfinite(gamma_dot);
    }
};

// Which pipe the core occupies. MM is the circular outer path of radius b,
// GB the inner half-elliptic path with semi-axes (a, b).
enum class PathMode { MM, GB };

// Half-tube region the forward-locomotion cycle alternates between.
enum class Region { alpha, beta };

inline const char* to_string(PathMode m) { return m == PathMode::MM ? "MM" : "GB"; }
inline const char* to_string(Region r) { return r == Region::alpha ? "alpha" : "beta"; }

struct invalid_parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct invalid_geometry_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct actuation_infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct singular_dynamics_error : std::runtime_error {
    singular_dynamics_error(double det, const State& s)
        : std::runtime_error("singular mass matrix, det=" + std::to_string(det) +
                             " at theta=" + std::to_string(s.theta) +
                             " gamma=" + std::to_string(s.gamma)),
          determinant(det), state(s) {}
    double determinant;
    State state;
};

struct stiffness_error : std::runtime_error {
    stiffness_error(double t, const State& s)
        : std::runtime_error("step size underflow at t=" + std::to_string(t)),
          time(t), last_state(s) {}
    double time;
    State last_state;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rollroller
