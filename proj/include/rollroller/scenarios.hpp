#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rollroller/controller.hpp"
#include "rollroller/dynamics.hpp"
#include "rollroller/integrator.hpp"
#include "rollroller/model.hpp"
#include "rollroller/types.hpp"

namespace rollroller {

enum class EventType { gb_entry, gb_exit, region_switch };

inline const char* to_string(EventType e) {
    switch (e) {
        case EventType::gb_entry: return "gb_entry";
        case EventType::gb_exit: return "gb_exit";
        default: return "region_switch";
    }
}

struct Event {
    double t;
    EventType type;
    State state;
    Region region;
};

struct TrajectoryPoint {
    double t;
    State x;
    PathMode mode;
    Region region;
    double energy;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    std::vector<Event> events;
    IntegrationStats stats;

    const TrajectoryPoint& back() const { return points.back(); }

    // Sample at time t (must lie on the sample grid within rounding).
    const TrajectoryPoint& at_time(double t) const {
        if (points.empty()) throw std::out_of_range("empty trajectory");
        const double dt = points.size() > 1 ? points[1].t - points[0].t : 1.0;
        const long i = std::lround((t - points.front().t) / dt);
        if (i < 0 || static_cast<std::size_t>(i) >= points.size() ||
            std::abs(points[static_cast<std::size_t>(i)].t - t) > 0.5 * dt)
            throw std::out_of_range("time outside trajectory range");
        return points[static_cast<std::size_t>(i)];
    }
};

// Declarative description of one simulation experiment.
struct ScenarioSpec {
    std::string name;
    State x0;
    RobotParams params = table3_params();
    ControllerConfig controller;
    double torque = 0.0;           // constant core torque tau_gamma (N m)
    PathMode mode0 = PathMode::MM;
    Region region0 = Region::alpha;
    double t_end = 15.0;
    DynamicsBackend backend = DynamicsBackend::paper;
    IntegratorSettings integrator;

    void validate() const {
        if (!(t_end > 0)) throw invalid_parameter_error("scenario requires t_end > 0");
        params.geometry.validate();
        params.friction.validate();
        controller.validate();
        integrator.validate();
    }
};

// Threshold below which the gravity torque counts as "near equilibrium"
// for cycle-label bookkeeping.
inline bool near_equilibrium(const State& s, const RobotParams& p, PathMode mode) {
    const EffectiveGeometry eg = effective_geometry(p, mode);
    return std::abs(gravity_term(s.gamma + s.theta, p, eg)) <
           0.05 * p.masses.m_c * p.g * p.geometry.b;
}

// Run one scenario: sample-quantized hybrid integration. The controller
// (when enabled) is evaluated once per sample boundary; mode and region are
// frozen inside each sample interval.
inline Trajectory simulate(const ScenarioSpec& spec) {
    spec.validate();
    Trajectory traj;
    const long n = std::lround(spec.t_end / spec.integrator.sample_dt);
    traj.points.reserve(static_cast<std::size_t>(n) + 1);

    ControllerState cs;
    cs.mode = spec.mode0;
    cs.region = spec.region0;

    State x = spec.x0;
    double t = 0.0;
    double h = spec.integrator.initial_step;

    auto record = [&](double tt, const State& s) {
        traj.points.push_back(
            {tt, s, cs.mode, cs.region, total_energy(s, spec.params, cs.mode)});
    };

    auto step_controller = [&](double tt, const State& s) {
        if (!spec.controller.enabled) return;
        const SwitchDecision d =
            controller_step(cs, s, spec.controller, near_equilibrium(s, spec.params, cs.mode));
        if (d.switched)
            traj.events.push_back({tt,
                                   d.mode == PathMode::GB ? EventType::gb_entry
                                                          : EventType::gb_exit,
                                   s, d.region});
        if (d.region_toggled)
            traj.events.push_back({tt, EventType::region_switch, s, d.region});
    };

    step_controller(0.0, x);
    record(0.0, x);

    for (long i = 0; i < n; ++i) {
        const PathMode mode = cs.mode;
        Deriv f = [&spec, mode](double, const std::array<double, 4>& xa) {
            const State s = State::from_array(xa);
            const Accelerations acc =
                forward_dynamics(s, spec.params, mode, spec.torque, spec.backend);
            return std::array<double, 4>{s.theta_dot, acc.theta_ddot, s.gamma_dot,
                                         acc.gamma_ddot};
        };
        const double ta = static_cast<double>(i) * spec.integrator.sample_dt;
        const double tb = static_cast<double>(i + 1) * spec.integrator.sample_dt;
        const auto xa =
            integrate_interval(f, ta, tb, x.to_array(), spec.integrator, h, traj.stats);
        x = State::from_array(xa);
        t = tb;
        step_controller(t, x);
        record(t, x);
    }
    return traj;
}

struct JumpEvent {
    double t;
    double gamma;
    double gamma_dot;
    double theta;
};

// Derived quantities the experiments report on.
struct Metrics {
    double final_theta = 0.0;
    std::optional<double> offset_vs_baseline;
    double overshoot = 0.0;
    double settling_time = 0.0;
    bool settled = false;
    double min_theta_dot = 0.0;
    std::optional<double> reversal_threshold;
    std::vector<JumpEvent> jump_events;
};

// Settled-state detector: |theta_dot| < 0.01 rad/s sustained for 1 s.
// Returns the start of the first such window, or nullopt.
inline std::optional<double> settled_time(const Trajectory& traj,
                                          double rate_tol = 0.01, double hold = 1.0) {
    const auto& pts = traj.points;
    if (pts.size() < 2) return std::nullopt;
    const double dt = pts[1].t - pts[0].t;
    const std::size_t win = static_cast<std::size_t>(std::lround(hold / dt));
    std::size_t run = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::abs(pts[i].x.theta_dot) < rate_tol) {
            if (++run >= win + 1) return pts[i + 1 - run].t;
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

struct StepResponse {
    double overshoot = 0.0;      // fraction of the step magnitude
    double settling_time = 0.0;  // last exit from the band, s
    bool settles = true;
};

// Standard step-response figures on theta(t) about its final value with a
// relative band (default 5%). A constant trajectory reports (0, 0).
inline StepResponse settling_metrics(const Trajectory& traj, double band = 0.05) {
    const auto& pts = traj.points;
    if (pts.empty()) return {};
    const double y0 = pts.front().x.theta;
    const double yf = pts.back().x.theta;
    const double step = yf - y0;
    StepResponse r;
    if (std::abs(step) < 1e-12) {
        double dev = 0.0;
        for (const auto& p : pts) dev = std::max(dev, std::abs(p.x.theta - yf));
        r.overshoot = 0.0;
        r.settling_time = 0.0;
        r.settles = dev < 1e-9;
        return r;
    }
    double peak = 0.0;
    double last_exit = 0.0;
    for (const auto& p : pts) {
        const double rel = (p.x.theta - yf) / step;  // >0 means beyond final value
        peak = std::max(peak, rel);
        if (std::abs(p.x.theta - yf) > band * std::abs(step)) last_exit = p.t;
    }
    r.overshoot = peak;
    r.settling_time = last_exit;
    r.settles = last_exit < pts.back().t;
    return r;
}

// |theta_A(t)| - |theta_B(t)| at a shared sample time.
inline double offset_metric(const Trajectory& a, const Trajectory& b, double t_eval) {
    return std::abs(a.at_time(t_eval).x.theta) - std::abs(b.at_time(t_eval).x.theta);
}

inline double min_theta_dot(const Trajectory& traj) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : traj.points) m = std::min(m, p.x.theta_dot);
    return m;
}

// ---------------------------------------------------------------------------
// Named experiments
// ---------------------------------------------------------------------------

inline ScenarioSpec free_response_spec(const State& x0, double t_end = 15.0,
                                       DynamicsBackend backend = DynamicsBackend::paper) {
    ScenarioSpec s;
    s.name = "free-response";
    s.x0 = x0;
    s.torque = 0.0;
    s.mode0 = PathMode::MM;
    s.t_end = t_end;
    s.backend = backend;
    s.controller.enabled = false;
    s.params.friction.zeta_gamma_MM = 0.01;
    s.params.friction.zeta_gamma_GB = 0.01;
    return s;
}

// Case 1: release the core at rest at gamma0 in the unstable half and watch
// which way the sphere rolls.
inline ScenarioSpec case1_spec(double gamma0 = -std::numbers::pi / 2.0,
                               DynamicsBackend backend = DynamicsBackend::paper) {
    ScenarioSpec s = free_response_spec(State{0.0, 0.0, gamma0, 0.0}, 15.0, backend);
    s.name = "case1";
    return s;
}

// Case 2: same release point with an initial sphere velocity.
inline ScenarioSpec case2_spec(double theta_dot0 = 1.0,
                               DynamicsBackend backend = DynamicsBackend::paper) {
    ScenarioSpec s = free_response_spec(
        State{0.0, theta_dot0, -3.0 * std::numbers::pi / 4.0, 0.0}, 15.0, backend);
    s.name = "case2";
    return s;
}

// Case 3: same release point with an initial core velocity.
inline ScenarioSpec case3_spec(double gamma_dot0 = 0.0,
                               DynamicsBackend backend = DynamicsBackend::paper) {
    ScenarioSpec s = free_response_spec(
        State{0.0, 0.0, -3.0 * std::numbers::pi / 4.0, gamma_dot0}, 15.0, backend);
    s.name = "case3";
    return s;
}

// Case 4: identical release, once on the circular path and once on the
// elliptic path, with the heavier core damping.
inline ScenarioSpec case4_spec(PathMode mode,
                               DynamicsBackend backend = DynamicsBackend::paper) {
    ScenarioSpec s;
    s.name = mode == PathMode::MM ? "case4-mm" : "case4-gb";
    s.x0 = State{-std::numbers::pi - std::numbers::pi / 6.0, 0.1, 0.0,
                 -std::numbers::pi / 8.0};
    s.torque = 0.0;
    s.mode0 = mode;
    s.t_end = 10.0;
    s.backend = backend;
    s.controller.enabled = false;
    s.params.friction.zeta_gamma_MM = 0.075;
    s.params.friction.zeta_gamma_GB = 0.075;
    return s;
}

// Hybrid forward-locomotion run: constant negative core torque with the
// switching controller active.
inline ScenarioSpec forward_spec(DynamicsBackend backend = DynamicsBackend::paper,
                                 bool strict_constraints = false) {
    ScenarioSpec s;
    s.name = "forward";
    s.x0 = State{0.0, 0.0, -std::numbers::pi / 2.0, 0.0};
    s.torque = -0.075;
    s.mode0 = PathMode::MM;
    s.t_end = 10.0;
    s.backend = backend;
    s.controller.enabled = true;
    s.controller.strict_constraints = strict_constraints;
    s.params.friction.zeta_gamma_MM = 0.01;
    s.params.friction.zeta_gamma_GB = 0.01;
    return s;
}

// Same run with the controller disabled and the core pinned to the circular
// path: the conventional pendulum-driven robot.
inline ScenarioSpec baseline_spec(DynamicsBackend backend = DynamicsBackend::paper) {
    ScenarioSpec s = forward_spec(backend);
    s.name = "baseline";
    s.controller.enabled = false;
    return s;
}

struct Case1Result {
    double gamma0;
    Metrics metrics;
};

inline Metrics basic_metrics(const Trajectory& traj) {
    Metrics m;
    m.final_theta = traj.back().x.theta;
    m.min_theta_dot = min_theta_dot(traj);
    const StepResponse sr = settling_metrics(traj);
    m.overshoot = sr.overshoot;
    m.settling_time = sr.settling_time;
    m.settled = settled_time(traj).has_value();
    for (const auto& e : traj.events)
        if (e.type == EventType::gb_exit)
            m.jump_events.push_back(
                {e.t, e.state.gamma, e.state.gamma_dot, e.state.theta});
    return m;
}

template <typename Fn>
inline auto run_grid(const std::vector<double>& grid, Fn&& fn) {
    using R = decltype(fn(grid.front()));
    std::vector<std::future<R>> futs;
    futs.reserve(grid.size());
    for (double v : grid)
        futs.push_back(std::async(std::launch::async, fn, v));
    std::vector<R> out;
    out.reserve(grid.size());
    for (auto& f : futs) out.push_back(f.get());
    return out;
}

inline std::vector<Case1Result> run_case1(const std::vector<double>& gamma0_grid,
                                          DynamicsBackend backend = DynamicsBackend::paper) {
    return run_grid(gamma0_grid, [backend](double g0) {
        return Case1Result{g0, basic_metrics(simulate(case1_spec(g0, backend)))};
    });
}

struct Case2Result {
    double theta_dot0;
    double peak_gamma;
    Metrics metrics;
};

struct Case2Report {
    std::vector<Case2Result> points;
    double slope = 0.0;  // through-origin regression of theta_dot0 on peak gamma / g
};

inline Case2Report run_case2(const std::vector<double>& theta_dot0_grid, double g = 9.8,
                             DynamicsBackend backend = DynamicsBackend::paper) {
    Case2Report rep;
    rep.points = run_grid(theta_dot0_grid, [backend](double v) {
        const Trajectory traj = simulate(case2_spec(v, backend));
        double peak = 0.0;
        for (const auto& p : traj.points)
            if (std::abs(p.x.gamma) > std::abs(peak)) peak = p.x.gamma;
        return Case2Result{v, peak, basic_metrics(traj)};
    });
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : rep.points) {
        const double x = p.peak_gamma / g;
        sxy += x * p.theta_dot0;
        sxx += x * x;
    }
    rep.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    return rep;
}

struct Case3Report {
    std::vector<double> gamma_dot0;
    std::vector<double> final_theta;
    std::optional<double> reversal_threshold_neg;  // |gamma_dot0| flipping the sign, gd0 < 0
    std::optional<double> reversal_threshold_pos;  // same on the positive side
    bool monotone_sign = true;  // final-theta sign monotone on each branch
};

namespace detail {

inline double case3_final_theta(double gd0, DynamicsBackend backend) {
    return simulate(case3_spec(gd0, backend)).back().x.theta;
}

// Bisect for the final-theta sign flip between lo and hi (signs differ).
inline double bisect_sign_flip(double lo, double hi, DynamicsBackend backend,
                               int iters = 24) {
    double flo = case3_final_theta(lo, backend);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = case3_final_theta(mid, backend);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

inline Case3Report run_case3(const std::vector<double>& grid,
                             DynamicsBackend backend = DynamicsBackend::paper) {
    Case3Report rep;
    rep.gamma_dot0 = grid;
    rep.final_theta = run_grid(
        grid, [backend](double v) { return detail::case3_final_theta(v, backend); });

    auto sign_of = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    const auto ref = std::find(grid.begin(), grid.end(), 0.0);
    const int base_sign =
        sign_of(ref != grid.end()
                    ? rep.final_theta[static_cast<std::size_t>(ref - grid.begin())]
                    : detail::case3_final_theta(0.0, backend));

    // Scan outward on each branch for the first grid point whose final
    // theta flips sign relative to the zero-velocity reference, then refine.
    auto locate = [&](bool negative) -> std::optional<double> {
        double prev = 0.0;
        std::vector<std::pair<double, double>> branch;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (negative ? grid[i] < 0 : grid[i] > 0)
                branch.emplace_back(std::abs(grid[i]), rep.final_theta[i]);
        std::sort(branch.begin(), branch.end());
        bool flipped = false;
        for (const auto& [mag, th] : branch) {
            const int sg = sign_of(th);
            if (!flipped && sg != 0 && sg != base_sign) {
                const double sgn = negative ? -1.0 : 1.0;
                return std::abs(
                    detail::bisect_sign_flip(sgn * prev, sgn * mag, backend));
            }
            if (flipped && sg == base_sign) rep.monotone_sign = false;
            if (sg != 0 && sg != base_sign) flipped = true;
            prev = mag;
        }
        return std::nullopt;
    };
    rep.reversal_threshold_neg = locate(true);
    rep.reversal_threshold_pos = locate(false);
    return rep;
}

struct Case4Report {
    Trajectory traj_mm;
    Trajectory traj_gb;
    double offset = 0.0;  // |theta_MM| - |theta_GB| at the horizon
    bool mm_settled = false;
    bool gb_settled = false;
    double gb_min_theta_dot = 0.0;
};

inline Case4Report run_case4(DynamicsBackend backend = DynamicsBackend::paper) {
    Case4Report rep;
    rep.traj_mm = simulate(case4_spec(PathMode::MM, backend));
    rep.traj_gb = simulate(case4_spec(PathMode::GB, backend));
    const double t_eval = rep.traj_mm.back().t;
    rep.offset = offset_metric(rep.traj_mm, rep.traj_gb, t_eval);
    rep.mm_settled = settled_time(rep.traj_mm).has_value();
    rep.gb_settled = settled_time(rep.traj_gb).has_value();
    rep.gb_min_theta_dot = min_theta_dot(rep.traj_gb);
    return rep;
}

enum class SweepClass { settled_underdamped, abnormal };

inline const char* to_string(SweepClass c) {
    return c == SweepClass::settled_underdamped ? "settled-underdamped" : "abnormal";
}

struct SweepPoint {
    double m_star;
    SweepClass cls;
    double overshoot;
    double settling_time;
    bool settled;
    double ripple;  // max |theta - theta_final| over the last fifth of the run
};

// Free response from the half-turn release point across core-to-shell mass
// ratios. A point is "settled-underdamped" when the settled-state detector
// fires within the horizon and the tail ripple stays small.
inline std::vector<SweepPoint> mass_ratio_sweep(
    const std::vector<double>& m_star_grid,
    DynamicsBackend backend = DynamicsBackend::paper) {
    return run_grid(m_star_grid, [backend](double m_star) {
        ScenarioSpec s = free_response_spec(
            State{0.0, 0.0, -3.0 * std::numbers::pi / 2.0, 0.0}, 15.0, backend);
        s.name = "mass-sweep";
        s.params.masses = Masses::make(s.params.masses.M_s, m_star * s.params.masses.M_s);
        s.params.inertias = derive_inertias(s.params.geometry, s.params.masses);
        const Trajectory traj = simulate(s);

        SweepPoint pt;
        pt.m_star = m_star;
        const StepResponse sr = settling_metrics(traj);
        pt.overshoot = sr.overshoot;
        pt.settling_time = sr.settling_time;
        pt.settled = settled_time(traj).has_value();
        const double yf = traj.back().x.theta;
        double ripple = 0.0;
        const double t_tail = 0.8 * traj.back().t;
        for (const auto& p : traj.points)
            if (p.t >= t_tail) ripple = std::max(ripple, std::abs(p.x.theta - yf));
        pt.ripple = ripple;
        pt.cls = (pt.settled && ripple < 0.05) ? SweepClass::settled_underdamped
                                               : SweepClass::abnormal;
        return pt;
    });
}

struct ForwardReport {
    Trajectory traj;
    Trajectory baseline;
    Metrics metrics;  // includes jump_events and offset_vs_baseline
};

inline ForwardReport run_forward_locomotion(
    DynamicsBackend backend = DynamicsBackend::paper, bool strict_constraints = false) {
    ForwardReport rep;
    rep.traj = simulate(forward_spec(backend, strict_constraints));
    rep.baseline = simulate(baseline_spec(backend));
    rep.metrics = basic_metrics(rep.traj);
    rep.metrics.offset_vs_baseline =
        offset_metric(rep.traj, rep.baseline, rep.traj.back().t);
    return rep;
}

inline Trajectory pendulum_baseline(DynamicsBackend backend = DynamicsBackend::paper) {
    return simulate(baseline_spec(backend));
}

// Resolve one of the built-in scenario names.
inline ScenarioSpec scenario_by_name(const std::string& name,
                                     DynamicsBackend backend = DynamicsBackend::paper) {
    if (name == "case1") return case1_spec(-std::numbers::pi / 2.0, backend);
    if (name == "case2") return case2_spec(1.0, backend);
    if (name == "case3") return case3_spec(-2.5 * std::numbers::pi, backend);
    if (name == "case4") return case4_spec(PathMode::GB, backend);
    if (name == "forward") return forward_spec(backend);
    if (name == "baseline") return baseline_spec(backend);
    if (name == "mass-sweep") {
        ScenarioSpec s = free_response_spec(
            State{0.0, 0.0, -3.0 * std::numbers::pi / 2.0, 0.0}, 15.0, backend);
        s.name = "mass-sweep";
        return s;
    }
    throw config_error("unknown scenario: " + name);
}

}  // namespace rollroller
