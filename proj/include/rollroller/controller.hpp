#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rollroller/types.hpp"

namespace rollroller {

// Gate module states and port states used by the routing table. Gate:
// I = closed, II = alpha open / beta closed, III = beta open / alpha
// closed. Port: O = open, IT = in-transit, ST = stand-by.
enum class Gate { I, II, III };
enum class Port { O, IT, ST };

inline const char* to_string(Gate g) {
    switch (g) {
        case Gate::I: return "I";
        case Gate::II: return "II";
        default: return "III";
    }
}
inline const char* to_string(Port p) {
    switch (p) {
        case Port::O: return "O";
        case Port::IT: return "IT";
        default: return "ST";
    }
}

struct GatePortRow {
    char label;  // 'a'..'h'
    std::array<Gate, 4> gates;
    std::array<Port, 4> ports;
};

// The eight gate/port configurations for forward movement. Rows b and d
// are identical, so the table is not one-to-one from label to
// configuration even though each cycle family uses distinct labels.
inline constexpr std::array<GatePortRow, 8> gate_port_table() {
    using G = Gate;
    using P = Port;
    return {{
        {'a', {G::II, G::II, G::I, G::II}, {P::O, P::IT, P::ST, P::O}},
        {'b', {G::II, G::I, G::I, G::II}, {P::IT, P::O, P::ST, P::O}},
        {'c', {G::I, G::II, G::II, G::I}, {P::O, P::ST, P::IT, P::O}},
        {'d', {G::II, G::I, G::I, G::II}, {P::IT, P::O, P::ST, P::O}},
        {'e', {G::II, G::I, G::II, G::II}, {P::IT, P::ST, P::ST, P::O}},
        {'f', {G::I, G::II, G::III, G::III}, {P::ST, P::O, P::O, P::IT}},
        {'g', {G::I, G::III, G::III, G::I}, {P::ST, P::O, P::IT, P::O}},
        {'h', {G::III, G::II, G::I, G::I}, {P::O, P::IT, P::O, P::ST}},
    }};
}

inline const GatePortRow& gate_port_config(char label) {
    static constexpr auto table = gate_port_table();
    for (const auto& row : table)
        if (row.label == label) return row;
    throw invalid_parameter_error(std::string("unknown gate/port label: ") + label);
}

// Configuration label for (mode, region, equilibrium proximity). Near the
// equal-pendulum equilibrium the EP rows apply regardless of mode.
inline char cycle_label(PathMode mode, Region region, bool near_equilibrium) {
    if (near_equilibrium) return region == Region::alpha ? 'a' : 'h';
    if (mode == PathMode::GB) return region == Region::alpha ? 'b' : 'g';
    return region == Region::alpha ? 'c' : 'd';
}

struct ControllerConfig {
    double eta_theta = 12.0;        // theta window divisor (window +-pi/eta)
    double eta_gamma = 12.0;        // gamma window divisor
    double cos_theta_thresh = 0.95;
    double sin_theta_thresh = 0.2;
    double cos_gamma_hi = 0.9;
    double sin_gamma_thresh = 0.2;
    double crossing_cos = 0.9;
    bool enabled = true;
    // Keep the second entry branch exactly as published. As published its
    // gamma constraints are mutually exclusive, so with this flag set GB
    // can only ever be entered through the first branch.
    bool strict_constraints = false;

    void validate() const {
        auto in01 = [](double v) { return v > 0.0 && v <= 1.0; };
        if (!in01(cos_theta_thresh) || !in01(sin_theta_thresh) ||
            !in01(cos_gamma_hi) || !in01(sin_gamma_thresh) || !in01(crossing_cos))
            throw invalid_parameter_error("controller thresholds must lie in (0,1]");
        if (!(eta_theta > 1.0) || !(eta_gamma > 1.0))
            throw invalid_parameter_error("controller eta parameters must exceed 1");
    }
};

// Angular windows around the k-th half turn in which the GB hand-off is
// considered; nonempty whenever eta > 1.
struct GbWindow {
    double gamma_lo, gamma_hi;  // ( -k pi - pi/eta_g, -k pi + pi/eta_g ]
    double theta_lo, theta_hi;  // [ k pi - pi/eta_t,  k pi + pi/eta_t ]
};

inline GbWindow gb_window(int k, const ControllerConfig& c) {
    const double pi = std::numbers::pi;
    return {-k * pi - pi / c.eta_gamma, -k * pi + pi / c.eta_gamma,
            k * pi - pi / c.eta_theta, k * pi + pi / c.eta_theta};
}

// GB entry condition: the sphere is near a half-turn boundary moving
// forward while the core swings back near the bottom of the tube. Two
// branches, one per approach side. The second branch mirrors the first;
// as published it is empty (see ControllerConfig::strict_constraints).
inline bool gb_entry(const State& s, const ControllerConfig& c) {
    const double ct = std::cos(s.theta), st = std::sin(s.theta);
    const double cg = std::cos(s.gamma), sg = std::sin(s.gamma);
    const bool branch1 = ct <= -c.cos_theta_thresh && st >= -c.sin_theta_thresh &&
                         s.theta_dot >= 0.0 && s.gamma_dot <= 0.0 &&
                         cg >= c.cos_gamma_hi && sg <= c.sin_gamma_thresh;
    bool branch2;
    if (c.strict_constraints) {
        branch2 = ct >= c.cos_theta_thresh && st <= c.sin_theta_thresh &&
                  s.theta_dot >= 0.0 && s.gamma_dot <= 0.0 &&
                  cg <= -c.cos_gamma_hi && cg >= c.cos_gamma_hi &&
                  std::abs(sg) <= c.sin_gamma_thresh;
    } else {
        branch2 = ct >= c.cos_theta_thresh && st <= c.sin_theta_thresh &&
                  s.theta_dot >= 0.0 && s.gamma_dot <= 0.0 &&
                  cg <= -c.cos_gamma_hi && std::abs(sg) <= c.sin_gamma_thresh;
    }
    return branch1 || branch2;
}

// Crossing condition while on the elliptic path: the core sits between
// the poles of the tube, i.e. inside the gate region joining the half
// tubes.
inline bool gb_crossing(const State& s, const ControllerConfig& c) {
    return std::abs(std::cos(std::abs(s.gamma))) <= c.crossing_cos;
}

// Hybrid switching bookkeeping. The crossing latch makes the region
// toggle fire once per traversal of the gate region rather than at every
// sample inside it.
struct ControllerState {
    PathMode mode = PathMode::MM;
    Region region = Region::alpha;
    bool crossing_latch = false;
    char label = 'c';
    std::array<Gate, 4> gates = gate_port_config('c').gates;
    std::array<Port, 4> ports = gate_port_config('c').ports;

    void refresh_table(bool near_equilibrium) {
        label = cycle_label(mode, region, near_equilibrium);
        const GatePortRow& row = gate_port_config(label);
        gates = row.gates;
        ports = row.ports;
    }
};

struct SwitchDecision {
    PathMode mode;
    Region region;
    bool switched;        // mode changed this step
    bool region_toggled;  // region changed this step
};

// One controller evaluation, run once per sample. Priority order:
//  1. while the core is not outrunning the sphere, ride / fall back to MM;
//  2. otherwise, if the GB entry window is open, take the elliptic path;
//  3. otherwise, if already traversing the gate region, stay on GB and
//     toggle the half-tube region once (rising edge of the crossing
//     predicate);
//  4. otherwise ride the circular path.
inline SwitchDecision controller_step(ControllerState& cs, const State& s,
                                      const ControllerConfig& c,
                                      bool near_equilibrium = false) {
    const PathMode mode_before = cs.mode;
    const Region region_before = cs.region;

    if (!c.enabled) {
        cs.mode = PathMode::MM;
        cs.crossing_latch = false;
    } else if (std::abs(s.gamma_dot) <= std::abs(s.theta_dot)) {
        cs.mode = PathMode::MM;
        cs.crossing_latch = false;
    } else if (gb_entry(s, c)) {
        cs.mode = PathMode::GB;
        cs.crossing_latch = false;
    } else if (gb_crossing(s, c)) {
        cs.mode = PathMode::GB;
        if (!cs.crossing_latch) {
            cs.region = cs.region == Region::alpha ? Region::beta : Region::alpha;
            cs.crossing_latch = true;
        }
    } else {
        cs.mode = PathMode::MM;
        cs.crossing_latch = false;
    }

    cs.refresh_table(near_equilibrium);
    return {cs.mode, cs.region, cs.mode != mode_before, cs.region != region_before};
}

}  // namespace rollroller
