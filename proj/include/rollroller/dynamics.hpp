#pragma once

#include <array>
#include <cmath>

#include "rollroller/model.hpp"
#include "rollroller/types.hpp"

namespace rollroller {

// Which equation-of-motion assembly to use.
//
//   derived: coefficients obtained analytically from the Lagrangian; the
//            system is variational (conserves energy for zeta = 0, tau = 0)
//            and is validated against a finite-difference oracle.
//   paper:   the published M and N matrices transcribed verbatim. Their
//            cross-coupling terms are not symmetric, so this system is not
//            variational; it is the assembly that reproduces the published
//            case studies.
enum class DynamicsBackend { paper, derived };

inline const char* to_string(DynamicsBackend b) {
    return b == DynamicsBackend::paper ? "paper" : "derived";
}

// Path-dependent geometry and core parameters. MM is the circular path of
// radius b (a_eff = b_eff = b); GB is the elliptic path (a, b).
struct EffectiveGeometry {
    double a_eff;
    double b_eff;
    double I_c_eff;
    double zeta_gamma_eff;
};

inline EffectiveGeometry effective_geometry(const RobotParams& p, PathMode mode) {
    if (mode == PathMode::MM)
        return {p.geometry.b, p.geometry.b, p.inertias.I_c_MM, p.friction.zeta_gamma_MM};
    return {p.geometry.a, p.geometry.b, p.inertias.I_c_GB, p.friction.zeta_gamma_GB};
}

// Core position relative to the sphere center:
// y = a sin(gamma+theta), z = -b cos(gamma+theta).
// gamma+theta = 0 therefore places the core at the lowest point of the path.
struct CorePosition {
    double y;
    double z;
};

inline CorePosition core_position(const State& s, const EffectiveGeometry& eg) {
    const double phi = s.gamma + s.theta;
    return {eg.a_eff * std::sin(phi), -eg.b_eff * std::cos(phi)};
}

// Instantaneous ellipse radius ab / sqrt((a cos phi)^2 + (b sin phi)^2).
inline double ellipse_radius(double phi, const EffectiveGeometry& eg) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double W = eg.a_eff * eg.a_eff * c * c + eg.b_eff * eg.b_eff * s * s;
    return eg.a_eff * eg.b_eff / std::sqrt(W);
}

inline double kinetic_energy(const State& s, const RobotParams& p, PathMode mode) {
    const EffectiveGeometry eg = effective_geometry(p, mode);
    const double phi = s.gamma + s.theta;
    const double w = s.theta_dot + s.gamma_dot;
    const double vy = p.geometry.R * s.theta_dot + eg.a_eff * w * std::cos(phi);
    const double vz = eg.b_eff * w * std::sin(phi);
    return 0.5 * p.masses.M_s * p.geometry.R * p.geometry.R * s.theta_dot * s.theta_dot +
           0.5 * p.inertias.I_s * s.theta_dot * s.theta_dot +
           0.5 * eg.I_c_eff * w * w +
           0.5 * p.masses.m_c * (vy * vy + vz * vz);
}

// Gravitational potential of the core, m_c g z with z the core height on the
// path: E_p = -m_c g r(phi) cos(phi). Minimum at gamma+theta = 0 (core at
// the bottom), maximum at +-pi (core at the top).
inline double potential_energy(const State& s, const RobotParams& p, PathMode mode) {
    const EffectiveGeometry eg = effective_geometry(p, mode);
    const double phi = s.gamma + s.theta;
    return -p.masses.m_c * p.g * ellipse_radius(phi, eg) * std::cos(phi);
}

inline double total_energy(const State& s, const RobotParams& p, PathMode mode) {
    return kinetic_energy(s, p, mode) + potential_energy(s, p, mode);
}

// d(E_p)/d(phi). Appears identically in both equations of motion since the
// potential depends on the angles only through gamma+theta.
inline double gravity_term(double phi, const RobotParams& p, const EffectiveGeometry& eg) {
    const double a = eg.a_eff, b = eg.b_eff;
    const double c = std::cos(phi), s = std::sin(phi);
    const double W = a * a * c * c + b * b * s * s;
    return p.masses.m_c * p.g * a * b * s *
           ((b * b - a * a) * c * c / (W * std::sqrt(W)) + 1.0 / std::sqrt(W));
}

// Equations of motion in matrix form:
//   M [theta_dd; gamma_dd] + N + G = [tau_gamma; 0]
// Row 1 is the gamma (core) equation, row 2 the theta (sphere) equation.
struct EomTerms {
    std::array<std::array<double, 2>, 2> M;
    std::array<double, 2> N;
    std::array<double, 2> G;

    double det() const { return M[0][0] * M[1][1] - M[0][1] * M[1][0]; }
};

inline EomTerms eom_terms(const State& s, const RobotParams& p, PathMode mode,
                          DynamicsBackend backend = DynamicsBackend::derived) {
    const EffectiveGeometry eg = effective_geometry(p, mode);
    const double a = eg.a_eff, b = eg.b_eff;
    const double m_c = p.masses.m_c, R = p.geometry.R;
    const double phi = s.gamma + s.theta;
    const double w = s.theta_dot + s.gamma_dot;
    const double sn = std::sin(phi), cs = std::cos(phi);

    // J: core inertia about the sphere center; C: core-sphere coupling;
    // S: sphere translational + rotational inertia.
    const double J = eg.I_c_eff + m_c * (a * a + (b * b - a * a) * sn * sn);
    const double C = m_c * R * a * cs;
    const double S = p.masses.M_s * R * R + p.inertias.I_s + m_c * R * R;

    EomTerms t;
    t.G[0] = t.G[1] = gravity_term(phi, p, eg);

    if (backend == DynamicsBackend::derived) {
        const double Jp = m_c * (b * b - a * a) * std::sin(2.0 * phi);
        const double Cp = -m_c * R * a * sn;
        t.M = {{{J + C, J}, {S + J + 2.0 * C, J + C}}};
        t.N[0] = 0.5 * Jp * w * w + eg.zeta_gamma_eff * s.gamma_dot;
        t.N[1] = 0.5 * Jp * w * w + Cp * w * w + p.friction.zeta_theta * s.theta_dot;
    } else {
        t.M = {{{J - C, J}, {S + J - 2.0 * C, J - C}}};
        const double vel = -s.theta_dot * s.theta_dot * m_c * R * a * sn -
                           w * w * m_c * sn * cs * (b * b - a * a) -
                           s.gamma_dot * s.theta_dot * m_c * R * a * sn;
        t.N[0] = vel + eg.zeta_gamma_eff * s.gamma_dot;
        t.N[1] = vel + p.friction.zeta_theta * s.theta_dot;
    }

    const double scale = std::abs(t.M[0][0]) + std::abs(t.M[0][1]) +
                         std::abs(t.M[1][0]) + std::abs(t.M[1][1]);
    if (std::abs(t.det()) < 1e-14 * scale * scale)
        throw singular_dynamics_error(t.det(), s);
    return t;
}

struct Accelerations {
    double theta_ddot;
    double gamma_ddot;
};

// Solve the 2x2 system for the accelerations given the core torque.
inline Accelerations forward_dynamics(const State& s, const RobotParams& p, PathMode mode,
                                      double tau_gamma,
                                      DynamicsBackend backend = DynamicsBackend::derived) {
    const EomTerms t = eom_terms(s, p, mode, backend);
    // Exact-rest roundoff guard: the path poles are equilibria, but the
    // nearest representable angle leaves an O(eps) trig residue in the
    // gravity term that would seed an escape from the unstable pole. From
    // exact rest with no drive, a residue this far below the gravity scale
    // is representation noise, not force.
    if (s.theta_dot == 0.0 && s.gamma_dot == 0.0 && tau_gamma == 0.0 &&
        std::abs(t.G[0]) < 1e-14 * p.masses.m_c * p.g * p.geometry.b)
        return {0.0, 0.0};
    const double r0 = tau_gamma - t.N[0] - t.G[0];
    const double r1 = -t.N[1] - t.G[1];
    const double det = t.det();
    return {(r0 * t.M[1][1] - r1 * t.M[0][1]) / det,
            (r1 * t.M[0][0] - r0 * t.M[1][0]) / det};
}

}  // namespace rollroller
