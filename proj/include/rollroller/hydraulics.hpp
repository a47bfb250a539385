#pragma once

#include <cmath>
#include <numbers>

#include "rollroller/types.hpp"

namespace rollroller {

// Lumped hydraulic actuation parameters. The apparent core mass that enters
// the dynamics is m_lc - m_b.
struct HydraulicParams {
    double m_lc;     // actual core mass (kg)
    double m_b;      // displaced-fluid mass (kg)
    double delta_P;  // core top-bottom pressure difference (Pa)
    double A_c;      // core projected area (m^2), pi * r_c^2
    double F_LA;     // linear-actuator input force (N)
    double D1;       // full-bore piston diameter (m)
    double D2;       // piston-rod diameter (m)
    int s;           // number of involved hydraulic circuits

    void validate() const {
        if (!(D1 > D2 && D2 > 0))
            throw invalid_geometry_error("hydraulics requires D1 > D2 > 0");
        if (!(m_lc > m_b && m_b >= 0))
            throw invalid_parameter_error("hydraulics requires m_lc > m_b >= 0");
        if (s < 1 || s > 4)
            throw invalid_parameter_error("hydraulics requires s in {1,2,3,4}");
    }

    double apparent_core_mass() const { return m_lc - m_b; }

    // Dimensionless transmission factor of the two-chamber cylinder:
    // F_c_T = 8 r_c^2 F_LA * (2 D1^2 - D2^2) / (D1^2 (D1^2 - D2^2)).
    double transmission_factor(double r_c) const {
        if (!(D1 > D2 && D2 >= 0))
            throw invalid_geometry_error("transmission requires D1 > D2 >= 0");
        const double d1s = D1 * D1, d2s = D2 * D2;
        return 8.0 * r_c * r_c * (2.0 * d1s - d2s) / (d1s * (d1s - d2s));
    }

    // Default cylinder sized so that b * s * F_c_T equals the requested
    // core torque magnitude. Hardware values are not published; only the
    // resulting torque is.
    static HydraulicParams defaults(double r_c, double m_c, double b, double torque) {
        HydraulicParams h;
        h.m_lc = m_c;  // m_b = 0: apparent mass equals configured core mass
        h.m_b = 0.0;
        h.delta_P = 0.0;
        h.A_c = std::numbers::pi * r_c * r_c;
        h.D1 = 0.02;
        h.D2 = 0.01;
        h.s = 1;
        h.F_LA = torque / (b * h.s * h.transmission_factor(r_c));
        return h;
    }
};

// Worst-case force demand on the core, Fw + F_dP - F_B with friction
// dropped: m_c g + dP A_c.
inline double max_required_force(const HydraulicParams& h, double g) {
    return h.apparent_core_mass() * g + h.delta_P * h.A_c;
}

// Force transmitted from the linear actuator through both cylinder
// chambers to the core.
inline double transmitted_force(const HydraulicParams& h, double r_c) {
    return h.transmission_factor(r_c) * h.F_LA;
}

// Strict feasibility gate: transmitted force must exceed the demand.
inline bool actuation_feasible(const HydraulicParams& h, double r_c, double g) {
    return transmitted_force(h, r_c) > max_required_force(h, g);
}

// Torque applied to the core, tau_gamma = direction * b * s * F_c_T.
// The sphere itself receives no direct torque.
inline double core_torque(const HydraulicParams& h, double r_c, double b, double g,
                          int direction) {
    if (direction == 0) return 0.0;
    if (direction != 1 && direction != -1)
        throw invalid_parameter_error("core_torque: direction must be -1, 0 or +1");
    if (!actuation_feasible(h, r_c, g))
        throw actuation_infeasible_error("requested torque but F_c_T <= F_c_Max");
    return direction * b * h.s * transmitted_force(h, r_c);
}

}  // namespace rollroller
