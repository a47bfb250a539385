#pragma once

#include <cmath>

#include "rollroller/hydraulics.hpp"
#include "rollroller/types.hpp"

namespace rollroller {

// Sphere and pipe geometry. b doubles as the MM circular radius.
struct Geometry {
    double R;    // sphere radius (m)
    double a;    // GB semi-minor axis (m)
    double b;    // GB semi-major axis / MM radius (m)
    double r_c;  // core radius (m)

    void validate() const {
        if (!(0 < a && a < b && b < R))
            throw invalid_parameter_error("geometry requires 0 < a < b < R");
        if (!(0 < r_c && r_c < a))
            throw invalid_parameter_error("geometry requires 0 < r_c < a");
    }
};

struct Masses {
    double M_s;     // sphere mass excluding cores (kg)
    double m_c;     // apparent core mass (kg)
    double m_star;  // m_c / M_s
    double delta;   // TT mass increment (kg)
    double m_c_TT;  // turner-tube core mass (kg)

    static Masses make(double M_s, double m_c, double delta = 0.01, double m_c_TT = 0.26) {
        if (M_s <= 0 || m_c <= 0)
            throw invalid_parameter_error("masses must be positive");
        return Masses{M_s, m_c, m_c / M_s, delta, m_c_TT};
    }
};

// Scalar moments of inertia about the rolling axis.
struct Inertias {
    double I_s;     // sphere (kg m^2)
    double I_c_MM;  // core on the circular MM path
    double I_c_GB;  // core on the elliptic GB path
};

struct Friction {
    double zeta_theta;     // sphere viscous coefficient (N m s)
    double zeta_gamma_MM;  // core viscous coefficient, MM path
    double zeta_gamma_GB;  // core viscous coefficient, GB path

    void validate() const {
        if (zeta_theta < 0 || zeta_gamma_MM < 0 || zeta_gamma_GB < 0)
            throw invalid_parameter_error("friction coefficients must be >= 0");
    }
};

// Thin-shell sphere, solid-ball core; the GB core inertia uses the mean of
// the two semi-axes as its effective radius.
inline Inertias derive_inertias(const Geometry& g, const Masses& m) {
    g.validate();
    Inertias I;
    I.I_s = (2.0 / 3.0) * m.M_s * g.R * g.R;
    I.I_c_MM = (2.0 / 5.0) * m.m_c * g.b * g.b;
    const double r_mid = 0.5 * (g.a + g.b);
    I.I_c_GB = (2.0 / 5.0) * m.m_c * r_mid * r_mid;
    return I;
}

// Core-to-shell mass ratio gate: 1/10 <= m_c/M_s < 1/3
// (lower bound inclusive, upper bound exclusive).
inline bool validate_mass_ratio(double m_c, double M_s) {
    if (m_c <= 0 || M_s <= 0)
        throw invalid_parameter_error("validate_mass_ratio: masses must be positive");
    const double m_star = m_c / M_s;
    return m_star >= 1.0 / 10.0 && m_star < 1.0 / 3.0;
}

// Half-open admissible interval [lo, hi) for the turner-tube core mass.
struct MassInterval {
    double lo;
    double hi;
    bool contains(double m) const { return m >= lo && m < hi; }
};

inline MassInterval tt_core_mass_bounds(double M_s, double delta) {
    if (M_s <= 0)
        throw invalid_parameter_error("tt_core_mass_bounds: M_s must be positive");
    if (delta < 0)
        throw invalid_parameter_error("tt_core_mass_bounds: delta must be >= 0");
    return MassInterval{M_s / 10.0 + delta, M_s / 3.0 + delta};
}

struct RobotParams {
    Geometry geometry;
    Masses masses;
    Inertias inertias;
    Friction friction;
    HydraulicParams hydraulics;
    double g = 9.8;  // m/s^2

    // Relative divergence between stored and geometry-derived inertias.
    double inertia_divergence() const {
        const Inertias d = derive_inertias(geometry, masses);
        auto rel = [](double x, double ref) { return std::abs(x - ref) / std::abs(ref); };
        double worst = rel(inertias.I_s, d.I_s);
        worst = std::max(worst, rel(inertias.I_c_MM, d.I_c_MM));
        worst = std::max(worst, rel(inertias.I_c_GB, d.I_c_GB));
        return worst;
    }
};

// Published nominal parameter set. Inertias are always derived from
// geometry; the published I_c_MM entry (0.0402) disagrees with the
// inertia formula and is not used.
inline RobotParams table3_params() {
    RobotParams p;
    p.g = 9.8;
    p.geometry = Geometry{0.145, 0.0450, 0.131, 0.02};
    p.masses = Masses::make(1.0, 0.25);
    p.inertias = derive_inertias(p.geometry, p.masses);
    p.friction = Friction{0.2, 0.01, 0.01};
    p.hydraulics = HydraulicParams::defaults(p.geometry.r_c, p.masses.m_c,
                                             p.geometry.b, /*torque=*/0.075);
    return p;
}

}  // namespace rollroller
