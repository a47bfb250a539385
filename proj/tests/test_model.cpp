#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rollroller/model.hpp"

using namespace rollroller;

TEST_CASE("derived inertias match the nominal geometry") {
    const RobotParams p = table3_params();
    // Thin shell: (2/3) M_s R^2 = 0.01401...
    CHECK(p.inertias.I_s == doctest::Approx(0.0140167).epsilon(1e-4));
    // Solid core on the circular path: (2/5) m_c b^2.
    CHECK(p.inertias.I_c_MM == doctest::Approx(1.7161e-3).epsilon(1e-4));
    // Elliptic path: effective radius (a+b)/2.
    CHECK(p.inertias.I_c_GB == doctest::Approx(7.7440e-4).epsilon(1e-4));
    CHECK(p.inertia_divergence() < 1e-12);
}

TEST_CASE("geometry validation") {
    Geometry g{0.145, 0.045, 0.131, 0.02};
    CHECK_NOTHROW(g.validate());
    CHECK_THROWS_AS((Geometry{0.145, 0.131, 0.045, 0.02}.validate()),
                    invalid_parameter_error);  // a > b
    CHECK_THROWS_AS((Geometry{0.1, 0.045, 0.131, 0.02}.validate()),
                    invalid_parameter_error);  // b > R
    CHECK_THROWS_AS((Geometry{0.145, 0.045, 0.131, 0.05}.validate()),
                    invalid_parameter_error);  // r_c > a
}

TEST_CASE("mass ratio gate is half-open [1/10, 1/3)") {
    CHECK(validate_mass_ratio(0.1, 1.0));
    CHECK(validate_mass_ratio(0.25, 1.0));
    CHECK_FALSE(validate_mass_ratio(1.0 / 3.0, 1.0));  // upper bound exclusive
    CHECK(validate_mass_ratio(0.1 - 1e-15, 1.0) == false);
    CHECK_FALSE(validate_mass_ratio(0.05, 1.0));
    CHECK_FALSE(validate_mass_ratio(0.5, 1.0));
    CHECK_THROWS_AS(validate_mass_ratio(-0.1, 1.0), invalid_parameter_error);
}

TEST_CASE("turner-tube core mass interval") {
    const MassInterval iv = tt_core_mass_bounds(1.0, 0.01);
    CHECK(iv.lo == doctest::Approx(0.11));
    CHECK(iv.hi == doctest::Approx(1.0 / 3.0 + 0.01));
    // The nominal TT core mass sits inside the admissible interval.
    CHECK(iv.contains(0.26));
    CHECK_FALSE(iv.contains(iv.hi));  // half-open
    CHECK(iv.contains(iv.lo));
    CHECK_THROWS_AS(tt_core_mass_bounds(-1.0, 0.01), invalid_parameter_error);
    CHECK_THROWS_AS(tt_core_mass_bounds(1.0, -0.01), invalid_parameter_error);
}

TEST_CASE("nominal parameter set") {
    const RobotParams p = table3_params();
    CHECK(p.g == 9.8);
    CHECK(p.masses.M_s == 1.0);
    CHECK(p.masses.m_c == 0.25);
    CHECK(p.masses.m_star == doctest::Approx(0.25));
    CHECK(p.geometry.R == 0.145);
    CHECK(p.geometry.a == 0.045);
    CHECK(p.geometry.b == 0.131);
    CHECK(p.friction.zeta_theta == 0.2);
    CHECK(validate_mass_ratio(p.masses.m_c, p.masses.M_s));
    // Default cylinder is sized for the nominal drive torque.
    CHECK(p.geometry.b * p.hydraulics.s *
              transmitted_force(p.hydraulics, p.geometry.r_c) ==
          doctest::Approx(0.075).epsilon(1e-12));
}

TEST_CASE("masses factory rejects non-positive inputs") {
    CHECK_THROWS_AS(Masses::make(0.0, 0.25), invalid_parameter_error);
    CHECK_THROWS_AS(Masses::make(1.0, -0.25), invalid_parameter_error);
}
