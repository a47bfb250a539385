#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rollroller/hydraulics.hpp"
#include "rollroller/model.hpp"

using namespace rollroller;

namespace {
HydraulicParams sample(double m_lc = 0.3, double m_b = 0.05, double dP = 0.0,
                       double r_c = 0.02, double F_LA = 10.0) {
    HydraulicParams h;
    h.m_lc = m_lc;
    h.m_b = m_b;
    h.delta_P = dP;
    h.A_c = std::numbers::pi * r_c * r_c;
    h.F_LA = F_LA;
    h.D1 = 0.02;
    h.D2 = 0.01;
    h.s = 1;
    return h;
}
}  // namespace

TEST_CASE("maximum force demand") {
    CHECK(max_required_force(sample(0.3, 0.05, 0.0), 9.8) == doctest::Approx(2.45));
    // Pure weight term: apparent mass 0.25 kg.
    CHECK(max_required_force(sample(0.25, 0.0, 0.0), 9.8) == doctest::Approx(2.45));
    // Pressure term adds dP * pi r_c^2.
    const double expected = 2.45 + 1000.0 * std::numbers::pi * 4e-4;
    CHECK(max_required_force(sample(0.25, 0.0, 1000.0, 0.02), 9.8) ==
          doctest::Approx(expected).epsilon(1e-12));
    // Independent of the cylinder and actuator parameters.
    HydraulicParams h = sample();
    const double base = max_required_force(h, 9.8);
    h.F_LA = 99.0;
    h.D1 = 0.05;
    h.D2 = 0.04;
    CHECK(max_required_force(h, 9.8) == base);
}

TEST_CASE("transmitted force worked example") {
    // r_c=0.01, F_LA=10, D1=0.02, D2=0.01 -> 8e-4*10*(7e-4/1.2e-7) = 46.666... N
    const HydraulicParams h = sample();
    const double f = transmitted_force(h, 0.01);
    CHECK(std::abs(f - 140.0 / 3.0) / (140.0 / 3.0) < 1e-10);
    // Linear in F_LA.
    HydraulicParams h2 = h;
    h2.F_LA = 0.0;
    CHECK(transmitted_force(h2, 0.01) == 0.0);
    h2.F_LA = 20.0;
    CHECK(transmitted_force(h2, 0.01) == doctest::Approx(2.0 * f).epsilon(1e-14));
    // Monotone in r_c^2.
    CHECK(transmitted_force(h, 0.02) == doctest::Approx(4.0 * f).epsilon(1e-14));
}

TEST_CASE("transmitted force rod-less limit") {
    HydraulicParams h = sample();
    h.D2 = 0.0;
    // D2 -> 0 reduces to 16 r_c^2 F_LA / D1^2.
    const double lim = 16.0 * 0.01 * 0.01 * h.F_LA / (h.D1 * h.D1);
    CHECK(transmitted_force(h, 0.01) == doctest::Approx(lim).epsilon(1e-14));
}

TEST_CASE("degenerate annulus rejected") {
    HydraulicParams h = sample();
    h.D2 = h.D1;
    CHECK_THROWS_AS(transmitted_force(h, 0.01), invalid_geometry_error);
    h.D2 = 2.0 * h.D1;
    CHECK_THROWS_AS(transmitted_force(h, 0.01), invalid_geometry_error);
}

TEST_CASE("feasibility gate is strict") {
    HydraulicParams h = sample();
    CHECK(actuation_feasible(h, 0.01, 9.8));  // 46.67 N > 2.45 N
    h.F_LA = 0.0;
    CHECK_FALSE(actuation_feasible(h, 0.01, 9.8));
    // Exact equality fails the strict inequality.
    HydraulicParams he = sample();
    he.F_LA = max_required_force(he, 9.8) / he.transmission_factor(0.01);
    CHECK(transmitted_force(he, 0.01) == doctest::Approx(max_required_force(he, 9.8)));
    CHECK_FALSE(actuation_feasible(he, 0.01, 9.8));
}

TEST_CASE("core torque") {
    HydraulicParams h = sample();
    CHECK(core_torque(h, 0.01, 0.131, 9.8, 0) == 0.0);
    const double expect = 0.131 * h.s * transmitted_force(h, 0.01);
    CHECK(core_torque(h, 0.01, 0.131, 9.8, 1) == doctest::Approx(expect));
    CHECK(core_torque(h, 0.01, 0.131, 9.8, -1) == doctest::Approx(-expect));
    CHECK_THROWS_AS(core_torque(h, 0.01, 0.131, 9.8, 2), invalid_parameter_error);
    h.F_LA = 0.0;
    CHECK_THROWS_AS(core_torque(h, 0.01, 0.131, 9.8, 1), actuation_infeasible_error);
    CHECK(core_torque(h, 0.01, 0.131, 9.8, 0) == 0.0);  // zero request always fine
}

TEST_CASE("default cylinder reproduces the nominal drive torque") {
    const RobotParams p = table3_params();
    const double tau =
        p.geometry.b * p.hydraulics.s * transmitted_force(p.hydraulics, p.geometry.r_c);
    CHECK(tau == doctest::Approx(0.075).epsilon(1e-12));
    // F_c_T back-solved from tau/(b*s): 0.075/0.131 = 0.5725...
    CHECK(transmitted_force(p.hydraulics, p.geometry.r_c) ==
          doctest::Approx(0.075 / 0.131).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
    HydraulicParams h = sample();
    CHECK_NOTHROW(h.validate());
    h.m_b = h.m_lc;
    CHECK_THROWS_AS(h.validate(), invalid_parameter_error);
    h = sample();
    h.s = 5;
    CHECK_THROWS_AS(h.validate(), invalid_parameter_error);
    h = sample();
    h.D2 = h.D1;
    CHECK_THROWS_AS(h.validate(), invalid_geometry_error);
}
