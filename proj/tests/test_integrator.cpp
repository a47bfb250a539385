#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rollroller/integrator.hpp"

using namespace rollroller;

namespace {

// Harmonic oscillator in the first two slots; the last two ride along as a
// second independent oscillator with different frequency.
const Deriv harmonic = [](double, const std::array<double, 4>& x) {
    return std::array<double, 4>{x[1], -x[0], x[3], -4.0 * x[2]};
};

}  // namespace

TEST_CASE("adaptive pair meets the requested tolerance") {
    IntegratorSettings st;
    st.rel_tol = 1e-9;
    st.abs_tol = 1e-12;
    st.max_step = 0.05;
    st.sample_dt = 0.05;
    const std::array<double, 4> x0{1.0, 0.0, 0.0, 2.0};
    const auto traj = integrate(harmonic, 0.0, 10.0, x0, st);
    const auto& last = traj.back();
    CHECK(last.t == doctest::Approx(10.0));
    // Exact solution: cos(t), -sin(t), sin(2t), 2cos(2t).
    CHECK(std::abs(last.x[0] - std::cos(10.0)) < 1e-7);
    CHECK(std::abs(last.x[1] + std::sin(10.0)) < 1e-7);
    CHECK(std::abs(last.x[2] - std::sin(20.0)) < 1e-7);
    CHECK(std::abs(last.x[3] - 2.0 * std::cos(20.0)) < 1e-7);
}

TEST_CASE("samples land exactly on the grid") {
    IntegratorSettings st;
    st.sample_dt = 0.01;
    const auto traj = integrate(harmonic, 0.0, 1.0, {1, 0, 0, 0}, st);
    REQUIRE(traj.size() == 101);
    for (std::size_t i = 0; i < traj.size(); ++i)
        CHECK(traj[i].t == doctest::Approx(0.01 * static_cast<double>(i)).epsilon(1e-14));
}

TEST_CASE("hook fires every sample and may stop the run") {
    IntegratorSettings st;
    st.sample_dt = 0.1;
    int calls = 0;
    SampleHook hook = [&](double t, std::array<double, 4>&) {
        ++calls;
        return t < 0.45;
    };
    const auto traj = integrate(harmonic, 0.0, 1.0, {1, 0, 0, 0}, st, hook);
    CHECK(calls == 6);                     // t = 0.0 .. 0.5
    CHECK(traj.back().t == doctest::Approx(0.5));
}

TEST_CASE("hook mutations propagate into the integration") {
    IntegratorSettings st;
    st.sample_dt = 0.5;
    SampleHook hook = [&](double t, std::array<double, 4>& x) {
        if (t == 0.5) x = {1.0, 0.0, 0.0, 0.0};  // reset mid-run
        return true;
    };
    const auto traj = integrate(harmonic, 0.0, 1.0, {2, 0, 0, 0}, st, hook);
    // Second half restarts from amplitude 1.
    CHECK(traj.back().x[0] == doctest::Approx(std::cos(0.5)).epsilon(1e-6));
}

TEST_CASE("non-finite derivatives raise a numeric error") {
    const Deriv bad = [](double t, const std::array<double, 4>& x) {
        return std::array<double, 4>{x[1], t > 0.1 ? std::nan("") : -x[0], 0.0, 0.0};
    };
    IntegratorSettings st;
    CHECK_THROWS_AS(integrate(bad, 0.0, 1.0, {1, 0, 0, 0}, st), numeric_error);
}

TEST_CASE("unresolvable stiffness raises a stiffness error") {
    // Finite-time blow-up: x' = x^2 from x=1 diverges at t=1.
    const Deriv blowup = [](double, const std::array<double, 4>& x) {
        return std::array<double, 4>{x[0] * x[0], 0.0, 0.0, 0.0};
    };
    IntegratorSettings st;
    st.rel_tol = 1e-10;
    st.abs_tol = 1e-12;
    CHECK_THROWS(integrate(blowup, 0.0, 2.0, {1, 0, 0, 0}, st));
}

TEST_CASE("settings validation") {
    IntegratorSettings st;
    st.rel_tol = 0.0;
    CHECK_THROWS_AS(st.validate(), invalid_parameter_error);
    st = IntegratorSettings{};
    st.min_step = st.max_step;
    CHECK_THROWS_AS(st.validate(), invalid_parameter_error);
    CHECK_NOTHROW(IntegratorSettings{}.validate());
}

TEST_CASE("fixed-step fallback shows fourth-order convergence") {
    // Error(h) ~ C h^4: halving h across several rungs gives slope ~4 in
    // log2(error) differences.
    const std::array<double, 4> x0{1.0, 0.0, 0.0, 2.0};
    const double T = 2.0;
    std::vector<double> errs;
    for (std::size_t n : {40, 80, 160, 320}) {
        const auto xf = rk4_fixed(harmonic, 0.0, T, x0, n);
        const double ref[4] = {std::cos(T), -std::sin(T), std::sin(2 * T),
                               2 * std::cos(2 * T)};
        double e = 0.0;
        for (int d = 0; d < 4; ++d) e = std::max(e, std::abs(xf[d] - ref[d]));
        errs.push_back(e);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double slope = std::log2(errs[i - 1] / errs[i]);
        CHECK(slope == doctest::Approx(4.0).epsilon(0.05));
    }
}
