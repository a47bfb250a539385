#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "rollroller/types.hpp"

namespace rollroller {

// Adaptive embedded Runge-Kutta settings. The integrator advances in
// error-controlled sub-steps but always lands exactly on multiples of
// sample_dt, where samples are recorded and the per-sample hook runs.
struct IntegratorSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double sample_dt = 0.01;
    double max_step = 0.01;
    double min_step = 1e-12;
    double initial_step = 1e-4;
    double safety = 0.9;
    double min_shrink = 0.2;
    double max_grow = 5.0;

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0))
            throw invalid_parameter_error("integrator tolerances must be positive");
        if (!(sample_dt > 0) || !(max_step > 0) || !(min_step > 0))
            throw invalid_parameter_error("integrator step sizes must be positive");
        if (!(min_step < max_step))
            throw invalid_parameter_error("integrator requires min_step < max_step");
    }
};

// Right-hand side of the first-order system x' = f(t, x).
using Deriv = std::function<std::array<double, 4>(double, const std::array<double, 4>&)>;

// Called once per recorded sample; may mutate the state (mode switches,
// resets). Return value of false stops the integration early.
using SampleHook = std::function<bool(double, std::array<double, 4>&)>;

struct IntegrationStats {
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    std::size_t rhs_evaluations = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0,       1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0,
                                   8.0 / 9.0, 1.0,       1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0}};
inline constexpr double dp_b5[7] = {35.0 / 384.0,     0.0,  500.0 / 1113.0, 125.0 / 192.0,
                                    -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600.0,   0.0,           7571.0 / 16695.0,
                                    393.0 / 640.0,      -92097.0 / 339200.0,
                                    187.0 / 2100.0,     1.0 / 40.0};

inline std::array<double, 4> axpy(const std::array<double, 4>& x, double h,
                                  const std::array<double, 4>& d) {
    return {x[0] + h * d[0], x[1] + h * d[1], x[2] + h * d[2], x[3] + h * d[3]};
}

}  // namespace detail

// One error-controlled Dormand-Prince step attempt from (t, x) with step h.
// On return y5 holds the 5th-order solution and err the scaled error norm.
inline void dp45_step(const Deriv& f, double t, const std::array<double, 4>& x, double h,
                      const IntegratorSettings& st, std::array<double, 4>& y5, double& err,
                      IntegrationStats& stats) {
    std::array<std::array<double, 4>, 7> k;
    k[0] = f(t, x);
    for (int i = 1; i < 7; ++i) {
        std::array<double, 4> xi = x;
        for (int j = 0; j < i; ++j)
            for (int d = 0; d < 4; ++d) xi[d] += h * detail::dp_a[i][j] * k[j][d];
        k[i] = f(t + detail::dp_c[i] * h, xi);
    }
    stats.rhs_evaluations += 7;

    std::array<double, 4> y4 = x;
    y5 = x;
    for (int i = 0; i < 7; ++i)
        for (int d = 0; d < 4; ++d) {
            y5[d] += h * detail::dp_b5[i] * k[i][d];
            y4[d] += h * detail::dp_b4[i] * k[i][d];
        }

    err = 0.0;
    for (int d = 0; d < 4; ++d) {
        const double sc =
            st.abs_tol + st.rel_tol * std::max(std::abs(x[d]), std::abs(y5[d]));
        const double e = (y5[d] - y4[d]) / sc;
        err += e * e;
    }
    err = std::sqrt(err / 4.0);
}

// Advance from t0 to t1 (one sample interval) with adaptive stepping.
inline std::array<double, 4> integrate_interval(const Deriv& f, double t0, double t1,
                                                std::array<double, 4> x,
                                                const IntegratorSettings& st, double& h,
                                                IntegrationStats& stats) {
    double t = t0;
    while (t < t1 - 1e-15 * std::max(1.0, std::abs(t1))) {
        double htry = std::min({h, st.max_step, t1 - t});
        std::array<double, 4> y5;
        double err;
        dp45_step(f, t, x, htry, st, y5, err, stats);

        for (int d = 0; d < 4; ++d)
            if (!std::isfinite(y5[d])) throw numeric_error("non-finite state in integration");

        if (err <= 1.0) {
            t += htry;
            x = y5;
            ++stats.steps_accepted;
            const double grow =
                err == 0.0 ? st.max_grow
                           : std::min(st.max_grow, st.safety * std::pow(err, -0.2));
            h = std::min(st.max_step, htry * std::max(1.0, grow));
        } else {
            ++stats.steps_rejected;
            const double shrink = std::max(st.min_shrink, st.safety * std::pow(err, -0.2));
            h = htry * shrink;
            if (h < st.min_step)
                throw stiffness_error(t, State::from_array(x));
        }
    }
    return x;
}

struct Sample {
    double t;
    std::array<double, 4> x;
};

// Integrate over [t0, t_end], recording samples every sample_dt and firing
// the hook at each recorded boundary (including t0 before the first step).
inline std::vector<Sample> integrate(const Deriv& f, double t0, double t_end,
                                     std::array<double, 4> x, const IntegratorSettings& st,
                                     const SampleHook& hook = nullptr,
                                     IntegrationStats* stats_out = nullptr) {
    st.validate();
    IntegrationStats stats;
    std::vector<Sample> out;
    const long n = std::lround((t_end - t0) / st.sample_dt);
    out.reserve(static_cast<std::size_t>(std::max(0L, n)) + 1);

    double h = st.initial_step;
    if (hook && !hook(t0, x)) {
        out.push_back({t0, x});
        if (stats_out) *stats_out = stats;
        return out;
    }
    out.push_back({t0, x});

    for (long i = 0; i < n; ++i) {
        const double ta = t0 + static_cast<double>(i) * st.sample_dt;
        const double tb = t0 + static_cast<double>(i + 1) * st.sample_dt;
        x = integrate_interval(f, ta, tb, x, st, h, stats);
        const bool keep_going = !hook || hook(tb, x);
        out.push_back({tb, x});
        if (!keep_going) break;
    }
    if (stats_out) *stats_out = stats;
    return out;
}

// Fixed-step classical RK4, used for convergence cross-checks.
inline std::array<double, 4> rk4_fixed(const Deriv& f, double t0, double t1,
                                       std::array<double, 4> x, std::size_t n_steps) {
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    double t = t0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const auto k1 = f(t, x);
        const auto k2 = f(t + 0.5 * h, detail::axpy(x, 0.5 * h, k1));
        const auto k3 = f(t + 0.5 * h, detail::axpy(x, 0.5 * h, k2));
        const auto k4 = f(t + h, detail::axpy(x, h, k3));
        for (int d = 0; d < 4; ++d)
            x[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        t += h;
    }
    return x;
}

}  // namespace rollroller
