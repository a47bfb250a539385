#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "rollroller/controller.hpp"
#include "rollroller/model.hpp"
#include "rollroller/scenarios.hpp"
#include "rollroller/types.hpp"

namespace rollroller {

// JSON configuration ingestion. Top-level keys mirror the parameter names
// (g, M_s, m_c, R, a, b, zeta_theta, zeta_gamma_MM, zeta_gamma_GB, delta,
// m_c_TT) plus nested "hydraulics", "controller", "scenario" and
// "integrator" blocks. Missing keys keep their defaults; unknown keys are
// rejected so typos surface immediately.

namespace detail {

inline void require_known_keys(const nlohmann::json& j,
                               std::initializer_list<const char*> known,
                               const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) { ok = true; break; }
        if (!ok) throw config_error("unknown config key: " + where + key);
    }
}

template <typename T>
inline void get_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw config_error(std::string("bad value for config key: ") + key);
        }
    }
}

}  // namespace detail

inline void apply_hydraulics_config(const nlohmann::json& j, HydraulicParams& h) {
    detail::require_known_keys(
        j, {"m_lc", "m_b", "delta_P", "A_c", "F_LA", "D1", "D2", "s"}, "hydraulics.");
    detail::get_if(j, "m_lc", h.m_lc);
    detail::get_if(j, "m_b", h.m_b);
    detail::get_if(j, "delta_P", h.delta_P);
    detail::get_if(j, "A_c", h.A_c);
    detail::get_if(j, "F_LA", h.F_LA);
    detail::get_if(j, "D1", h.D1);
    detail::get_if(j, "D2", h.D2);
    detail::get_if(j, "s", h.s);
    h.validate();
}

inline void apply_controller_config(const nlohmann::json& j, ControllerConfig& c) {
    detail::require_known_keys(j,
                               {"eta_theta", "eta_gamma", "cos_theta_thresh",
                                "sin_theta_thresh", "cos_gamma_hi", "sin_gamma_thresh",
                                "crossing_cos", "enabled", "strict_paper_constraints"},
                               "controller.");
    detail::get_if(j, "eta_theta", c.eta_theta);
    detail::get_if(j, "eta_gamma", c.eta_gamma);
    detail::get_if(j, "cos_theta_thresh", c.cos_theta_thresh);
    detail::get_if(j, "sin_theta_thresh", c.sin_theta_thresh);
    detail::get_if(j, "cos_gamma_hi", c.cos_gamma_hi);
    detail::get_if(j, "sin_gamma_thresh", c.sin_gamma_thresh);
    detail::get_if(j, "crossing_cos", c.crossing_cos);
    detail::get_if(j, "enabled", c.enabled);
    detail::get_if(j, "strict_paper_constraints", c.strict_constraints);
    c.validate();
}

inline void apply_integrator_config(const nlohmann::json& j, IntegratorSettings& s) {
    detail::require_known_keys(
        j, {"rel_tol", "abs_tol", "sample_dt", "max_step", "min_step", "initial_step"},
        "integrator.");
    detail::get_if(j, "rel_tol", s.rel_tol);
    detail::get_if(j, "abs_tol", s.abs_tol);
    detail::get_if(j, "sample_dt", s.sample_dt);
    detail::get_if(j, "max_step", s.max_step);
    detail::get_if(j, "min_step", s.min_step);
    detail::get_if(j, "initial_step", s.initial_step);
    s.validate();
}

inline void apply_scenario_block(const nlohmann::json& j, ScenarioSpec& s) {
    detail::require_known_keys(
        j, {"name", "x0", "torque", "mode0", "region0", "t_end", "backend"}, "scenario.");
    if (j.contains("name")) {
        // Naming a built-in adopts its run definition (initial state, torque,
        // starting mode/region, horizon, controller enablement); the other
        // keys in this block then act as overrides. Parameter blocks applied
        // earlier are preserved.
        const std::string name = j.at("name").get<std::string>();
        const ScenarioSpec built_in = scenario_by_name(name, s.backend);
        s.name = built_in.name;
        s.x0 = built_in.x0;
        s.torque = built_in.torque;
        s.mode0 = built_in.mode0;
        s.region0 = built_in.region0;
        s.t_end = built_in.t_end;
        s.controller.enabled = built_in.controller.enabled;
    }
    if (j.contains("x0")) {
        const auto arr = j.at("x0");
        if (!arr.is_array() || arr.size() != 4)
            throw config_error("bad value for config key: x0 (need 4 numbers)");
        s.x0 = State{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
                     arr[3].get<double>()};
    }
    detail::get_if(j, "torque", s.torque);
    if (j.contains("mode0")) {
        const std::string m = j.at("mode0").get<std::string>();
        if (m == "MM") s.mode0 = PathMode::MM;
        else if (m == "GB") s.mode0 = PathMode::GB;
        else throw config_error("bad value for config key: mode0 (MM or GB)");
    }
    if (j.contains("region0")) {
        const std::string r = j.at("region0").get<std::string>();
        if (r == "alpha") s.region0 = Region::alpha;
        else if (r == "beta") s.region0 = Region::beta;
        else throw config_error("bad value for config key: region0 (alpha or beta)");
    }
    detail::get_if(j, "t_end", s.t_end);
    if (j.contains("backend")) {
        const std::string b = j.at("backend").get<std::string>();
        if (b == "paper") s.backend = DynamicsBackend::paper;
        else if (b == "derived") s.backend = DynamicsBackend::derived;
        else throw config_error("bad value for config key: backend (paper or derived)");
    }
}

// Apply a full config document on top of an existing spec (defaults:
// the nominal parameter set).
inline void apply_config(const nlohmann::json& j, ScenarioSpec& spec) {
    detail::require_known_keys(
        j,
        {"g", "M_s", "m_c", "R", "a", "b", "r_c", "zeta_theta", "zeta_gamma_MM",
         "zeta_gamma_GB", "delta", "m_c_TT", "hydraulics", "controller", "scenario",
         "integrator"},
        "");
    RobotParams& p = spec.params;
    detail::get_if(j, "g", p.g);
    double M_s = p.masses.M_s, m_c = p.masses.m_c;
    double delta = p.masses.delta, m_c_TT = p.masses.m_c_TT;
    detail::get_if(j, "M_s", M_s);
    detail::get_if(j, "m_c", m_c);
    detail::get_if(j, "delta", delta);
    detail::get_if(j, "m_c_TT", m_c_TT);
    p.masses = Masses::make(M_s, m_c, delta, m_c_TT);
    detail::get_if(j, "R", p.geometry.R);
    detail::get_if(j, "a", p.geometry.a);
    detail::get_if(j, "b", p.geometry.b);
    detail::get_if(j, "r_c", p.geometry.r_c);
    p.geometry.validate();
    p.inertias = derive_inertias(p.geometry, p.masses);
    detail::get_if(j, "zeta_theta", p.friction.zeta_theta);
    detail::get_if(j, "zeta_gamma_MM", p.friction.zeta_gamma_MM);
    detail::get_if(j, "zeta_gamma_GB", p.friction.zeta_gamma_GB);
    p.friction.validate();
    p.hydraulics = HydraulicParams::defaults(p.geometry.r_c, p.masses.m_c,
                                             p.geometry.b, 0.075);
    if (j.contains("hydraulics")) apply_hydraulics_config(j.at("hydraulics"), p.hydraulics);
    // Scenario first: naming a built-in adopts its run definition, which the
    // explicit controller/integrator blocks may then override.
    if (j.contains("scenario")) apply_scenario_block(j.at("scenario"), spec);
    if (j.contains("controller")) apply_controller_config(j.at("controller"), spec.controller);
    if (j.contains("integrator")) apply_integrator_config(j.at("integrator"), spec.integrator);
}

inline nlohmann::json parse_config_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
}

inline nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

}  // namespace rollroller
