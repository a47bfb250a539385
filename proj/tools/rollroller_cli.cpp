// Command-line front end: scenario execution, parameter sweeps, validity
// gates, and trajectory comparison. Emits CSV trajectories, JSON metrics and
// SVG plots.

#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rollroller/rollroller.hpp"

namespace fs = std::filesystem;
using namespace rollroller;

namespace {

struct CommonOpts {
    std::string scenario;
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> emit = {"csv", "json"};
    double t_end = -1.0;  // <0: keep scenario default
    std::string backend = "paper";
    bool strict_paper_constraints = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scenario", o.scenario,
                    "built-in scenario: case1, case2, case3, case4, mass-sweep, "
                    "forward, baseline");
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--emit", o.emit, "artifacts to emit: csv, json, plot")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--t-end", o.t_end, "override run horizon (s)");
    cmd->add_option("--backend", o.backend, "dynamics backend")
        ->check(CLI::IsMember({"paper", "derived"}))
        ->capture_default_str();
    cmd->add_flag("--strict-paper-constraints", o.strict_paper_constraints,
                  "keep the published (empty) second entry branch");
}

DynamicsBackend backend_of(const CommonOpts& o) {
    return o.backend == "derived" ? DynamicsBackend::derived : DynamicsBackend::paper;
}

bool wants(const CommonOpts& o, const std::string& kind) {
    for (const auto& e : o.emit)
        if (e == kind) return true;
    return false;
}

ScenarioSpec resolve_spec(const CommonOpts& o) {
    ScenarioSpec spec;
    if (!o.scenario.empty()) {
        spec = scenario_by_name(o.scenario, backend_of(o));
    } else if (!o.config_path.empty()) {
        spec.backend = backend_of(o);
    } else {
        throw config_error("need --scenario or --config");
    }
    if (!o.config_path.empty()) apply_config(load_config_file(o.config_path), spec);
    if (o.t_end > 0) spec.t_end = o.t_end;
    spec.controller.strict_constraints = o.strict_paper_constraints;
    return spec;
}

void ensure_out_dir(const CommonOpts& o) {
    fs::create_directories(o.out_dir);
    if (!fs::is_directory(o.out_dir))
        throw config_error("output directory not writable: " + o.out_dir);
}

int cmd_run(const CommonOpts& o) {
    ensure_out_dir(o);
    const ScenarioSpec spec = resolve_spec(o);
    const Trajectory traj = simulate(spec);
    Metrics m = basic_metrics(traj);

    // Scenarios defined relative to a partner run get their offset metric.
    if (spec.name == "forward") {
        ScenarioSpec base = baseline_spec(spec.backend);
        base.t_end = spec.t_end;
        m.offset_vs_baseline = offset_metric(traj, simulate(base), traj.back().t);
    } else if (spec.name == "case4" || spec.name == "case4-gb" ||
               spec.name == "case4-mm") {
        ScenarioSpec other = case4_spec(
            spec.mode0 == PathMode::GB ? PathMode::MM : PathMode::GB, spec.backend);
        other.t_end = spec.t_end;
        const Trajectory partner = simulate(other);
        const Trajectory& mm = spec.mode0 == PathMode::MM ? traj : partner;
        const Trajectory& gb = spec.mode0 == PathMode::GB ? traj : partner;
        m.offset_vs_baseline = offset_metric(mm, gb, traj.back().t);
    }

    const std::string stem = spec.name.empty() ? "run" : spec.name;
    if (wants(o, "csv"))
        write_trajectory_csv(o.out_dir + "/trajectory.csv", traj);
    if (wants(o, "json")) {
        nlohmann::json j = metrics_to_json(m);
        j["scenario"] = stem;
        j["backend"] = to_string(spec.backend);
        j["t_end"] = spec.t_end;
        write_metrics_json(o.out_dir + "/metrics.json", j);
    }
    if (wants(o, "plot")) write_trajectory_plots(o.out_dir, stem, traj);
    std::cout << "wrote " << o.out_dir << "/{trajectory.csv,metrics.json}"
              << " for scenario " << stem << " (final theta = " << m.final_theta
              << " rad)\n";
    return 0;
}

int cmd_sweep(const CommonOpts& o, int points) {
    ensure_out_dir(o);
    if (points <= 0) throw config_error("sweep needs a positive --points count");
    const DynamicsBackend be = backend_of(o);
    const std::string name = o.scenario.empty() ? "mass-sweep" : o.scenario;

    std::ofstream out(o.out_dir + "/sweep.csv");
    if (!out) throw config_error("cannot open output file: " + o.out_dir + "/sweep.csv");

    if (name == "mass-sweep") {
        std::vector<double> grid;
        for (int i = 0; i < points; ++i)
            grid.push_back(0.02 + (0.5 - 0.02) * i / std::max(1, points - 1));
        const auto pts = mass_ratio_sweep(grid, be);
        out << "m_star,classification,overshoot,settling_time,settled,ripple\n";
        for (const auto& p : pts)
            out << format_double(p.m_star) << ',' << to_string(p.cls) << ','
                << format_double(p.overshoot) << ',' << format_double(p.settling_time)
                << ',' << (p.settled ? 1 : 0) << ',' << format_double(p.ripple) << '\n';
        std::cout << "wrote " << pts.size() << " sweep rows to " << o.out_dir
                  << "/sweep.csv\n";
        return 0;
    }
    if (name == "case3") {
        std::vector<double> grid;
        const double lo = -3.0 * std::numbers::pi, hi = 3.0 * std::numbers::pi;
        for (int i = 0; i < points; ++i)
            grid.push_back(lo + (hi - lo) * i / std::max(1, points - 1));
        const Case3Report rep = run_case3(grid, be);
        out << "gamma_dot0,final_theta\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            out << format_double(rep.gamma_dot0[i]) << ','
                << format_double(rep.final_theta[i]) << '\n';
        nlohmann::json j;
        j["reversal_threshold_neg"] =
            rep.reversal_threshold_neg ? nlohmann::json(*rep.reversal_threshold_neg)
                                       : nlohmann::json(nullptr);
        j["reversal_threshold_pos"] =
            rep.reversal_threshold_pos ? nlohmann::json(*rep.reversal_threshold_pos)
                                       : nlohmann::json(nullptr);
        j["monotone_sign"] = rep.monotone_sign;
        write_metrics_json(o.out_dir + "/metrics.json", j);
        std::cout << "wrote " << grid.size() << " sweep rows to " << o.out_dir
                  << "/sweep.csv\n";
        return 0;
    }
    if (name == "case1") {
        std::vector<double> grid;
        const double lo = -std::numbers::pi, hi = -std::numbers::pi / 2.0;
        for (int i = 0; i < points; ++i)
            grid.push_back(lo + (hi - lo) * (i + 1) / (points + 1));
        const auto res = run_case1(grid, be);
        out << "gamma0,final_theta,settled\n";
        for (const auto& r : res)
            out << format_double(r.gamma0) << ',' << format_double(r.metrics.final_theta)
                << ',' << (r.metrics.settled ? 1 : 0) << '\n';
        std::cout << "wrote " << res.size() << " sweep rows to " << o.out_dir
                  << "/sweep.csv\n";
        return 0;
    }
    if (name == "case2") {
        std::vector<double> grid;
        for (int i = 0; i < points; ++i)
            grid.push_back(std::numbers::pi * (i + 1) / points);
        const Case2Report rep = run_case2(grid, 9.8, be);
        out << "theta_dot0,peak_gamma,final_theta\n";
        for (const auto& r : rep.points)
            out << format_double(r.theta_dot0) << ',' << format_double(r.peak_gamma)
                << ',' << format_double(r.metrics.final_theta) << '\n';
        nlohmann::json j;
        j["velocity_relation_slope"] = rep.slope;
        write_metrics_json(o.out_dir + "/metrics.json", j);
        std::cout << "wrote " << rep.points.size() << " sweep rows to " << o.out_dir
                  << "/sweep.csv\n";
        return 0;
    }
    throw config_error("scenario has no sweep: " + name);
}

int cmd_validate(const CommonOpts& o) {
    ScenarioSpec spec;
    if (!o.config_path.empty()) apply_config(load_config_file(o.config_path), spec);
    const RobotParams& p = spec.params;

    bool all = true;
    auto gate = [&](const std::string& label, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << label << '\n';
        all &= ok;
    };
    gate("mass ratio 1/10 <= m_c/M_s < 1/3",
         validate_mass_ratio(p.masses.m_c, p.masses.M_s));
    gate("actuation feasible (transmitted force exceeds demand)",
         actuation_feasible(p.hydraulics, p.geometry.r_c, p.g));
    gate("turner-tube core mass inside admissible interval",
         tt_core_mass_bounds(p.masses.M_s, p.masses.delta).contains(p.masses.m_c_TT));
    bool geom_ok = true;
    try {
        p.geometry.validate();
        p.friction.validate();
        p.hydraulics.validate();
    } catch (const std::exception&) {
        geom_ok = false;
    }
    gate("geometry and parameter invariants", geom_ok);
    return all ? 0 : 1;
}

int cmd_compare(const std::string& a_path, const std::string& b_path,
                const CommonOpts& o) {
    const Trajectory a = read_trajectory_csv(a_path);
    const Trajectory b = read_trajectory_csv(b_path);
    if (a.points.empty() || b.points.empty())
        throw config_error("compare needs non-empty trajectories");
    const double t_eval = std::min(a.points.back().t, b.points.back().t);
    const double off = offset_metric(a, b, t_eval);
    nlohmann::json j;
    j["t_eval"] = t_eval;
    j["offset"] = off;
    j["theta_a"] = a.at_time(t_eval).x.theta;
    j["theta_b"] = b.at_time(t_eval).x.theta;
    std::cout << j.dump(2) << '\n';
    if (o.out_dir != ".") {
        ensure_out_dir(o);
        write_metrics_json(o.out_dir + "/compare.json", j);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rollroller: planar spherical-robot simulation"};
    app.require_subcommand(1);

    CommonOpts run_o, sweep_o, val_o, cmp_o;
    int sweep_points = 25;
    std::string cmp_a, cmp_b;

    CLI::App* run = app.add_subcommand("run", "run one scenario");
    add_common(run, run_o);
    CLI::App* sweep = app.add_subcommand("sweep", "run a scenario parameter sweep");
    add_common(sweep, sweep_o);
    sweep->add_option("--points", sweep_points, "grid size")->capture_default_str();
    CLI::App* validate = app.add_subcommand("validate", "run all validity gates");
    add_common(validate, val_o);
    CLI::App* compare = app.add_subcommand("compare", "offset between two trajectories");
    add_common(compare, cmp_o);
    compare->add_option("a", cmp_a, "first trajectory CSV")->required();
    compare->add_option("b", cmp_b, "second trajectory CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_o);
        if (sweep->parsed()) return cmd_sweep(sweep_o, sweep_points);
        if (validate->parsed()) return cmd_validate(val_o);
        if (compare->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
