#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rollroller/scenarios.hpp"
#include "rollroller/types.hpp"

namespace rollroller {

// Shortest round-trip decimal representation of a double (17 significant
// digits suffice; std::to_chars emits the minimal form).
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw config_error("bad numeric field: " + s);
    return v;
}

inline constexpr const char* trajectory_csv_header =
    "t,theta,theta_dot,gamma,gamma_dot,mode,region,energy";

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << trajectory_csv_header << '\n';
    for (const auto& p : traj.points) {
        out << format_double(p.t) << ',' << format_double(p.x.theta) << ','
            << format_double(p.x.theta_dot) << ',' << format_double(p.x.gamma) << ','
            << format_double(p.x.gamma_dot) << ',' << to_string(p.mode) << ','
            << to_string(p.region) << ',' << format_double(p.energy) << '\n';
    }
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path);
    write_trajectory_csv(out, traj);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    return fields;
}

// Parse a trajectory CSV back into sampled points (events are not stored
// in the CSV and come back empty).
inline Trajectory read_trajectory_csv(std::istream& in) {
    Trajectory traj;
    std::string line;
    if (!std::getline(in, line) || line != trajectory_csv_header)
        throw config_error("bad trajectory CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw config_error("bad trajectory CSV row: " + line);
        TrajectoryPoint p;
        p.t = parse_double(f[0]);
        p.x = State{parse_double(f[1]), parse_double(f[2]), parse_double(f[3]),
                    parse_double(f[4])};
        if (f[5] == "MM") p.mode = PathMode::MM;
        else if (f[5] == "GB") p.mode = PathMode::GB;
        else throw config_error("bad mode field: " + f[5]);
        if (f[6] == "alpha") p.region = Region::alpha;
        else if (f[6] == "beta") p.region = Region::beta;
        else throw config_error("bad region field: " + f[6]);
        p.energy = parse_double(f[7]);
        traj.points.push_back(p);
    }
    return traj;
}

inline Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open trajectory CSV: " + path);
    return read_trajectory_csv(in);
}

inline nlohmann::json metrics_to_json(const Metrics& m) {
    nlohmann::json j;
    j["final_theta"] = m.final_theta;
    if (m.offset_vs_baseline)
        j["offset_vs_baseline"] = *m.offset_vs_baseline;
    else
        j["offset_vs_baseline"] = nullptr;
    j["overshoot"] = m.overshoot;
    j["settling_time"] = m.settling_time;
    j["settled"] = m.settled;
    j["min_theta_dot"] = m.min_theta_dot;
    if (m.reversal_threshold)
        j["reversal_threshold"] = *m.reversal_threshold;
    else
        j["reversal_threshold"] = nullptr;
    j["jump_events"] = nlohmann::json::array();
    for (const auto& e : m.jump_events)
        j["jump_events"].push_back(
            {{"t", e.t}, {"gamma", e.gamma}, {"gamma_dot", e.gamma_dot}, {"theta", e.theta}});
    return j;
}

inline void write_metrics_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Minimal SVG line plots (time series), one curve per file.
// ---------------------------------------------------------------------------

struct PlotSeries {
    std::string label;
    std::vector<double> t;
    std::vector<double> y;
};

inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::string& y_label,
                           const std::vector<PlotSeries>& series) {
    constexpr double W = 800, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
    double tmin = 0, tmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            if (first) {
                tmin = tmax = s.t[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            tmin = std::min(tmin, s.t[i]);
            tmax = std::max(tmax, s.t[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (tmax - tmin < 1e-12) tmax = tmin + 1;
    if (ymax - ymin < 1e-12) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double t) { return ML + (t - tmin) / (tmax - tmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << ' ' << H << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>"
        << title << "</text>\n"
        << "<text x='16' y='" << H / 2
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 " << H / 2
        << ")'>" << y_label << "</text>\n"
        << "<text x='" << W / 2 << "' y='" << H - 12
        << "' text-anchor='middle' font-size='13'>t (s)</text>\n"
        << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='"
        << H - MB << "' stroke='black'/>\n"
        << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
        << "' stroke='black'/>\n";
    // Axis ticks: five per axis with value labels.
    for (int i = 0; i <= 5; ++i) {
        const double tv = tmin + (tmax - tmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        out << "<line x1='" << px(tv) << "' y1='" << H - MB << "' x2='" << px(tv)
            << "' y2='" << H - MB + 5 << "' stroke='black'/>\n"
            << "<text x='" << px(tv) << "' y='" << H - MB + 18
            << "' text-anchor='middle' font-size='11'>" << std::round(tv * 100) / 100
            << "</text>\n"
            << "<line x1='" << ML - 5 << "' y1='" << py(yv) << "' x2='" << ML << "' y2='"
            << py(yv) << "' stroke='black'/>\n"
            << "<text x='" << ML - 8 << "' y='" << py(yv) + 4
            << "' text-anchor='end' font-size='11'>" << std::round(yv * 100) / 100
            << "</text>\n";
    }
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        out << "<polyline fill='none' stroke='" << colors[k % 5]
            << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.t.size(); ++i)
            out << px(s.t[i]) << ',' << py(s.y[i]) << ' ';
        out << "'/>\n";
        out << "<text x='" << W - MR - 8 << "' y='" << MT + 16 + 16 * k
            << "' text-anchor='end' font-size='12' fill='" << colors[k % 5] << "'>"
            << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

inline PlotSeries series_from(const Trajectory& traj, double State::* field,
                              const std::string& label) {
    PlotSeries s;
    s.label = label;
    s.t.reserve(traj.points.size());
    s.y.reserve(traj.points.size());
    for (const auto& p : traj.points) {
        s.t.push_back(p.t);
        s.y.push_back(p.x.*field);
    }
    return s;
}

// Emit the standard trio of plots for one trajectory.
inline void write_trajectory_plots(const std::string& dir, const std::string& stem,
                                   const Trajectory& traj) {
    write_svg_plot(dir + "/" + stem + "_theta.svg", stem + ": sphere angle",
                   "theta (rad)", {series_from(traj, &State::theta, "theta")});
    write_svg_plot(dir + "/" + stem + "_theta_dot.svg", stem + ": sphere rate",
                   "theta_dot (rad/s)", {series_from(traj, &State::theta_dot, "theta_dot")});
    write_svg_plot(dir + "/" + stem + "_gamma_dot.svg", stem + ": core rate",
                   "gamma_dot (rad/s)", {series_from(traj, &State::gamma_dot, "gamma_dot")});
}

}  // namespace rollroller
