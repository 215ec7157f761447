#include "slab/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace slab {

using nlohmann::json;

std::string format15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

namespace {

json box_to_json(const WorkingBox& box) {
    json j = json::array();
    for (int i = 0; i < 3; ++i) j.push_back({box.range[i][0], box.range[i][1]});
    return j;
}

WorkingBox box_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("box: expected 3 [lo,hi] pairs");
    WorkingBox box;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_array() || j[i].size() != 2)
            throw std::invalid_argument("box: expected 3 [lo,hi] pairs");
        box.range[i][0] = j[i][0].get<double>();
        box.range[i][1] = j[i][1].get<double>();
        if (!(box.range[i][0] < box.range[i][1]))
            throw std::invalid_argument("box: lo must be below hi");
    }
    return box;
}

StaeckelData staeckel_from_json(const json& j) {
    if (!j.contains("rows") || !j.contains("box"))
        throw std::invalid_argument("metric data: missing \"rows\" or \"box\"");
    const json& rows = j.at("rows");
    if (!rows.is_array() || rows.size() != 3)
        throw std::invalid_argument("metric data: \"rows\" must hold 3 rows");
    StaeckelData data;
    for (int i = 0; i < 3; ++i) {
        if (!rows[i].is_array() || rows[i].size() != 3)
            throw std::invalid_argument("metric data: each row must hold 3 coefficient arrays");
        for (int k = 0; k < 3; ++k) {
            std::vector<double> c = rows[i][k].get<std::vector<double>>();
            data.rows[i][k] = Poly1(std::move(c));
        }
    }
    data.box = box_from_json(j.at("box"));
    return data;
}

PhasePoint phase_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 6)
        throw std::invalid_argument("phase point: expected 6 numbers [x,y,z,px,py,pz]");
    return PhasePoint::from_flat({v[0], v[1], v[2], v[3], v[4], v[5]});
}

Poly3 poly3_from_json(const json& j) {
    Poly3 p;
    for (const auto& term : j) {
        if (!term.contains("exp") || !term.contains("coef"))
            throw std::invalid_argument("polynomial term: expected {\"exp\":[i,j,k],\"coef\":v}");
        const auto e = term.at("exp").get<std::vector<int>>();
        if (e.size() != 3) throw std::invalid_argument("polynomial term: 3 exponents expected");
        p.add_term({e[0], e[1], e[2]}, term.at("coef").get<double>());
    }
    return p;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
    }
}

}  // namespace

StaeckelData parse_staeckel_json(const std::string& text) {
    return staeckel_from_json(parse_text(text));
}

std::string staeckel_to_json(const StaeckelData& data) {
    json j;
    json rows = json::array();
    for (int i = 0; i < 3; ++i) {
        json row = json::array();
        for (int k = 0; k < 3; ++k) row.push_back(data.rows[i][k].coeffs());
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["box"] = box_to_json(data.box);
    return j.dump(2) + "\n";
}

StaeckelData load_staeckel(const std::string& path) {
    return parse_staeckel_json(read_file(path));
}

void save_staeckel(const StaeckelData& data, const std::string& path) {
    write_file(path, staeckel_to_json(data));
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& samples) {
    os << "t,x,y,z,px,py,pz,H,I2,I3\n";
    for (const auto& s : samples) {
        const auto y = s.state.flat();
        os << format15(s.t);
        for (int i = 0; i < 6; ++i) os << ',' << format15(y[i]);
        os << ',' << format15(s.H) << ',' << format15(s.I2) << ',' << format15(s.I3)
           << '\n';
    }
}

namespace {

void append_stats(std::ostringstream& os, const IntegratorStats& st) {
    os << "  \"stats\": {\n"
       << "    \"n_steps\": " << st.n_steps << ",\n"
       << "    \"n_rejected\": " << st.n_rejected << ",\n"
       << "    \"max_drift_H\": " << format15(st.max_drift_H) << ",\n"
       << "    \"max_drift_I2\": " << format15(st.max_drift_I2) << ",\n"
       << "    \"max_drift_I3\": " << format15(st.max_drift_I3) << "\n"
       << "  }";
}

void append_phase(std::ostringstream& os, const PhasePoint& p) {
    const auto y = p.flat();
    os << '[';
    for (int i = 0; i < 6; ++i) os << (i ? "," : "") << format15(y[i]);
    os << ']';
}

}  // namespace

std::string trajectory_to_json(const Trajectory& traj) {
    std::ostringstream os;
    os << "{\n"
       << "  \"t_end\": " << format15(traj.t_end) << ",\n"
       << "  \"boundary_event\": " << (traj.boundary_event ? "true" : "false") << ",\n";
    append_stats(os, traj.stats);
    os << ",\n  \"samples\": [\n";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        os << "    {\"t\": " << format15(s.t) << ", \"state\": ";
        append_phase(os, s.state);
        os << ", \"H\": " << format15(s.H) << ", \"I2\": " << format15(s.I2)
           << ", \"I3\": " << format15(s.I3) << '}'
           << (i + 1 < traj.samples.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

std::string bounce_log_to_json(const BilliardRun& run,
                               const std::vector<TurningResidual>& turning) {
    std::ostringstream os;
    const char* stop = "time_limit";
    switch (run.stop) {
        case BilliardStop::bounce_limit: stop = "bounce_limit"; break;
        case BilliardStop::box_exit: stop = "box_exit"; break;
        case BilliardStop::grazing: stop = "grazing"; break;
        case BilliardStop::time_limit: stop = "time_limit"; break;
    }
    os << "{\n  \"stop\": \"" << stop << "\",\n"
       << "  \"t_end\": " << format15(run.trajectory.t_end) << ",\n";
    append_stats(os, run.trajectory.stats);
    os << ",\n  \"bounces\": [\n";
    for (std::size_t i = 0; i < run.bounces.size(); ++i) {
        const auto& b = run.bounces[i];
        os << "    {\"t\": " << format15(b.t) << ", \"wall\": " << b.wall_index
           << ", \"pre\": ";
        append_phase(os, b.pre);
        os << ", \"post\": ";
        append_phase(os, b.post);
        os << ",\n     \"H\": [" << format15(b.H_pre) << "," << format15(b.H_post)
           << "], \"I2\": [" << format15(b.I2_pre) << "," << format15(b.I2_post)
           << "], \"I3\": [" << format15(b.I3_pre) << "," << format15(b.I3_post)
           << "],\n     \"lambda\": [" << format15(b.lambda_pre) << ","
           << format15(b.lambda_post) << "], \"mu\": [" << format15(b.mu_pre) << ","
           << format15(b.mu_post) << "]}"
           << (i + 1 < run.bounces.size() ? ",\n" : "\n");
    }
    os << "  ],\n  \"turning_points\": [\n";
    for (std::size_t i = 0; i < turning.size(); ++i) {
        const auto& t = turning[i];
        os << "    {\"axis\": " << t.axis << ", \"t\": " << format15(t.t)
           << ", \"coordinate\": " << format15(t.coordinate)
           << ", \"residual\": " << format15(t.residual) << '}'
           << (i + 1 < turning.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

std::string rank_report_to_json(const RankReport& report) {
    std::ostringstream os;
    os << "{\n  \"rank\": " << report.rank << ",\n  \"grid_n\": " << report.n
       << ",\n  \"surfaces\": [" << (report.surfaces[0] ? "true" : "false") << ","
       << (report.surfaces[1] ? "true" : "false") << ","
       << (report.surfaces[2] ? "true" : "false") << "],\n  \"singular_tail\": [";
    for (std::size_t i = 0; i < report.singular_tail.size(); ++i)
        os << (i ? "," : "") << format15(report.singular_tail[i]);
    os << "],\n  \"basis\": [\n";
    for (std::size_t i = 0; i < report.basis.size(); ++i) {
        os << "    [";
        for (std::size_t k = 0; k < report.basis[i].size(); ++k)
            os << (k ? "," : "") << format15(report.basis[i][k]);
        os << ']' << (i + 1 < report.basis.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

GeodesicConfig parse_geodesic_config(const std::string& text) {
    const json j = parse_text(text);
    GeodesicConfig cfg;
    if (!j.contains("metric") || !j.contains("start"))
        throw std::invalid_argument("geodesic config: missing \"metric\" or \"start\"");
    cfg.metric = staeckel_from_json(j.at("metric"));
    cfg.start = phase_from_json(j.at("start"));
    cfg.t_end = j.value("t_end", 10.0);
    cfg.tol = j.value("tol", 1e-10);
    if (j.contains("tol_sweep"))
        cfg.tol_sweep = j.at("tol_sweep").get<std::vector<double>>();
    if (cfg.t_end <= 0.0) throw std::invalid_argument("geodesic config: t_end must be positive");
    return cfg;
}

WebConfig parse_web_config(const std::string& text) {
    const json j = parse_text(text);
    WebConfig cfg;
    if (j.contains("metric")) cfg.metric = staeckel_from_json(j.at("metric"));
    if (j.contains("box"))
        cfg.box = box_from_json(j.at("box"));
    else if (cfg.metric)
        cfg.box = cfg.metric->box;
    else
        throw std::invalid_argument("web config: needs \"box\" or \"metric\"");
    cfg.grid_n = j.value("grid_n", 8);
    if (j.contains("surfaces")) {
        const auto s = j.at("surfaces").get<std::vector<bool>>();
        if (s.size() != 3) throw std::invalid_argument("web config: \"surfaces\" needs 3 flags");
        for (int i = 0; i < 3; ++i) cfg.surfaces[i] = s[i];
    }
    if (!j.contains("curve_field"))
        throw std::invalid_argument("web config: missing \"curve_field\"");
    const json& f = j.at("curve_field");
    const std::string type = f.value("type", "");
    if (type == "staeckel-tau") {
        if (!cfg.metric)
            throw std::invalid_argument("web config: staeckel-tau field needs \"metric\"");
        cfg.use_tau = true;
        cfg.lambda = f.at("lambda").get<double>();
        cfg.mu = f.at("mu").get<double>();
        cfg.ek = f.value("ek", 1);
        cfg.el = f.value("el", 1);
        if ((cfg.ek != 1 && cfg.ek != -1) || (cfg.el != 1 && cfg.el != -1))
            throw std::invalid_argument("web config: ek, el must be +-1");
    } else if (type == "explicit") {
        const json& comp = f.at("components");
        if (!comp.is_array() || comp.size() != 3)
            throw std::invalid_argument("web config: explicit field needs 3 components");
        for (int i = 0; i < 3; ++i) cfg.field[i] = poly3_from_json(comp[i]);
    } else {
        throw std::invalid_argument("web config: curve_field type must be staeckel-tau or explicit");
    }
    if (j.contains("connection_probe")) {
        const json& c = j.at("connection_probe");
        cfg.probe_connection = true;
        const auto p = c.at("point").get<std::vector<double>>();
        if (p.size() != 3) throw std::invalid_argument("web config: probe point needs 3 numbers");
        cfg.probe_point = {p[0], p[1], p[2]};
        cfg.probe_h = c.value("h", 1e-3);
    }
    return cfg;
}

GridWebSpec web_spec_from_config(const WebConfig& cfg) {
    GridWebSpec spec;
    spec.box = cfg.box;
    spec.grid_n = cfg.grid_n;
    spec.surfaces = cfg.surfaces;
    if (cfg.use_tau) {
        const StaeckelData data = *cfg.metric;
        const double lambda = cfg.lambda, mu = cfg.mu;
        const int ek = cfg.ek, el = cfg.el;
        const int idx = (ek == 1) ? (el == 1 ? 0 : 1) : (el == 1 ? 2 : 3);
        spec.curve_field = [data, lambda, mu, idx](const Vec3& p) {
            return web_directions(data, p, lambda, mu).tau[idx];
        };
    } else {
        const auto f = cfg.field;
        spec.curve_field = [f](const Vec3& p) -> Vec3 {
            const std::array<double, 3> x{p[0], p[1], p[2]};
            return {f[0](x), f[1](x), f[2](x)};
        };
    }
    return spec;
}

BilliardConfig parse_billiard_config(const std::string& text) {
    const json j = parse_text(text);
    BilliardConfig cfg;
    if (!j.contains("metric") || !j.contains("walls") || !j.contains("start"))
        throw std::invalid_argument("billiard config: missing \"metric\", \"walls\" or \"start\"");
    cfg.metric = staeckel_from_json(j.at("metric"));
    for (const auto& w : j.at("walls")) {
        Wall wall;
        wall.axis = w.at("axis").get<int>();
        wall.level = w.at("level").get<double>();
        wall.side = w.at("side").get<int>();
        if (wall.axis < 0 || wall.axis > 2 || (wall.side != 1 && wall.side != -1))
            throw std::invalid_argument("billiard config: wall needs axis 0..2 and side +-1");
        cfg.walls.push_back(wall);
    }
    cfg.start = phase_from_json(j.at("start"));
    cfg.n_bounces = j.value("n_bounces", 50);
    cfg.tol = j.value("tol", 1e-10);
    if (cfg.n_bounces < 0)
        throw std::invalid_argument("billiard config: n_bounces must be nonnegative");
    return cfg;
}

VerifyConfig parse_verify_config(const std::string& text) {
    const json j = parse_text(text);
    VerifyConfig cfg;
    cfg.suite = j.value("suite", std::string("all"));
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

std::string line_corpus_to_json(const std::vector<std::array<double, 6>>& lines,
                                const std::vector<std::string>& tags) {
    if (lines.size() != tags.size())
        throw std::invalid_argument("line corpus: lines/tags size mismatch");
    std::ostringstream os;
    os << "[\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        os << "  {\"line\": [";
        for (int k = 0; k < 6; ++k) os << (k ? "," : "") << format15(lines[i][k]);
        os << "], \"tag\": \"" << tags[i] << "\"}" << (i + 1 < lines.size() ? ",\n" : "\n");
    }
    os << "]\n";
    return os.str();
}

}  // namespace slab
