#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "slab/billiard.hpp"
#include "slab/dynamics.hpp"
#include "slab/io.hpp"
#include "slab/staeckel.hpp"
#include "slab/verify.hpp"
#include "slab/webs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;

struct Options {
    std::string config;
    std::string out;
    std::optional<double> tol;
    std::optional<unsigned long long> seed;
    int jobs = 1;
};

void ensure_out(const std::string& out) { std::filesystem::create_directories(out); }

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

int cmd_metric(const Options& opt) {
    const slab::StaeckelData data = slab::load_staeckel(opt.config);
    ensure_out(opt.out);
    const slab::Certificate cert = slab::certify(data, 8);

    std::ostringstream rep;
    rep << "{\n  \"certified\": " << (cert.ok ? "true" : "false");
    if (!cert.ok)
        rep << ",\n  \"violation\": \"" << cert.what << "\",\n  \"point\": ["
            << slab::format15(cert.violation_point[0]) << ","
            << slab::format15(cert.violation_point[1]) << ","
            << slab::format15(cert.violation_point[2]) << "]";
    rep << "\n}\n";
    slab::write_file(join(opt.out, "certificate.json"), rep.str());

    if (cert.ok) {
        // sampled coefficient table over a 5^3 grid
        std::ostringstream csv;
        csv << "x,y,z,g_xx,g_yy,g_zz,I2_xx,I2_yy,I2_zz,I3_xx,I3_yy,I3_zz\n";
        const int n = 5;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz) {
                    slab::Vec3 p;
                    const std::array<int, 3> idx{ix, iy, iz};
                    for (int k = 0; k < 3; ++k)
                        p[k] = data.box.lo(k) +
                               (data.box.hi(k) - data.box.lo(k)) * idx[k] / double(n - 1);
                    const auto g = slab::metric(data, p);
                    const auto I = slab::integrals(data, p);
                    csv << slab::format15(p[0]) << ',' << slab::format15(p[1]) << ','
                        << slab::format15(p[2]);
                    for (int k = 0; k < 3; ++k) csv << ',' << slab::format15(g.coeff[k].v);
                    for (int k = 0; k < 3; ++k)
                        csv << ',' << slab::format15(I.I2.coeff[k].v);
                    for (int k = 0; k < 3; ++k)
                        csv << ',' << slab::format15(I.I3.coeff[k].v);
                    csv << '\n';
                }
        slab::write_file(join(opt.out, "coefficients.csv"), csv.str());
        return kExitOk;
    }
    std::cerr << "certification failed: " << cert.what << "\n";
    return kExitVerify;
}

int cmd_geodesic(const Options& opt) {
    slab::GeodesicConfig cfg = slab::parse_geodesic_config(slab::read_file(opt.config));
    if (opt.tol) cfg.tol = *opt.tol;
    ensure_out(opt.out);

    const slab::Trajectory traj =
        slab::hamiltonian_flow(cfg.metric, cfg.start, cfg.t_end, cfg.tol);
    {
        std::ofstream csv(join(opt.out, "trajectory.csv"), std::ios::binary);
        slab::write_trajectory_csv(csv, traj.samples);
    }
    slab::write_file(join(opt.out, "trajectory.json"), slab::trajectory_to_json(traj));

    if (!cfg.tol_sweep.empty()) {
        std::ostringstream tab;
        tab << "tol,max_drift_H,max_drift_I2,max_drift_I3,n_steps\n";
        for (double tol : cfg.tol_sweep) {
            const slab::Trajectory t =
                slab::hamiltonian_flow(cfg.metric, cfg.start, cfg.t_end, tol);
            tab << slab::format15(tol) << ',' << slab::format15(t.stats.max_drift_H)
                << ',' << slab::format15(t.stats.max_drift_I2) << ','
                << slab::format15(t.stats.max_drift_I3) << ',' << t.stats.n_steps << '\n';
        }
        slab::write_file(join(opt.out, "drift_table.csv"), tab.str());
    }
    return kExitOk;
}

int cmd_web(const Options& opt) {
    const slab::WebConfig cfg = slab::parse_web_config(slab::read_file(opt.config));
    ensure_out(opt.out);
    const slab::GridWebSpec spec = slab::web_spec_from_config(cfg);
    const slab::RankReport rep = slab::estimate_web_rank(spec, opt.tol.value_or(1e-8));
    slab::write_file(join(opt.out, "rank_report.json"), slab::rank_report_to_json(rep));

    if (cfg.use_tau) {
        // direction table over a coarse grid: all four pencil directions
        std::ostringstream csv;
        csv << "x,y,z,ek,el,tau_x,tau_y,tau_z\n";
        const int n = 5;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz) {
                    slab::Vec3 p;
                    const std::array<int, 3> idx{ix, iy, iz};
                    for (int k = 0; k < 3; ++k)
                        p[k] = cfg.box.lo(k) +
                               (cfg.box.hi(k) - cfg.box.lo(k)) * idx[k] / double(n - 1);
                    const auto ws =
                        slab::web_directions(*cfg.metric, p, cfg.lambda, cfg.mu);
                    for (int k = 0; k < 4; ++k) {
                        csv << slab::format15(p[0]) << ',' << slab::format15(p[1]) << ','
                            << slab::format15(p[2]) << ',' << ws.signs[k][0] << ','
                            << ws.signs[k][1];
                        for (int c = 0; c < 3; ++c)
                            csv << ',' << slab::format15(ws.tau[k][c]);
                        csv << '\n';
                    }
                }
        slab::write_file(join(opt.out, "directions.csv"), csv.str());
    }

    if (cfg.probe_connection) {
        const slab::ConnectionReport cr =
            slab::connection_and_curvature(spec, cfg.probe_point, cfg.probe_h);
        std::ostringstream js;
        js << "{\n  \"connection_exists\": " << (cr.connection_exists ? "true" : "false")
           << ",\n  \"existence_residual\": " << slab::format15(cr.existence_residual)
           << ",\n  \"curvature_norm\": " << slab::format15(cr.curvature_norm) << "\n}\n";
        slab::write_file(join(opt.out, "connection.json"), js.str());
    }
    return kExitOk;
}

int cmd_billiard(const Options& opt) {
    slab::BilliardConfig cfg = slab::parse_billiard_config(slab::read_file(opt.config));
    if (opt.tol) cfg.tol = *opt.tol;
    ensure_out(opt.out);

    slab::BilliardOptions bopt;
    bopt.tol = cfg.tol;
    const slab::BilliardRun run =
        slab::billiard_run(cfg.metric, cfg.walls, cfg.start, cfg.n_bounces, bopt);
    const auto lm = slab::invariant_values(cfg.metric, cfg.start);
    const auto turning = slab::caustic_check(cfg.metric, run.trajectory, lm[0], lm[1]);

    {
        std::ofstream csv(join(opt.out, "trajectory.csv"), std::ios::binary);
        slab::write_trajectory_csv(csv, run.trajectory.samples);
    }
    slab::write_file(join(opt.out, "bounce_log.json"),
                     slab::bounce_log_to_json(run, turning));
    if (run.stop == slab::BilliardStop::grazing)
        std::cerr << "warning: grazing impact, run truncated\n";
    return kExitOk;
}

int cmd_verify(const Options& opt) {
    slab::VerifyConfig cfg = slab::parse_verify_config(slab::read_file(opt.config));
    if (opt.seed) cfg.seed = *opt.seed;
    ensure_out(opt.out);
    const auto results = slab::run_suite(cfg.suite, cfg.seed);
    const std::string text = slab::report_text(results);
    slab::write_file(join(opt.out, "verify_report.txt"), text);
    std::cout << text;
    return slab::all_pass(results) ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separable geodesic flows: metrics, webs, billiards"};
    app.require_subcommand(1);

    Options opt;
    double tol_value = 0.0;
    unsigned long long seed_value = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "input configuration path")->required();
        sub->add_option("--out", opt.out, "output directory")->required();
        sub->add_option("--tol", tol_value, "tolerance override")
            ->each([&](const std::string&) { opt.tol = tol_value; });
        sub->add_option("--seed", seed_value, "random seed override")
            ->each([&](const std::string&) { opt.seed = seed_value; });
        sub->add_option("--jobs", opt.jobs, "parallel batch width");
    };

    CLI::App* metric = app.add_subcommand("metric", "certify metric data, sample coefficients");
    CLI::App* geodesic = app.add_subcommand("geodesic", "integrate the geodesic flow");
    CLI::App* web = app.add_subcommand("web", "web rank and direction analysis");
    CLI::App* billiard = app.add_subcommand("billiard", "billiard run with bounce log");
    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    for (CLI::App* sub : {metric, geodesic, web, billiard, verify}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (metric->parsed()) return cmd_metric(opt);
        if (geodesic->parsed()) return cmd_geodesic(opt);
        if (web->parsed()) return cmd_web(opt);
        if (billiard->parsed()) return cmd_billiard(opt);
        if (verify->parsed()) return cmd_verify(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
