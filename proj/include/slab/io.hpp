#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slab/billiard.hpp"
#include "slab/dynamics.hpp"
#include "slab/staeckel.hpp"
#include "slab/webs.hpp"

namespace slab {

/// Format a double with 15 significant digits (artifact outputs).
std::string format15(double v);

/// Metric data as JSON text: {"rows": [3 x [3 x coefficient array]],
/// "box": [3 x [lo, hi]]}. Serialization round-trips bit-exactly.
StaeckelData parse_staeckel_json(const std::string& text);
std::string staeckel_to_json(const StaeckelData& data);

StaeckelData load_staeckel(const std::string& path);
void save_staeckel(const StaeckelData& data, const std::string& path);

/// Trajectory CSV: header t,x,y,z,px,py,pz,H,I2,I3, one row per sample,
/// 15 significant digits.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& samples);

/// Trajectory JSON with integrator statistics embedded.
std::string trajectory_to_json(const Trajectory& traj);

/// Bounce log: impact times, pre/post states, conserved-value table.
std::string bounce_log_to_json(const BilliardRun& run,
                               const std::vector<TurningResidual>& turning);

/// Rank report: dimension, singular-value tail, basis samples.
std::string rank_report_to_json(const RankReport& report);

/// Geodesic run configuration.
struct GeodesicConfig {
    StaeckelData metric;
    PhasePoint start;
    double t_end = 10.0;
    double tol = 1e-10;
    std::vector<double> tol_sweep;  // optional: rerun per tolerance, emit drift table
};
GeodesicConfig parse_geodesic_config(const std::string& text);

/// Web run configuration: curve field either from the metric pencil
/// ("staeckel-tau", lambda/mu/ek/el) or explicit polynomial components.
struct WebConfig {
    std::optional<StaeckelData> metric;
    WorkingBox box;
    int grid_n = 8;
    std::array<bool, 3> surfaces{true, true, true};
    // staeckel-tau parameters
    bool use_tau = false;
    double lambda = 0.0, mu = 0.0;
    int ek = 1, el = 1;
    // explicit field components
    std::array<Poly3, 3> field;
    // optional connection probe for 3-webs
    bool probe_connection = false;
    Vec3 probe_point{};
    double probe_h = 1e-3;
};
WebConfig parse_web_config(const std::string& text);
GridWebSpec web_spec_from_config(const WebConfig& cfg);

/// Billiard run configuration.
struct BilliardConfig {
    StaeckelData metric;
    std::vector<Wall> walls;
    PhasePoint start;
    int n_bounces = 50;
    double tol = 1e-10;
};
BilliardConfig parse_billiard_config(const std::string& text);

/// Verification suite configuration.
struct VerifyConfig {
    std::string suite = "all";
    unsigned long long seed = 20240817ull;
};
VerifyConfig parse_verify_config(const std::string& text);

/// Plücker line corpus with classification tags.
std::string line_corpus_to_json(const std::vector<std::array<double, 6>>& lines,
                                const std::vector<std::string>& tags);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace slab
