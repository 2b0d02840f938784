#pragma once

#include "csf/convexity.hpp"
#include "csf/curves.hpp"
#include "csf/flow.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csf::cli {

/// Config or usage problem. The message starts with the offending field.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CurveSource {
    std::optional<curves::CurveSpec> spec;
    std::optional<std::filesystem::path> snapshot;
    bool explicit_seed = false;  // otherwise the run seed (+ member index) is used
};

struct RunConfig {
    CurveSource curve;
    std::vector<CurveSource> family;  // extra members evolved alongside `curve`
    FlowParams flow;
    std::optional<Projection> projection;
    std::vector<std::string> monitors;
    std::filesystem::path output_dir = "csf_out";
    std::uint64_t seed = 0;
    bool svg = false;
    bool dump_chordfield = false;
    int snapshot_every = 1;  // in recorded rows
};

/// Sets the run seed and re-derives the seeds of generated curves that did
/// not set their own.
void apply_seed(RunConfig& config, std::uint64_t seed);

/// Registered monitor names: avoidance, sphericity, projected_convexity,
/// space_convexity (per curve) and pair_distance, mutual_sphere (family).
const std::vector<std::string>& monitor_names();

/// Parses the JSON config. Relative snapshot paths resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;

struct EvolveOptions {
    bool no_topology_checks = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    bool svg = false;
    bool dump_chordfield = false;
};

/// Builds the initial curve(s) for a config.
std::vector<DiscreteCurve> initial_curves(const RunConfig& config);

/// Runs the configured flow and writes metrics.csv, snap_<step>.curve,
/// report.txt and the optional SVG / chord-field dumps. Family members get
/// member<k>/ subdirectories.
int cmd_evolve(const RunConfig& config, const EvolveOptions& options, std::ostream& log);

/// One axis of a sweep grid. Keys: samples, seed, flow.<field>, curve.<param>.
struct SweepAxis {
    std::string key;
    std::vector<double> values;
};

struct SweepCell {
    std::map<std::string, double> point;
    bool ok = false;
    std::string error;
    StopReason reason = StopReason::MaxTime;
    double final_t = 0.0;
    long steps = 0;
    double length = 0.0;
    std::optional<double> radius_error;  // circle runs: |mean radius - sqrt(r0^2 - 2t)|
    std::optional<bool> avoidance_ok;    // runs with the avoidance monitor
    MonitorReport report;
};

struct ConvergenceRow {
    std::string key;
    double from = 0.0;
    double to = 0.0;
    std::map<std::string, double> fixed;
    double order = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<ConvergenceRow> orders;
};

/// Runs every grid point of the cartesian product concurrently (up to
/// `threads` at once, 0 = hardware concurrency). Observed orders
/// |log(e_a/e_b) / log(x_a/x_b)| are computed between neighbouring values of
/// each axis with the other coordinates held fixed, for cells that report a
/// radius error. Throws ConfigError for an empty grid or unknown key.
SweepResult run_sweep(const RunConfig& base, const std::vector<SweepAxis>& grid, unsigned threads = 0);

/// run_sweep plus sweep.csv, convergence.csv and cell_<k>/{metrics.csv,
/// report.txt} in the output directory.
int cmd_sweep(const RunConfig& base, const std::vector<SweepAxis>& grid, const EvolveOptions& options, std::ostream& log);

/// Parses "key=v1,v2,..." into an axis.
SweepAxis parse_axis(const std::string& text);

void list_generators(std::ostream& out);

/// SVG of a 2D polyline plus its convex hull outline.
std::string render_svg(const std::vector<Eigen::Vector2d>& polyline);

}  // namespace csf::cli
