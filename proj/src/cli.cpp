#include "csf/cli.hpp"

#include "csf/hull.hpp"
#include "csf/spherical.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

namespace csf::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ConfigError(field + ": " + what); }

double number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

long integer(const json& j, const std::string& field) {
    if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>())) {
        fail(field, "expected an integer");
    }
    return j.is_number_integer() ? j.get<long>() : static_cast<long>(j.get<double>());
}

bool boolean(const json& j, const std::string& field) {
    if (!j.is_boolean()) fail(field, "expected true or false");
    return j.get<bool>();
}

std::string string(const json& j, const std::string& field) {
    if (!j.is_string()) fail(field, "expected a string");
    return j.get<std::string>();
}

Vector vector(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = number(j[k], field + "[" + std::to_string(k) + "]");
    return v;
}

void only_keys(const json& j, const std::string& field, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(field, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            fail(field.empty() ? key : field + "." + key, "unknown field");
        }
    }
}

CurveSource parse_curve(const json& j, const std::string& field, const std::filesystem::path& base_dir) {
    only_keys(j, field, {"kind", "params", "samples", "seed", "snapshot"});
    CurveSource out;
    if (j.contains("snapshot")) {
        if (j.contains("kind")) fail(field, "give either kind or snapshot, not both");
        std::filesystem::path p = string(j["snapshot"], field + ".snapshot");
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        out.snapshot = p;
        return out;
    }
    if (!j.contains("kind")) fail(field + ".kind", "missing");
    curves::CurveSpec spec;
    spec.kind = string(j["kind"], field + ".kind");
    const auto& table = curves::generators();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& g) { return g.kind == spec.kind; });
    if (it == table.end()) fail(field + ".kind", "unknown curve kind '" + spec.kind + "' (see list-generators)");
    if (j.contains("params")) {
        if (!j["params"].is_object()) fail(field + ".params", "expected an object");
        for (const auto& [key, value] : j["params"].items()) {
            if (!it->defaults.contains(key)) fail(field + ".params." + key, "not a parameter of '" + spec.kind + "'");
            spec.params[key] = number(value, field + ".params." + key);
        }
    }
    if (j.contains("samples")) {
        const long n = integer(j["samples"], field + ".samples");
        if (n < static_cast<long>(kMinCurveVertices)) fail(field + ".samples", "must be at least 8");
        spec.samples = static_cast<std::size_t>(n);
    }
    if (j.contains("seed")) {
        const long s = integer(j["seed"], field + ".seed");
        if (s < 0) fail(field + ".seed", "must be nonnegative");
        spec.seed = static_cast<std::uint64_t>(s);
        out.explicit_seed = true;
    }
    out.spec = spec;
    return out;
}

FlowParams parse_flow(const json& j) {
    only_keys(j, "flow", {"dt_safety", "redistribution_every", "stop_min_length", "stop_max_curvature", "stop_max_time",
                          "kappa_floor", "record_every"});
    FlowParams p;
    if (j.contains("dt_safety")) p.dt_safety = number(j["dt_safety"], "flow.dt_safety");
    if (j.contains("redistribution_every")) p.redistribution_every = static_cast<int>(integer(j["redistribution_every"], "flow.redistribution_every"));
    if (j.contains("stop_min_length")) p.stop_min_length = number(j["stop_min_length"], "flow.stop_min_length");
    if (j.contains("stop_max_curvature")) p.stop_max_curvature = number(j["stop_max_curvature"], "flow.stop_max_curvature");
    if (j.contains("stop_max_time")) p.stop_max_time = number(j["stop_max_time"], "flow.stop_max_time");
    if (j.contains("kappa_floor")) p.kappa_floor = number(j["kappa_floor"], "flow.kappa_floor");
    if (j.contains("record_every")) p.record_every = static_cast<int>(integer(j["record_every"], "flow.record_every"));
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

}  // namespace

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
    cfg.seed = seed;
    if (cfg.curve.spec && !cfg.curve.explicit_seed) cfg.curve.spec->seed = seed;
    for (std::size_t k = 0; k < cfg.family.size(); ++k) {
        if (cfg.family[k].spec && !cfg.family[k].explicit_seed) cfg.family[k].spec->seed = seed + k + 1;
    }
}

const std::vector<std::string>& monitor_names() {
    static const std::vector<std::string> names = {"avoidance",       "sphericity",    "projected_convexity",
                                                   "space_convexity", "pair_distance", "mutual_sphere"};
    return names;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    only_keys(j, "", {"curve", "family", "flow", "projection", "monitors", "output", "seed"});

    RunConfig cfg;
    if (!j.contains("curve")) fail("curve", "missing");
    cfg.curve = parse_curve(j["curve"], "curve", base_dir);
    if (j.contains("family")) {
        if (!j["family"].is_array()) fail("family", "expected an array of curves");
        for (std::size_t k = 0; k < j["family"].size(); ++k) {
            cfg.family.push_back(parse_curve(j["family"][k], "family[" + std::to_string(k) + "]", base_dir));
        }
    }
    if (j.contains("flow")) cfg.flow = parse_flow(j["flow"]);
    if (j.contains("projection")) {
        only_keys(j["projection"], "projection", {"e1", "e2"});
        if (!j["projection"].contains("e1") || !j["projection"].contains("e2")) fail("projection", "needs e1 and e2");
        try {
            cfg.projection = Projection(vector(j["projection"]["e1"], "projection.e1"), vector(j["projection"]["e2"], "projection.e2"));
        } catch (const std::invalid_argument& e) {
            fail("projection", e.what());
        }
    }
    if (j.contains("monitors")) {
        if (!j["monitors"].is_array()) fail("monitors", "expected an array of names");
        const auto& known = monitor_names();
        for (std::size_t k = 0; k < j["monitors"].size(); ++k) {
            const std::string field = "monitors[" + std::to_string(k) + "]";
            const std::string name = string(j["monitors"][k], field);
            if (std::find(known.begin(), known.end(), name) == known.end()) fail(field, "unknown monitor '" + name + "'");
            cfg.monitors.push_back(name);
        }
    }
    if (j.contains("output")) {
        only_keys(j["output"], "output", {"dir", "svg", "dump_chordfield", "snapshot_every"});
        const auto& o = j["output"];
        if (o.contains("dir")) cfg.output_dir = string(o["dir"], "output.dir");
        if (o.contains("svg")) cfg.svg = boolean(o["svg"], "output.svg");
        if (o.contains("dump_chordfield")) cfg.dump_chordfield = boolean(o["dump_chordfield"], "output.dump_chordfield");
        if (o.contains("snapshot_every")) {
            cfg.snapshot_every = static_cast<int>(integer(o["snapshot_every"], "output.snapshot_every"));
            if (cfg.snapshot_every < 1) fail("output.snapshot_every", "must be at least 1");
        }
    }
    std::uint64_t seed = 0;
    if (j.contains("seed")) {
        const long s = integer(j["seed"], "seed");
        if (s < 0) fail("seed", "must be nonnegative");
        seed = static_cast<std::uint64_t>(s);
    }
    const bool uses_family_monitor = std::any_of(cfg.monitors.begin(), cfg.monitors.end(),
                                                 [](const std::string& m) { return m == "pair_distance" || m == "mutual_sphere"; });
    if (uses_family_monitor && cfg.family.empty()) fail("monitors", "pair_distance and mutual_sphere need a family");
    apply_seed(cfg, seed);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config: cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

namespace {

DiscreteCurve build(const CurveSource& src) {
    if (src.snapshot) return DiscreteCurve(read_snapshot(src.snapshot->string()).points);
    return curves::make_curve(*src.spec);
}

struct MonitorSet {
    std::vector<MonitorPtr> per_curve;
    std::vector<FamilyMonitorPtr> family;
};

MonitorSet build_monitors(const RunConfig& cfg, int dim, bool no_topology_checks) {
    MonitorSet set;
    for (const auto& name : cfg.monitors) {
        if (name == "avoidance") {
            if (!no_topology_checks) set.per_curve.push_back(std::make_shared<AvoidanceMonitor>());
        } else if (name == "sphericity") {
            set.per_curve.push_back(std::make_shared<SphericityMonitor>());
        } else if (name == "projected_convexity") {
            const Projection p = cfg.projection ? *cfg.projection : Projection::xy(dim);
            if (p.dim() != dim) fail("projection", "basis dimension does not match the curve dimension");
            set.per_curve.push_back(std::make_shared<ProjectedConvexityMonitor>(p));
        } else if (name == "space_convexity") {
            if (dim != 3 && dim != 2) fail("monitors", "space_convexity needs a curve in R^2 or R^3");
            set.per_curve.push_back(std::make_shared<SpaceConvexityMonitor>());
        } else if (name == "pair_distance") {
            set.family.push_back(std::make_shared<PairDistanceMonitor>());
        } else if (name == "mutual_sphere") {
            set.family.push_back(std::make_shared<MutualSphereMonitor>());
        }
    }
    return set;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

void write_chord_field(const std::filesystem::path& path, const DiscreteCurve& curve) {
    const auto field = chord_field(curve);
    std::ofstream out(path);
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < field.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < field.values.cols(); ++j) out << (j ? "," : "") << field.values(i, j);
        out << '\n';
    }
}

std::string report_text(const MonitorReport& report) {
    std::ostringstream out;
    out << std::setprecision(10);
    out << "stop_reason: " << to_string(report.reason) << '\n';
    out << "final_t: " << report.final_t << '\n';
    out << "final_step: " << report.final_step << '\n';
    if (!report.message.empty()) out << "message: " << report.message << '\n';
    std::vector<std::string> names = {"length", "max_kappa", "min_edge"};
    names.insert(names.end(), report.columns.begin(), report.columns.end());
    for (const auto& name : names) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, last = std::numeric_limits<double>::quiet_NaN();
        std::size_t present = 0;
        for (double v : report.series(name)) {
            if (std::isnan(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            last = v;
            ++present;
        }
        if (present == 0) {
            out << name << ": no samples\n";
        } else {
            out << name << ": min " << lo << " max " << hi << " last " << last << '\n';
        }
    }
    return out.str();
}

bool topology_ok(const MonitorReport& report) {
    if (!report.has_column("self_intersect")) return true;
    for (double v : report.series("self_intersect")) {
        if (v != 0.0) return false;
    }
    return true;
}

std::string step_name(long step) {
    std::ostringstream s;
    s << std::setw(8) << std::setfill('0') << step;
    return s.str();
}

}  // namespace

std::vector<DiscreteCurve> initial_curves(const RunConfig& config) {
    std::vector<DiscreteCurve> out;
    try {
        out.push_back(build(config.curve));
        for (const auto& m : config.family) out.push_back(build(m));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("curve: ") + e.what());
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const ConfigError*>(&e)) throw;
        throw ConfigError(std::string("curve: ") + e.what());
    }
    for (const auto& c : out) {
        if (c.dim() != out.front().dim()) fail("family", "all members need the same dimension");
    }
    return out;
}

std::string render_svg(const std::vector<Eigen::Vector2d>& polyline) {
    Eigen::Vector2d lo = polyline.front(), hi = polyline.front();
    for (const auto& p : polyline) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double span = std::max((hi - lo).maxCoeff(), 1e-12);
    const double pad = 0.05 * span;
    const double size = 512.0;
    const double scale = size / (span + 2 * pad);
    auto map = [&](const Eigen::Vector2d& p) {
        // y grows downwards in SVG
        return Eigen::Vector2d((p.x() - lo.x() + pad) * scale, (hi.y() - p.y() + pad) * scale);
    };
    auto points = [&](const std::vector<Eigen::Vector2d>& pts) {
        std::ostringstream s;
        s << std::setprecision(6);
        for (const auto& p : pts) {
            const auto q = map(p);
            s << q.x() << ',' << q.y() << ' ';
        }
        return s.str();
    };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    try {
        const auto hull = hull_2d(polyline);
        out << "  <polygon points=\"" << points(hull.vertices) << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
    } catch (const DegenerateGeometry&) {
    }
    out << "  <polygon points=\"" << points(polyline) << "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\"/>\n";
    out << "</svg>\n";
    return out.str();
}

int cmd_evolve(const RunConfig& config_in, const EvolveOptions& options, std::ostream& log) {
    RunConfig config = config_in;
    if (options.seed) apply_seed(config, *options.seed);
    if (options.out) config.output_dir = *options.out;
    config.svg = config.svg || options.svg;
    config.dump_chordfield = config.dump_chordfield || options.dump_chordfield;

    const auto curves0 = initial_curves(config);
    const int dim = curves0.front().dim();
    const auto monitors = build_monitors(config, dim, options.no_topology_checks);
    const auto dir = config.output_dir;
    std::filesystem::create_directories(dir);

    if (curves0.size() == 1) {
        const Projection view = config.projection ? *config.projection : Projection::xy(dim);
        long recorded = 0;
        auto hook = [&](const FlowState& s) {
            if (recorded++ % config.snapshot_every != 0) return;
            const std::string stem = step_name(s.step_index);
            write_snapshot((dir / ("snap_" + stem + ".curve")).string(), s.curve.points(), s.t);
            if (config.svg) write_text(dir / ("snap_" + stem + ".svg"), render_svg(view.apply(s.curve)));
            if (config.dump_chordfield) write_chord_field(dir / ("chordfield_" + stem + ".csv"), s.curve);
        };
        const auto result = evolve(curves0.front(), config.flow, monitors.per_curve, hook);
        std::ofstream csv(dir / "metrics.csv");
        result.report.write_csv(csv);
        write_text(dir / "report.txt", report_text(result.report));
        log << "stopped: " << to_string(result.report.reason) << " at t = " << result.report.final_t << " after "
            << result.report.final_step << " steps; output in " << dir.string() << '\n';
        if (result.report.reason == StopReason::Error) return kCheckFailed;
        return topology_ok(result.report) ? kOk : kCheckFailed;
    }

    const auto results = evolve_family(curves0, config.flow, monitors.per_curve, monitors.family);
    int status = kOk;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto sub = dir / ("member" + std::to_string(k));
        std::filesystem::create_directories(sub);
        std::ofstream csv(sub / "metrics.csv");
        results[k].report.write_csv(csv);
        write_text(sub / "report.txt", report_text(results[k].report));
        const auto& s = results[k].state;
        write_snapshot((sub / ("snap_" + step_name(s.step_index) + ".curve")).string(), s.curve.points(), s.t);
        if (results[k].report.reason == StopReason::Error || !topology_ok(results[k].report)) status = kCheckFailed;
    }
    const auto& r0 = results.front().report;
    log << "family of " << results.size() << " stopped: " << to_string(r0.reason) << " at t = " << r0.final_t << "; output in "
        << dir.string() << '\n';
    return status;
}

SweepAxis parse_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--vary: expected key=v1,v2,... got '" + text + "'");
    SweepAxis axis;
    axis.key = text.substr(0, eq);
    std::stringstream rest(text.substr(eq + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            axis.values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--vary " + axis.key + ": '" + item + "' is not a number");
        }
    }
    return axis;
}

namespace {

void apply_point(RunConfig& cfg, const std::string& key, double v) {
    auto& spec = cfg.curve.spec;
    if (key == "samples") {
        if (!spec) fail("sweep.samples", "needs a generated curve");
        spec->samples = static_cast<std::size_t>(std::lround(v));
    } else if (key == "seed") {
        cfg.curve.explicit_seed = false;
        apply_seed(cfg, static_cast<std::uint64_t>(std::llround(v)));
    } else if (key.rfind("flow.", 0) == 0) {
        const std::string f = key.substr(5);
        auto& p = cfg.flow;
        if (f == "dt_safety") p.dt_safety = v;
        else if (f == "redistribution_every") p.redistribution_every = static_cast<int>(std::lround(v));
        else if (f == "stop_min_length") p.stop_min_length = v;
        else if (f == "stop_max_curvature") p.stop_max_curvature = v;
        else if (f == "stop_max_time") p.stop_max_time = v;
        else if (f == "kappa_floor") p.kappa_floor = v;
        else if (f == "record_every") p.record_every = static_cast<int>(std::lround(v));
        else fail("sweep." + key, "unknown flow field");
    } else if (key.rfind("curve.", 0) == 0) {
        if (!spec) fail("sweep." + key, "needs a generated curve");
        const std::string param = key.substr(6);
        const auto& table = curves::generators();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& g) { return g.kind == spec->kind; });
        if (it == table.end() || !it->defaults.contains(param)) fail("sweep." + key, "not a parameter of '" + spec->kind + "'");
        spec->params[param] = v;
    } else {
        fail("sweep." + key, "unknown sweep key");
    }
}

double mean_radius(const DiscreteCurve& c) {
    const Eigen::RowVectorXd center = c.points().colwise().mean();
    return (c.points().rowwise() - center).rowwise().norm().mean();
}

}  // namespace

SweepResult run_sweep(const RunConfig& base, const std::vector<SweepAxis>& grid, unsigned threads) {
    if (grid.empty()) throw ConfigError("sweep: empty grid");
    std::size_t total = 1;
    for (const auto& axis : grid) {
        if (axis.values.empty()) throw ConfigError("sweep." + axis.key + ": no values");
        total *= axis.values.size();
    }
    // Validate keys once up front.
    {
        RunConfig probe = base;
        for (const auto& axis : grid) apply_point(probe, axis.key, axis.values.front());
    }

    SweepResult result;
    result.cells.resize(total);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t rest = c;
        for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
            result.cells[c].point[it->key] = it->values[rest % it->values.size()];
            rest /= it->values.size();
        }
    }

    const bool avoidance = std::find(base.monitors.begin(), base.monitors.end(), "avoidance") != base.monitors.end();
    auto run_cell = [&](SweepCell& cell) {
        try {
            RunConfig cfg = base;
            for (const auto& [key, v] : cell.point) apply_point(cfg, key, v);
            cfg.flow.validate();
            const auto c0 = initial_curves(cfg).front();
            const auto monitors = build_monitors(cfg, c0.dim(), false);
            const auto r = evolve(c0, cfg.flow, monitors.per_curve);
            cell.report = r.report;
            cell.reason = r.report.reason;
            cell.final_t = r.state.t;
            cell.steps = r.state.step_index;
            cell.length = total_length(r.state.curve);
            cell.ok = r.report.reason != StopReason::Error;
            if (!cell.ok) cell.error = r.report.message;
            if (cfg.curve.spec && cfg.curve.spec->kind == "circle") {
                const auto it = cfg.curve.spec->params.find("r");
                const double r0 = it != cfg.curve.spec->params.end() ? it->second : 1.0;
                cell.radius_error = std::abs(mean_radius(r.state.curve) - std::sqrt(r0 * r0 - 2.0 * r.state.t));
            }
            if (avoidance) {
                bool ok = topology_ok(r.report);
                for (double v : r.report.series("min_f_D")) ok = ok && !(v <= 0.0);
                cell.avoidance_ok = ok;
            }
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    };

    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < total; c = next++) run_cell(result.cells[c]);
        });
    }
    for (auto& t : pool) t.join();

    // Observed orders along each axis.
    for (const auto& axis : grid) {
        if (axis.values.size() < 2) continue;
        std::map<std::map<std::string, double>, std::vector<const SweepCell*>> lines;
        for (const auto& cell : result.cells) {
            auto fixed = cell.point;
            fixed.erase(axis.key);
            lines[fixed].push_back(&cell);
        }
        for (auto& [fixed, cells] : lines) {
            std::sort(cells.begin(), cells.end(),
                      [&](const SweepCell* a, const SweepCell* b) { return a->point.at(axis.key) < b->point.at(axis.key); });
            for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
                const auto* a = cells[k];
                const auto* b = cells[k + 1];
                if (!a->radius_error || !b->radius_error || *a->radius_error <= 0.0 || *b->radius_error <= 0.0) continue;
                const double xa = a->point.at(axis.key), xb = b->point.at(axis.key);
                if (xa <= 0.0 || xb <= 0.0 || xa == xb) continue;
                ConvergenceRow row;
                row.key = axis.key;
                row.from = xa;
                row.to = xb;
                row.fixed = fixed;
                row.order = std::abs(std::log(*a->radius_error / *b->radius_error) / std::log(xa / xb));
                result.orders.push_back(row);
            }
        }
    }
    return result;
}

int cmd_sweep(const RunConfig& base_in, const std::vector<SweepAxis>& grid, const EvolveOptions& options, std::ostream& log) {
    RunConfig base = base_in;
    if (options.seed) apply_seed(base, *options.seed);
    if (options.out) base.output_dir = *options.out;
    if (options.no_topology_checks) {
        base.monitors.erase(std::remove(base.monitors.begin(), base.monitors.end(), "avoidance"), base.monitors.end());
    }
    const auto result = run_sweep(base, grid);
    std::filesystem::create_directories(base.output_dir);

    std::ofstream csv(base.output_dir / "sweep.csv");
    csv << std::setprecision(17) << "cell";
    for (const auto& axis : grid) csv << ',' << axis.key;
    csv << ",ok,reason,final_t,steps,length,radius_error,avoidance_ok,error\n";
    int status = kOk;
    std::size_t passed = 0;
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const auto& cell = result.cells[c];
        csv << c;
        for (const auto& axis : grid) csv << ',' << cell.point.at(axis.key);
        csv << ',' << (cell.ok ? 1 : 0) << ',' << to_string(cell.reason) << ',' << cell.final_t << ',' << cell.steps << ','
            << cell.length << ',';
        if (cell.radius_error) csv << *cell.radius_error;
        csv << ',';
        if (cell.avoidance_ok) csv << (*cell.avoidance_ok ? 1 : 0);
        std::string err = cell.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        csv << ',' << err << '\n';
        const auto sub = base.output_dir / ("cell_" + std::to_string(c));
        std::filesystem::create_directories(sub);
        std::ofstream metrics(sub / "metrics.csv");
        cell.report.write_csv(metrics);
        write_text(sub / "report.txt", cell.ok || !cell.report.rows.empty() ? report_text(cell.report) : "error: " + cell.error + "\n");
        const bool good = cell.ok && cell.avoidance_ok.value_or(true);
        if (good) ++passed;
        else status = kCheckFailed;
    }

    std::ofstream conv(base.output_dir / "convergence.csv");
    conv << std::setprecision(17) << "key,from,to,fixed,order\n";
    for (const auto& row : result.orders) {
        conv << row.key << ',' << std::setprecision(10) << row.from << ',' << row.to << ',' << std::setprecision(17);
        std::ostringstream fixed;
        for (const auto& [k, v] : row.fixed) fixed << (fixed.tellp() > 0 ? ";" : "") << k << '=' << v;
        conv << fixed.str() << ',' << row.order << '\n';
        log << "order in " << row.key << " (" << row.from << " -> " << row.to << (row.fixed.empty() ? "" : ", " + fixed.str())
            << "): " << row.order << '\n';
    }
    log << passed << "/" << result.cells.size() << " cells passed; output in " << base.output_dir.string() << '\n';
    return status;
}

void list_generators(std::ostream& out) {
    for (const auto& g : curves::generators()) {
        out << g.kind << "\n    " << g.description << '\n';
        for (const auto& [key, value] : g.defaults) out << "    " << key << " = " << value << '\n';
    }
}

}  // namespace csf::cli
