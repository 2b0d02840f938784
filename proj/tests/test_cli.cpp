#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csf/cli.hpp"
#include "csf/curve.hpp"
#include "csf/verify.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

using namespace csf;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("csf_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

// Message must start with the offending field.
void expect_error(const std::string& text, const std::string& field) {
    try {
        cli::parse_config(text);
        FAIL("accepted: " << text);
    } catch (const cli::ConfigError& e) {
        CHECK_MESSAGE(std::string(e.what()).rfind(field + ":", 0) == 0, e.what());
    }
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = cli::parse_config(R"({"curve": {"kind": "ellipse", "params": {"a": 3}, "samples": 64},
                                           "flow": {"dt_safety": 0.3, "record_every": 5},
                                           "monitors": ["space_convexity"],
                                           "output": {"dir": "x", "svg": true, "snapshot_every": 2}})");
    REQUIRE(cfg.curve.spec);
    CHECK(cfg.curve.spec->kind == "ellipse");
    CHECK(cfg.curve.spec->params.at("a") == 3.0);
    CHECK(cfg.curve.spec->samples == 64);
    CHECK(cfg.flow.dt_safety == 0.3);
    CHECK(cfg.flow.record_every == 5);
    CHECK(cfg.flow.stop_max_time == FlowParams{}.stop_max_time);
    CHECK(cfg.monitors == std::vector<std::string>{"space_convexity"});
    CHECK(cfg.output_dir == "x");
    CHECK(cfg.svg);
    CHECK_FALSE(cfg.dump_chordfield);
    CHECK(cfg.snapshot_every == 2);

    const auto snap = cli::parse_config(R"({"curve": {"snapshot": "a.curve"}})", "/data");
    CHECK(*snap.curve.snapshot == fs::path("/data/a.curve"));
}

TEST_CASE("seeds") {
    auto cfg = cli::parse_config(R"({"seed": 7, "curve": {"kind": "random_spherical"},
                                     "family": [{"kind": "random_spherical"}, {"kind": "random_spherical", "seed": 99}]})");
    CHECK(cfg.curve.spec->seed == 7);
    CHECK(cfg.family[0].spec->seed == 8);
    CHECK(cfg.family[1].spec->seed == 99);
    cli::apply_seed(cfg, 20);
    CHECK(cfg.seed == 20);
    CHECK(cfg.curve.spec->seed == 20);
    CHECK(cfg.family[0].spec->seed == 21);
    CHECK(cfg.family[1].spec->seed == 99);
}

TEST_CASE("config errors name the field") {
    expect_error("not json", "config");
    expect_error(R"({})", "curve");
    expect_error(R"({"curve": {"kind": "circle"}, "bogus": 1})", "bogus");
    expect_error(R"({"curve": {"kind": "spiral"}})", "curve.kind");
    expect_error(R"({"curve": {"kind": "circle", "params": {"q": 1}}})", "curve.params.q");
    expect_error(R"({"curve": {"kind": "circle", "params": {"r": "big"}}})", "curve.params.r");
    expect_error(R"({"curve": {"kind": "circle", "samples": 4}})", "curve.samples");
    expect_error(R"({"curve": {"kind": "circle", "samples": 12.5}})", "curve.samples");
    expect_error(R"({"curve": {"kind": "circle", "snapshot": "a"}})", "curve");
    expect_error(R"({"curve": {"kind": "circle"}, "flow": {"dt_safety": 0.9}})", "flow.dt_safety");
    expect_error(R"({"curve": {"kind": "circle"}, "flow": {"dt": 0.1}})", "flow.dt");
    expect_error(R"({"curve": {"kind": "circle"}, "flow": {"stop_max_time": -1}})", "flow.stop_max_time");
    expect_error(R"({"curve": {"kind": "circle"}, "monitors": ["avoidance", "nope"]})", "monitors[1]");
    expect_error(R"({"curve": {"kind": "circle"}, "monitors": ["pair_distance"]})", "monitors");
    expect_error(R"({"curve": {"kind": "circle"}, "projection": {"e1": [1, 0, 0]}})", "projection");
    expect_error(R"({"curve": {"kind": "circle"}, "projection": {"e1": [1, 0, 0], "e2": [1, 0, 0]}})", "projection");
    expect_error(R"({"curve": {"kind": "circle"}, "output": {"snapshot_every": 0}})", "output.snapshot_every");
    expect_error(R"({"curve": {"kind": "circle"}, "family": [{"kind": "nope"}]})", "family[0].kind");
    expect_error(R"({"curve": {"kind": "circle"}, "seed": -3})", "seed");
    CHECK_THROWS_AS(cli::load_config("/nonexistent/run.json"), cli::ConfigError);
}

TEST_CASE("evolve writes metrics, snapshots and report") {
    const auto dir = scratch("circle");
    auto cfg = cli::parse_config(R"({"curve": {"kind": "circle", "samples": 128},
                                     "flow": {"stop_max_time": 0.3, "record_every": 40},
                                     "monitors": ["projected_convexity"],
                                     "output": {"snapshot_every": 2}})");
    cli::EvolveOptions opts;
    opts.out = dir;
    opts.svg = true;
    std::ostringstream log;
    REQUIRE(cli::cmd_evolve(cfg, opts, log) == cli::kOk);

    std::ifstream csv(dir / "metrics.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "step,t,length,max_kappa,min_edge,phi_max,proj_regular_min");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        const auto f = split(line);
        const double t = std::stod(f[1]);
        CHECK(std::abs(std::stod(f[2]) / (2 * kPi * std::sqrt(1 - 2 * t)) - 1) < 5e-3);
        ++rows;
    }
    CHECK(rows > 5);

    std::size_t snaps = 0, svgs = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".curve") {
            ++snaps;
            CHECK(read_snapshot(e.path().string()).points.rows() == 128);
        }
        if (e.path().extension() == ".svg") {
            ++svgs;
            CHECK(slurp(e.path()).find("<polygon") != std::string::npos);
        }
    }
    CHECK(snaps == (rows + 1) / 2);
    CHECK(svgs == snaps);

    const auto report = slurp(dir / "report.txt");
    CHECK(report.find("stop_reason: max_time") != std::string::npos);
    CHECK(report.find("final_t: 0.3") != std::string::npos);
    CHECK(report.find("phi_max: min") != std::string::npos);
}

TEST_CASE("evolve is byte-reproducible and honours --seed") {
    const std::string text = R"({"seed": 3, "curve": {"kind": "random_spherical", "samples": 96},
                                 "flow": {"stop_max_time": 0.02}, "monitors": ["avoidance", "sphericity"]})";
    const auto cfg = cli::parse_config(text);
    std::ostringstream log;
    cli::EvolveOptions a, b, c;
    a.out = scratch("rep_a");
    b.out = scratch("rep_b");
    c.out = scratch("rep_c");
    c.seed = 4;
    REQUIRE(cli::cmd_evolve(cfg, a, log) == cli::kOk);
    REQUIRE(cli::cmd_evolve(cfg, b, log) == cli::kOk);
    REQUIRE(cli::cmd_evolve(cfg, c, log) == cli::kOk);
    CHECK(slurp(*a.out / "metrics.csv") == slurp(*b.out / "metrics.csv"));
    CHECK(slurp(*a.out / "metrics.csv") != slurp(*c.out / "metrics.csv"));
    CHECK(slurp(*a.out / "metrics.csv").find("min_f_D") != std::string::npos);
}

TEST_CASE("no topology checks drops the avoidance columns") {
    const auto cfg = cli::parse_config(R"({"curve": {"kind": "baseball", "samples": 96},
                                           "flow": {"stop_max_time": 0.01}, "monitors": ["avoidance", "sphericity"]})");
    cli::EvolveOptions opts;
    opts.out = scratch("notopo");
    opts.no_topology_checks = true;
    std::ostringstream log;
    REQUIRE(cli::cmd_evolve(cfg, opts, log) == cli::kOk);
    std::ifstream csv(*opts.out / "metrics.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "step,t,length,max_kappa,min_edge,sphere_rms,sphere_radius");
}

TEST_CASE("chord field dumps and families") {
    auto cfg = cli::parse_config(R"({"curve": {"kind": "latitude", "params": {"beta": 0.7}, "samples": 32},
                                     "family": [{"kind": "latitude", "params": {"beta": 2.2}, "samples": 48}],
                                     "flow": {"stop_max_time": 0.01},
                                     "monitors": ["pair_distance", "mutual_sphere"]})");
    cli::EvolveOptions opts;
    opts.out = scratch("family");
    std::ostringstream log;
    REQUIRE(cli::cmd_evolve(cfg, opts, log) == cli::kOk);
    for (int k = 0; k < 2; ++k) {
        const auto sub = *opts.out / ("member" + std::to_string(k));
        CHECK(fs::exists(sub / "report.txt"));
        CHECK(slurp(sub / "metrics.csv").find("pair_min_dist,mutual_sphere_dev") != std::string::npos);
    }

    auto single = cli::parse_config(R"({"curve": {"kind": "circle", "samples": 16}, "flow": {"stop_max_time": 1e-3}})");
    opts.out = scratch("chords");
    opts.dump_chordfield = true;
    REQUIRE(cli::cmd_evolve(single, opts, log) == cli::kOk);
    const auto first = slurp(*opts.out / "chordfield_00000000.csv");
    std::stringstream ss(first);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(ss, line)) {
        CHECK(split(line).size() == 16);
        if (lines == 0) CHECK(std::stod(split(line)[8]) == doctest::Approx(4.0));  // antipode of the unit circle
        ++lines;
    }
    CHECK(lines == 16);
}

TEST_CASE("sweep") {
    auto cfg = cli::parse_config(R"({"curve": {"kind": "circle", "samples": 64}, "flow": {"stop_max_time": 0.2}})");
    CHECK_THROWS_AS(cli::run_sweep(cfg, {}), cli::ConfigError);
    CHECK_THROWS_AS(cli::run_sweep(cfg, {{"flow.nope", {1}}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::run_sweep(cfg, {{"curve.a", {1}}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::run_sweep(cfg, {{"samples", {}}}), cli::ConfigError);

    const auto r = cli::run_sweep(cfg, {{"samples", {64, 128}}, {"curve.r", {1.0, 2.0}}}, 3);
    REQUIRE(r.cells.size() == 4);
    for (const auto& c : r.cells) {
        CHECK(c.ok);
        REQUIRE(c.radius_error);
        // time error of forward Euler on the exact spatial stencil
        CHECK(*c.radius_error < 1e-2);
    }
    // explicit Euler on r' = -1/r: error order 2 in N at fixed dt_safety
    std::size_t in_n = 0;
    for (const auto& row : r.orders) {
        if (row.key != "samples") continue;
        ++in_n;
        CHECK(row.order == doctest::Approx(2.0).epsilon(0.1));
    }
    CHECK(in_n == 2);
    CHECK(r.orders.size() == 4);

    // a bad cell is recorded, the sweep still completes, exit 1
    cli::EvolveOptions opts;
    opts.out = scratch("sweep");
    std::ostringstream log;
    CHECK(cli::cmd_sweep(cfg, {{"samples", {4, 64}}}, opts, log) == cli::kCheckFailed);
    const auto table = slurp(*opts.out / "sweep.csv");
    CHECK(table.rfind("cell,samples,ok,reason", 0) == 0);
    CHECK(table.find("\n0,4,0,") != std::string::npos);
    CHECK(table.find("\n1,64,1,") != std::string::npos);
    CHECK(fs::exists(*opts.out / "cell_1" / "metrics.csv"));
    CHECK(fs::exists(*opts.out / "convergence.csv"));

    CHECK(cli::parse_axis("samples=1,2,3").values == std::vector<double>{1, 2, 3});
    CHECK_THROWS_AS(cli::parse_axis("samples"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_axis("samples=1,x"), cli::ConfigError);
}

TEST_CASE("svg and generator listing") {
    const std::vector<Eigen::Vector2d> square = {{0, 0}, {1, 0}, {0.5, 0.2}, {1, 1}, {0, 1}};
    const auto svg = cli::render_svg(square);
    CHECK(svg.rfind("<svg", 0) == 0);
    // polyline plus hull outline
    std::size_t count = 0;
    for (auto at = svg.find("<polygon"); at != std::string::npos; at = svg.find("<polygon", at + 1)) ++count;
    CHECK(count == 2);

    std::ostringstream out;
    cli::list_generators(out);
    for (const auto& g : curves::generators()) CHECK(out.str().find(g.kind + "\n") != std::string::npos);
}

TEST_CASE("verify plumbing") {
    CHECK_THROWS_AS(verify::run_suite("nope"), std::invalid_argument);
    CHECK(verify::suite_names().size() == 10);
    verify::Check c{"x", true, 1.5e-4, "<", 5e-3, "note"};
    CHECK(verify::format(c) == "[PASS] x: measured 0.00015 (< 0.005) note");
    c.passed = false;
    std::ostringstream out;
    CHECK_FALSE(verify::report({c}, out));
    CHECK(out.str().rfind("[FAIL] x", 0) == 0);
    const auto frenet = verify::run_suite("frenet");
    std::ostringstream sink;
    CHECK(verify::report(frenet, sink));
}
