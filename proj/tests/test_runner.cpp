#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qkd/runner.hpp"

using namespace qkd::run;

TEST_SUITE_BEGIN("runner");

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallConfig =
    "model = general_epsilon\n"
    "epsilon = 0\n"
    "phase.kind = uniform\n"
    "mu = 0.5\n"
    "nu = 0.1\n"
    "optimize = false\n"
    "lp.restarts = 6\n"
    "distance.start = 0\n"
    "distance.stop = 20\n"
    "distance.step = 10\n"
    "seed = 7\n";

}  // namespace

TEST_CASE("config parsing and diagnostics") {
    RunConfig c = RunConfig::from_text(kSmallConfig, "test");
    CHECK(c.scenario.intensities.mu == 0.5);
    CHECK(c.distances().size() == 3);
    CHECK_THROWS_WITH_AS(RunConfig::from_text("bogus line\n", "f"),
                         doctest::Contains("f:1"), ConfigError);
    CHECK_THROWS_WITH_AS(RunConfig::from_text("mu = abc\n", "f"),
                         doctest::Contains("invalid number"), ConfigError);
    CHECK_THROWS_WITH_AS(RunConfig::from_text("nonsense.key = 1\n", "f"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_text("distance.step = -1\n", "f"), ConfigError);
}

TEST_CASE("empty grid writes only the header") {
    RunConfig c = RunConfig::from_text(kSmallConfig, "test");
    c.dist_start = 10.0;
    c.dist_stop = 0.0;
    int rc = run_sweep(c, "/tmp/qkdrun_empty", false);
    CHECK(rc == 0);
    std::string csv = slurp("/tmp/qkdrun_empty/rates.csv");
    CHECK(csv.find("distance_km,mu,nu,Q_muZ") != std::string::npos);
    CHECK(csv.find("\n0,") == std::string::npos);
}

TEST_CASE("runs are deterministic and emit parseable CSV") {
    RunConfig c = RunConfig::from_text(kSmallConfig, "test");
    std::vector<qkd::engine::KeyRatePoint> pts;
    int rc = run_sweep(c, "/tmp/qkdrun_a", true, &pts);
    CHECK(rc == 0);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].rate > 0.0);
    int rc2 = run_sweep(c, "/tmp/qkdrun_b", true);
    CHECK(rc2 == 0);
    CHECK(slurp("/tmp/qkdrun_a/rates.csv") == slurp("/tmp/qkdrun_b/rates.csv"));
    std::string svg = slurp("/tmp/qkdrun_a/rates.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("compare requires a shared grid and reports unit ratio on identity") {
    RunConfig a = RunConfig::from_text(kSmallConfig, "a");
    RunConfig b = a;
    b.dist_step = 20.0;
    CHECK(run_compare(a, b, "/tmp/qkdrun_cmp") == 2);
    b = a;
    CHECK(run_compare(a, b, "/tmp/qkdrun_cmp") == 0);
    std::string csv = slurp("/tmp/qkdrun_cmp/compare.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.substr(line.rfind(',') + 1) == "1");
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_SUITE_END();
