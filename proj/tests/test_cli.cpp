#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wpcld/cli.hpp"
#include "wpcld/errors.hpp"
#include "wpcld/sensitivity.hpp"

using namespace wpcld;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("wpcld_cli_" + name);
}

struct TempFile {
    explicit TempFile(const std::string& name) : path(temp_path(name)) {}
    ~TempFile() { std::filesystem::remove(path); }
    std::filesystem::path path;
    std::string str() const { return path.string(); }
};

struct CaptureStdout {
    CaptureStdout() : old(std::cout.rdbuf(buffer.rdbuf())) {}
    ~CaptureStdout() { std::cout.rdbuf(old); }
    std::ostringstream buffer;
    std::streambuf* old;
};

}  // namespace

TEST_CASE("parse_config: defaults reproduce the reference sweep") {
    const RunConfig config = parse_config({"--out-csv", "field.csv"});
    CHECK(config.grid.n_q == 1000);
    CHECK(config.grid.n_p == 1000);
    CHECK(config.grid.q_min == -2.0);
    CHECK(config.grid.q_max == 2.0);
    CHECK(config.grid.p_min == -2.0);
    CHECK(config.grid.p_max == 2.0);
    CHECK(config.horizon == 5.0);
    CHECK(config.params.mass == 1.0);
    CHECK(config.params.omega == 1.0);
    CHECK(config.params.hbar == 1.0);
    CHECK(config.params.sigma0 == 1.0);
    CHECK(config.quad.n_subintervals == 256);
    CHECK(config.epsilon == 1e-30);
    CHECK(config.workers == 0);
    CHECK(config.scale.q_scale == 1.0);
    CHECK(config.scale.p_scale == 1.0);
    REQUIRE(config.outputs.size() == 1);
    CHECK(config.outputs[0].format == OutputSpec::Format::csv);
    CHECK(config.outputs[0].path == "field.csv");
}

TEST_CASE("parse_config: single overrides keep the other defaults") {
    const RunConfig config =
        parse_config({"--grid", "100x100", "--out-bin", "f.bin"});
    CHECK(config.grid.n_q == 100);
    CHECK(config.grid.n_p == 100);
    CHECK(config.horizon == 5.0);
    CHECK(config.grid.q_max == 2.0);

    const RunConfig rect = parse_config({"--grid", "30x17", "--q-range", "-1",
                                         "3", "--p-range", "0.5", "2",
                                         "--out-bin", "f.bin"});
    CHECK(rect.grid.n_q == 30);
    CHECK(rect.grid.n_p == 17);
    CHECK(rect.grid.q_min == -1.0);
    CHECK(rect.grid.q_max == 3.0);
    CHECK(rect.grid.p_min == 0.5);
    CHECK(rect.grid.p_max == 2.0);
}

TEST_CASE("parse_config: derived momentum scale follows the parameters") {
    const RunConfig config = parse_config(
        {"--mass", "2", "--omega", "3", "--verify-bound", "1", "1"});
    CHECK(config.scale.q_scale == 1.0);
    CHECK(config.scale.p_scale == 6.0);
}

TEST_CASE("parse_config: usage errors name the offending token") {
    // inconsistent bounds
    CHECK_THROWS_AS(
        parse_config({"--q-range", "1", "-1", "--out-csv", "x"}), ConfigError);

    try {
        parse_config({"--frobnicate", "--out-csv", "x"});
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("--frobnicate") != std::string::npos);
    }

    try {
        parse_config({"--horizon", "fast", "--out-csv", "x"});
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("fast") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config({"--q-range", "1"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"--grid", "100", "--out-csv", "x"}),
                    ConfigError);
    CHECK_THROWS_AS(parse_config({"--out-ppm", "rainbow", "x.ppm"}), ConfigError);
    CHECK_THROWS_AS(parse_config({"--quad-n", "7", "--out-csv", "x"}),
                    ConfigError);
    CHECK_THROWS_AS(parse_config({"--verify-bound", "0", "0"}), ConfigError);
    // nothing to do
    CHECK_THROWS_AS(parse_config({}), ConfigError);
}

TEST_CASE("parse_config: repeatable outputs and bound points") {
    const RunConfig config = parse_config(
        {"--out-ppm", "m", "m.ppm", "--out-ppm", "fwd_log10", "f.ppm",
         "--verify-bound", "1", "0.5", "--verify-bound", "-1", "-0.5"});
    REQUIRE(config.outputs.size() == 2);
    CHECK(config.outputs[0].channel == Channel::m);
    CHECK(config.outputs[1].channel == Channel::fwd_log10);
    CHECK(config.outputs[1].path == "f.ppm");
    REQUIRE(config.verify_bound.size() == 2);
    CHECK(config.verify_bound[0][0] == 1.0);
    CHECK(config.verify_bound[0][1] == 0.5);
    CHECK(config.verify_bound[1][0] == -1.0);
}

TEST_CASE("parse_config: config file with flag overrides") {
    TempFile file("run.conf");
    {
        std::ofstream out(file.path);
        out << "# reference setup, small\n"
            << "grid=10x12\n"
            << "horizon=2.5\n"
            << "q_min=-1  # asymmetric on purpose\n"
            << "q_max=1.5\n"
            << "out_csv=from_file.csv\n"
            << "\n"
            << "verify_bound=0.5,0.25\n";
    }

    const RunConfig from_file = parse_config({"--config", file.str()});
    CHECK(from_file.grid.n_q == 10);
    CHECK(from_file.grid.n_p == 12);
    CHECK(from_file.horizon == 2.5);
    CHECK(from_file.grid.q_min == -1.0);
    CHECK(from_file.grid.q_max == 1.5);
    REQUIRE(from_file.outputs.size() == 1);
    CHECK(from_file.outputs[0].path == "from_file.csv");
    REQUIRE(from_file.verify_bound.size() == 1);
    CHECK(from_file.verify_bound[0][1] == 0.25);

    // flags win over the file regardless of position
    const RunConfig overridden =
        parse_config({"--horizon", "4", "--config", file.str()});
    CHECK(overridden.horizon == 4.0);
    CHECK(overridden.grid.n_q == 10);

    CHECK_THROWS_AS(parse_config({"--config", file.str(), "--config", file.str()}),
                    ConfigError);
}

TEST_CASE("parse_config: malformed config files") {
    TempFile file("bad.conf");
    {
        std::ofstream out(file.path);
        out << "grid=8x8\nno_such_key=3\n";
    }
    try {
        parse_config({"--config", file.str()});
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("no_such_key") != std::string::npos);
    }

    {
        std::ofstream out(file.path);
        out << "just a line without equals\n";
    }
    try {
        parse_config({"--config", file.str()});
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("line 1") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config({"--config", temp_path("missing.conf").string()}),
                    ConfigError);
}

TEST_CASE("run: writes outputs, prints summary, bound reports hold") {
    TempFile csv("run.csv");
    TempFile bin("run.bin");
    TempFile ppm("run.ppm");

    const RunConfig config = parse_config(
        {"--grid", "24x24", "--horizon", "2", "--quad-n", "64",
         "--out-csv", csv.str(), "--out-bin", bin.str(),
         "--out-ppm", "m", ppm.str(), "--verify-bound", "1", "1",
         "--workers", "2"});

    std::string summary;
    {
        CaptureStdout capture;
        CHECK(run(config) == 0);
        summary = capture.buffer.str();
    }

    CHECK(std::filesystem::exists(csv.path));
    CHECK(std::filesystem::exists(bin.path));
    CHECK(std::filesystem::exists(ppm.path));

    CHECK(summary.find("n_q=24") != std::string::npos);
    CHECK(summary.find("ld_fwd_max=") != std::string::npos);
    CHECK(summary.find("m_median=") != std::string::npos);
    CHECK(summary.find("ridge_count=") != std::string::npos);
    CHECK(summary.find("wall_seconds=") != std::string::npos);
    CHECK(summary.find("outputs_written=3") != std::string::npos);
    CHECK(summary.find("bound_report q0=1 p0=1") != std::string::npos);
    CHECK(summary.find("norm=spectral") != std::string::npos);

    const auto ratio_pos = summary.find("ratio=");
    REQUIRE(ratio_pos != std::string::npos);
    const double ratio = std::strtod(summary.c_str() + ratio_pos + 6, nullptr);
    CHECK(ratio <= 1.0 + 1e-6);
    CHECK(ratio > 0.0);

    // the binary output must match an independent in-process sweep exactly
    const FieldGrid back = read_binary(bin.str());
    const FieldGrid direct =
        compute_field(config.grid, config.horizon, config.params, config.scale,
                      config.quad, config.epsilon, 1);
    REQUIRE(back.samples.size() == direct.samples.size());
    CHECK(std::memcmp(back.samples.data(), direct.samples.data(),
                      direct.samples.size() * sizeof(LDSample)) == 0);
}

TEST_CASE("run: bound reports only, no field outputs") {
    const RunConfig config = parse_config({"--verify-bound", "0.5", "-0.25"});
    std::string output;
    {
        CaptureStdout capture;
        CHECK(run(config) == 0);
        output = capture.buffer.str();
    }
    CHECK(output.find("bound_report") != std::string::npos);
    CHECK(output.find("n_q=") == std::string::npos);
}
