#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wpcld/field_io.hpp"

using namespace wpcld;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("wpcld_test_" + name);
}

struct TempFile {
    explicit TempFile(const std::string& name) : path(temp_path(name)) {}
    ~TempFile() { std::filesystem::remove(path); }
    std::filesystem::path path;
    std::string str() const { return path.string(); }
};

FieldGrid sample_field() {
    FieldGrid field;
    field.spec = GridSpec{-1.0, 1.0, 0.0, 3.0, 2, 3};
    field.horizon = 2.5;
    // deliberately awkward doubles to exercise the 17-digit round trip
    field.samples = {
        {0.1, 1.0 / 3.0, -0.0},
        {1e-300, 6.02214076e23, 60.0},
        {2.0, 3.0, -4.5},
        {0.0, 5e-324, 1.2345678901234567},
        {9.9, 0.30000000000000004, -60.0},
        {7.0, 8.0, 9.0},
    };
    return field;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("write_csv: header, row count, row-major order") {
    const FieldGrid field = sample_field();
    TempFile file("field.csv");
    write_csv(field, file.str());

    std::ifstream in(file.path);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 7);  // header + 2*3 nodes
    CHECK(lines[0] == "q0,p0,ld_fwd,ld_bwd,m_diag");
    // first data row is (q_min, p_min)
    CHECK(lines[1].rfind("-1,0,", 0) == 0);
    // q runs fastest
    CHECK(lines[2].rfind("1,0,", 0) == 0);
}

TEST_CASE("write_csv / read_csv: exact round trip") {
    const FieldGrid field = sample_field();
    TempFile file("roundtrip.csv");
    write_csv(field, file.str());
    const std::vector<CsvRow> rows = read_csv(file.str());
    REQUIRE(rows.size() == field.samples.size());

    std::size_t idx = 0;
    for (std::size_t j = 0; j < field.spec.n_p; ++j) {
        for (std::size_t i = 0; i < field.spec.n_q; ++i, ++idx) {
            CHECK(rows[idx].q0 == field.spec.q_at(i));
            CHECK(rows[idx].p0 == field.spec.p_at(j));
            CHECK(rows[idx].ld_fwd == field.samples[idx].ld_fwd);
            CHECK(rows[idx].ld_bwd == field.samples[idx].ld_bwd);
            CHECK(rows[idx].m_diag == field.samples[idx].m_diag);
        }
    }
}

TEST_CASE("write_binary: header size and payload arithmetic") {
    FieldGrid field;
    field.spec = GridSpec{-1.0, 1.0, -1.0, 1.0, 2, 2};
    field.horizon = 1.0;
    field.samples = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {10, 11, 12}};

    TempFile file("field.bin");
    write_binary(field, file.str());
    CHECK(std::filesystem::file_size(file.path) ==
          FieldFileHeader::byte_size + 2 * 2 * 3 * 8);

    const std::string bytes = slurp(file.path);
    CHECK(bytes.substr(0, 4) == "LDF1");
    // version = 1 as a little-endian u32
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 0);
    CHECK(bytes[6] == 0);
    CHECK(bytes[7] == 0);
}

TEST_CASE("write_binary / read_binary: bit-identical round trip") {
    const FieldGrid field = sample_field();
    TempFile file("roundtrip.bin");
    write_binary(field, file.str());
    const FieldGrid back = read_binary(file.str());

    CHECK(back.spec.n_q == field.spec.n_q);
    CHECK(back.spec.n_p == field.spec.n_p);
    CHECK(back.spec.q_min == field.spec.q_min);
    CHECK(back.spec.q_max == field.spec.q_max);
    CHECK(back.spec.p_min == field.spec.p_min);
    CHECK(back.spec.p_max == field.spec.p_max);
    CHECK(back.horizon == field.horizon);
    REQUIRE(back.samples.size() == field.samples.size());
    CHECK(std::memcmp(back.samples.data(), field.samples.data(),
                      field.samples.size() * sizeof(LDSample)) == 0);
}

TEST_CASE("read_binary: corrupt magic and truncation are format errors") {
    const FieldGrid field = sample_field();
    TempFile file("corrupt.bin");
    write_binary(field, file.str());

    std::string bytes = slurp(file.path);
    bytes[0] = 'X';
    std::ofstream(file.path, std::ios::binary) << bytes;
    try {
        read_binary(file.str());
        FAIL("expected FormatError");
    } catch (const FormatError& err) {
        CHECK(std::string(err.what()).find("magic") != std::string::npos);
        CHECK(std::string(err.what()).find("LDF1") != std::string::npos);
    }

    write_binary(field, file.str());
    bytes = slurp(file.path);
    bytes.resize(bytes.size() - 8);
    std::ofstream(file.path, std::ios::binary) << bytes;
    CHECK_THROWS_AS(read_binary(file.str()), FormatError);

    CHECK_THROWS_AS(read_binary(temp_path("does_not_exist.bin").string()), IoError);
}

TEST_CASE("write_heatmap: exact pixel mapping, p increases upward") {
    FieldGrid field;
    field.spec = GridSpec{0.0, 1.0, 0.0, 1.0, 2, 2};
    field.horizon = 1.0;
    field.samples = {
        {1, 1, 0.0}, {1, 1, 1.0},  // p row 0
        {1, 1, 2.0}, {1, 1, 3.0},  // p row 1
    };
    TempFile file("map.ppm");
    write_heatmap(field, Channel::m, file.str());

    const std::string bytes = slurp(file.path);
    const std::string header = "P6\n2 2\n255\n";
    REQUIRE(bytes.size() == header.size() + 12);
    CHECK(bytes.substr(0, header.size()) == header);

    const auto* px = reinterpret_cast<const unsigned char*>(bytes.data()) +
                     header.size();
    // top row is p row 1: m = 2 -> 170, m = 3 -> 255
    CHECK(px[0] == 170);
    CHECK(px[3] == 255);
    // bottom row is p row 0: m = 0 -> 0, m = 1 -> 85
    CHECK(px[6] == 0);
    CHECK(px[9] == 85);
    for (int i = 0; i < 12; i += 3) {
        CHECK(px[i] == px[i + 1]);  // grayscale triplets
        CHECK(px[i] == px[i + 2]);
    }
}

TEST_CASE("write_heatmap: fwd channel renders log10 with clamp") {
    FieldGrid field;
    field.spec = GridSpec{0.0, 1.0, 0.0, 1.0, 2, 2};
    field.horizon = 1.0;
    field.samples = {
        {0.0, 1, 0}, {1e-3, 1, 0},  // log10 -> -30 (clamped), -3
        {1.0, 1, 0}, {1e3, 1, 0},   //           0, 3
    };
    TempFile file("fwd.ppm");
    write_heatmap(field, Channel::fwd_log10, file.str());

    const std::string bytes = slurp(file.path);
    const auto* px = reinterpret_cast<const unsigned char*>(bytes.data()) +
                     std::string("P6\n2 2\n255\n").size();
    // range [-30, 3]: top row (p row 1) holds 0 -> 232, 3 -> 255
    CHECK(px[0] == 232);
    CHECK(px[3] == 255);
    // bottom row: -30 -> 0, -3 -> 209
    CHECK(px[6] == 0);
    CHECK(px[9] == 209);
}

TEST_CASE("write_heatmap: degenerate range yields uniform mid-gray") {
    FieldGrid field;
    field.spec = GridSpec{0.0, 1.0, 0.0, 1.0, 3, 2};
    field.horizon = 1.0;
    field.samples.assign(6, {1.0, 1.0, 7.5});
    TempFile file("flat.ppm");
    write_heatmap(field, Channel::m, file.str());

    const std::string bytes = slurp(file.path);
    const std::string header = "P6\n3 2\n255\n";
    REQUIRE(bytes.size() == header.size() + 18);
    for (std::size_t i = header.size(); i < bytes.size(); ++i)
        CHECK(static_cast<unsigned char>(bytes[i]) == 128);
}

TEST_CASE("channel_from_name: names and errors") {
    CHECK(channel_from_name("fwd_log10") == Channel::fwd_log10);
    CHECK(channel_from_name("bwd_log10") == Channel::bwd_log10);
    CHECK(channel_from_name("m") == Channel::m);
    CHECK_THROWS_AS(channel_from_name("rainbow"), ConfigError);
    CHECK(std::string(channel_name(Channel::bwd_log10)) == "bwd_log10");
}

TEST_CASE("write_csv: unwritable path raises IoError") {
    const FieldGrid field = sample_field();
    CHECK_THROWS_AS(write_csv(field, "/nonexistent_dir_zzz/field.csv"), IoError);
    CHECK_THROWS_AS(write_binary(field, "/nonexistent_dir_zzz/field.bin"), IoError);
}
