#include "wpcld/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "wpcld/errors.hpp"

namespace wpcld {

namespace {

std::ofstream open_output(const std::string& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

void append_u32_le(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f64_le(std::string& buf, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t read_u32_le(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

double read_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

// 17 significant digits: enough for exact double round trips.
void append_g17(std::string& buf, double v) {
    char tmp[32];
    std::snprintf(tmp, sizeof(tmp), "%.17g", v);
    buf += tmp;
}

}  // namespace

void write_csv(const FieldGrid& field, const std::string& path) {
    std::ofstream out = open_output(path, std::ios::out);
    std::string buf;
    buf.reserve(1 << 20);
    buf += "q0,p0,ld_fwd,ld_bwd,m_diag\n";
    for (std::size_t j = 0; j < field.spec.n_p; ++j) {
        for (std::size_t i = 0; i < field.spec.n_q; ++i) {
            const LDSample& s = field.at(j, i);
            append_g17(buf, field.spec.q_at(i));
            buf.push_back(',');
            append_g17(buf, field.spec.p_at(j));
            buf.push_back(',');
            append_g17(buf, s.ld_fwd);
            buf.push_back(',');
            append_g17(buf, s.ld_bwd);
            buf.push_back(',');
            append_g17(buf, s.m_diag);
            buf.push_back('\n');
            if (buf.size() > (1 << 20)) {
                out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
                buf.clear();
            }
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    finish_output(out, path);
}

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line) || line != "q0,p0,ld_fwd,ld_bwd,m_diag")
        throw FormatError("'" + path + "': missing or unexpected CSV header");

    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CsvRow row{};
        double* fields[5] = {&row.q0, &row.p0, &row.ld_fwd, &row.ld_bwd, &row.m_diag};
        const char* cursor = line.c_str();
        for (int f = 0; f < 5; ++f) {
            char* end = nullptr;
            *fields[f] = std::strtod(cursor, &end);
            if (end == cursor)
                throw FormatError("'" + path + "': malformed CSV field in line '" +
                                  line + "'");
            cursor = end;
            if (f < 4) {
                if (*cursor != ',')
                    throw FormatError("'" + path + "': expected ',' in line '" + line +
                                      "'");
                ++cursor;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void write_binary(const FieldGrid& field, const std::string& path) {
    std::ofstream out = open_output(path, std::ios::out | std::ios::binary);

    std::string buf;
    buf.reserve(FieldFileHeader::byte_size + field.samples.size() * 24);
    buf.append(FieldFileHeader::magic, 4);
    append_u32_le(buf, FieldFileHeader::version);
    append_u32_le(buf, static_cast<std::uint32_t>(field.spec.n_q));
    append_u32_le(buf, static_cast<std::uint32_t>(field.spec.n_p));
    append_f64_le(buf, field.spec.q_min);
    append_f64_le(buf, field.spec.q_max);
    append_f64_le(buf, field.spec.p_min);
    append_f64_le(buf, field.spec.p_max);
    append_f64_le(buf, field.horizon);
    append_u32_le(buf, FieldFileHeader::channel_count);

    for (const LDSample& s : field.samples) {
        append_f64_le(buf, s.ld_fwd);
        append_f64_le(buf, s.ld_bwd);
        append_f64_le(buf, s.m_diag);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    finish_output(out, path);
}

FieldGrid read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (data.size() < FieldFileHeader::byte_size)
        throw FormatError("'" + path + "': truncated header");

    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    if (std::memcmp(p, FieldFileHeader::magic, 4) != 0)
        throw FormatError("'" + path + "': bad magic '" +
                          std::string(data.data(), 4) + "', expected 'LDF1'");
    const std::uint32_t version = read_u32_le(p + 4);
    if (version != FieldFileHeader::version)
        throw FormatError("'" + path + "': unsupported version " +
                          std::to_string(version));

    FieldGrid field;
    field.spec.n_q = read_u32_le(p + 8);
    field.spec.n_p = read_u32_le(p + 12);
    field.spec.q_min = read_f64_le(p + 16);
    field.spec.q_max = read_f64_le(p + 24);
    field.spec.p_min = read_f64_le(p + 32);
    field.spec.p_max = read_f64_le(p + 40);
    field.horizon = read_f64_le(p + 48);
    const std::uint32_t channels = read_u32_le(p + 56);
    if (channels != FieldFileHeader::channel_count)
        throw FormatError("'" + path + "': unsupported channel count " +
                          std::to_string(channels));

    const std::size_t n_nodes = field.spec.n_q * field.spec.n_p;
    const std::size_t payload = n_nodes * FieldFileHeader::channel_count * 8;
    if (data.size() != FieldFileHeader::byte_size + payload)
        throw FormatError("'" + path + "': payload size mismatch, expected " +
                          std::to_string(FieldFileHeader::byte_size + payload) +
                          " bytes, got " + std::to_string(data.size()));

    field.samples.resize(n_nodes);
    const unsigned char* cursor = p + FieldFileHeader::byte_size;
    for (LDSample& s : field.samples) {
        s.ld_fwd = read_f64_le(cursor);
        s.ld_bwd = read_f64_le(cursor + 8);
        s.m_diag = read_f64_le(cursor + 16);
        cursor += 24;
    }
    return field;
}

Channel channel_from_name(const std::string& name) {
    if (name == "fwd_log10") return Channel::fwd_log10;
    if (name == "bwd_log10") return Channel::bwd_log10;
    if (name == "m") return Channel::m;
    throw ConfigError("unknown channel '" + name +
                      "' (expected fwd_log10, bwd_log10 or m)");
}

const char* channel_name(Channel channel) {
    switch (channel) {
        case Channel::fwd_log10: return "fwd_log10";
        case Channel::bwd_log10: return "bwd_log10";
        case Channel::m: return "m";
    }
    return "?";
}

void write_heatmap(const FieldGrid& field, Channel channel,
                   const std::string& path, double epsilon) {
    auto value_at = [&](std::size_t idx) {
        const LDSample& s = field.samples[idx];
        switch (channel) {
            case Channel::fwd_log10: return std::log10(std::max(s.ld_fwd, epsilon));
            case Channel::bwd_log10: return std::log10(std::max(s.ld_bwd, epsilon));
            case Channel::m: return s.m_diag;
        }
        return 0.0;
    };

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < field.samples.size(); ++idx) {
        const double v = value_at(idx);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool degenerate = !(hi > lo);
    if (degenerate)
        std::cerr << "warning: heatmap channel " << channel_name(channel)
                  << " has a degenerate value range, writing uniform mid-gray\n";

    std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
    std::string buf;
    buf.reserve(32 + 3 * field.samples.size());
    buf += "P6\n" + std::to_string(field.spec.n_q) + " " +
           std::to_string(field.spec.n_p) + "\n255\n";

    // top image row = largest p
    for (std::size_t j = field.spec.n_p; j-- > 0;) {
        for (std::size_t i = 0; i < field.spec.n_q; ++i) {
            unsigned char gray = 128;
            if (!degenerate) {
                const double t = (value_at(field.index(j, i)) - lo) / (hi - lo);
                gray = static_cast<unsigned char>(
                    std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
            }
            buf.push_back(static_cast<char>(gray));
            buf.push_back(static_cast<char>(gray));
            buf.push_back(static_cast<char>(gray));
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    finish_output(out, path);
}

}  // namespace wpcld
