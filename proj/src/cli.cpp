#include "wpcld/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "wpcld/errors.hpp"
#include "wpcld/sensitivity.hpp"

namespace wpcld {

namespace {

double parse_double(const std::string& token) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ConfigError("malformed number '" + token + "'");
    return value;
}

std::size_t parse_count(const std::string& token) {
    std::size_t value = 0;
    const char* first = token.data();
    const char* last = first + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ConfigError("malformed count '" + token + "'");
    return value;
}

void parse_grid_token(const std::string& token, GridSpec& grid) {
    const auto x = token.find('x');
    if (x == std::string::npos || x == 0 || x + 1 == token.size())
        throw ConfigError("malformed grid '" + token + "' (expected NxM)");
    grid.n_q = parse_count(token.substr(0, x));
    grid.n_p = parse_count(token.substr(x + 1));
}

void parse_verify_token(const std::string& token, std::vector<PrepPoint>& points) {
    const auto comma = token.find(',');
    if (comma == std::string::npos)
        throw ConfigError("malformed preparation point '" + token +
                          "' (expected q0,p0)");
    points.emplace_back(parse_double(token.substr(0, comma)),
                        parse_double(token.substr(comma + 1)));
}

void parse_ppm_token(const std::string& token, std::vector<OutputSpec>& outputs) {
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon + 1 == token.size())
        throw ConfigError("malformed ppm output '" + token +
                          "' (expected CHANNEL:PATH)");
    outputs.push_back({OutputSpec::Format::ppm, token.substr(colon + 1),
                       channel_from_name(token.substr(0, colon))});
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

void apply_file_entry(RunConfig& config, const std::string& key,
                      const std::string& value) {
    if (key == "grid") parse_grid_token(value, config.grid);
    else if (key == "q_min") config.grid.q_min = parse_double(value);
    else if (key == "q_max") config.grid.q_max = parse_double(value);
    else if (key == "p_min") config.grid.p_min = parse_double(value);
    else if (key == "p_max") config.grid.p_max = parse_double(value);
    else if (key == "horizon") config.horizon = parse_double(value);
    else if (key == "mass") config.params.mass = parse_double(value);
    else if (key == "omega") config.params.omega = parse_double(value);
    else if (key == "hbar") config.params.hbar = parse_double(value);
    else if (key == "sigma0") config.params.sigma0 = parse_double(value);
    else if (key == "quad_n") config.quad.n_subintervals = parse_count(value);
    else if (key == "epsilon") config.epsilon = parse_double(value);
    else if (key == "workers")
        config.workers = static_cast<unsigned>(parse_count(value));
    else if (key == "out_csv")
        config.outputs.push_back({OutputSpec::Format::csv, value});
    else if (key == "out_bin")
        config.outputs.push_back({OutputSpec::Format::binary, value});
    else if (key == "out_ppm") parse_ppm_token(value, config.outputs);
    else if (key == "verify_bound") parse_verify_token(value, config.verify_bound);
    else throw ConfigError("unknown config key '" + key + "'");
}

void load_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string entry = trim(line);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file '" + path + "' line " +
                              std::to_string(line_no) + ": expected key=value, got '" +
                              entry + "'");
        apply_file_entry(config, trim(entry.substr(0, eq)),
                         trim(entry.substr(eq + 1)));
    }
}

std::string g17(double v) {
    char tmp[32];
    std::snprintf(tmp, sizeof(tmp), "%.17g", v);
    return tmp;
}

}  // namespace

void RunConfig::validate() const {
    try {
        grid.validate();
        params.validate();
        quad.validate();
        scale.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ConfigError("horizon must be finite and > 0");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ConfigError("epsilon must be finite and > 0");
    if (outputs.empty() && verify_bound.empty())
        throw ConfigError(
            "nothing to do: request at least one output or --verify-bound point");
    for (const PrepPoint& x0 : verify_bound)
        if (x0.isZero())
            throw ConfigError("--verify-bound: the origin preparation is excluded");
}

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig config;

    auto need = [&](std::size_t i, std::size_t extra,
                    const std::string& flag) {
        if (i + extra >= args.size())
            throw ConfigError("flag '" + flag + "' expects " +
                              std::to_string(extra) + " argument(s)");
    };

    // The config file is applied first so that explicit flags override it.
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            need(i, 1, args[i]);
            if (!config_path.empty())
                throw ConfigError("duplicate --config");
            config_path = args[i + 1];
            ++i;
        }
    }
    if (!config_path.empty()) load_config_file(config, config_path);

    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& flag = args[i];
        if (flag == "--config") {
            ++i;  // already applied
        } else if (flag == "--grid") {
            need(i, 1, flag);
            parse_grid_token(args[++i], config.grid);
        } else if (flag == "--q-range") {
            need(i, 2, flag);
            config.grid.q_min = parse_double(args[i + 1]);
            config.grid.q_max = parse_double(args[i + 2]);
            i += 2;
        } else if (flag == "--p-range") {
            need(i, 2, flag);
            config.grid.p_min = parse_double(args[i + 1]);
            config.grid.p_max = parse_double(args[i + 2]);
            i += 2;
        } else if (flag == "--horizon") {
            need(i, 1, flag);
            config.horizon = parse_double(args[++i]);
        } else if (flag == "--mass") {
            need(i, 1, flag);
            config.params.mass = parse_double(args[++i]);
        } else if (flag == "--omega") {
            need(i, 1, flag);
            config.params.omega = parse_double(args[++i]);
        } else if (flag == "--hbar") {
            need(i, 1, flag);
            config.params.hbar = parse_double(args[++i]);
        } else if (flag == "--sigma0") {
            need(i, 1, flag);
            config.params.sigma0 = parse_double(args[++i]);
        } else if (flag == "--quad-n") {
            need(i, 1, flag);
            config.quad.n_subintervals = parse_count(args[++i]);
        } else if (flag == "--epsilon") {
            need(i, 1, flag);
            config.epsilon = parse_double(args[++i]);
        } else if (flag == "--workers") {
            need(i, 1, flag);
            config.workers = static_cast<unsigned>(parse_count(args[++i]));
        } else if (flag == "--out-csv") {
            need(i, 1, flag);
            config.outputs.push_back({OutputSpec::Format::csv, args[++i]});
        } else if (flag == "--out-bin") {
            need(i, 1, flag);
            config.outputs.push_back({OutputSpec::Format::binary, args[++i]});
        } else if (flag == "--out-ppm") {
            need(i, 2, flag);
            config.outputs.push_back({OutputSpec::Format::ppm, args[i + 2],
                                      channel_from_name(args[i + 1])});
            i += 2;
        } else if (flag == "--verify-bound") {
            need(i, 2, flag);
            config.verify_bound.emplace_back(parse_double(args[i + 1]),
                                             parse_double(args[i + 2]));
            i += 2;
        } else {
            throw ConfigError("unknown flag '" + flag + "'");
        }
    }

    config.scale = ScaleSpec::natural(config.params);
    config.validate();
    return config;
}

int run(const RunConfig& config) {
    config.validate();

    if (!config.outputs.empty()) {
        const auto start = std::chrono::steady_clock::now();
        const FieldGrid field =
            compute_field(config.grid, config.horizon, config.params, config.scale,
                          config.quad, config.epsilon, config.workers);
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;

        for (const OutputSpec& out : config.outputs) {
            switch (out.format) {
                case OutputSpec::Format::csv: write_csv(field, out.path); break;
                case OutputSpec::Format::binary: write_binary(field, out.path); break;
                case OutputSpec::Format::ppm:
                    write_heatmap(field, out.channel, out.path, config.epsilon);
                    break;
            }
        }

        double fwd_min = field.samples[0].ld_fwd, fwd_max = fwd_min;
        double bwd_min = field.samples[0].ld_bwd, bwd_max = bwd_min;
        double m_min = field.samples[0].m_diag, m_max = m_min;
        double fwd_min_pos = std::numeric_limits<double>::infinity();
        for (const LDSample& s : field.samples) {
            fwd_min = std::min(fwd_min, s.ld_fwd);
            fwd_max = std::max(fwd_max, s.ld_fwd);
            bwd_min = std::min(bwd_min, s.ld_bwd);
            bwd_max = std::max(bwd_max, s.ld_bwd);
            m_min = std::min(m_min, s.m_diag);
            m_max = std::max(m_max, s.m_diag);
            if (s.ld_fwd > 0.0) fwd_min_pos = std::min(fwd_min_pos, s.ld_fwd);
        }
        const double median = median_m(field);
        const std::size_t ridge_count = extract_ridges(field, median).size();

        std::cout << "n_q=" << field.spec.n_q << '\n'
                  << "n_p=" << field.spec.n_p << '\n'
                  << "horizon=" << g17(field.horizon) << '\n'
                  << "ld_fwd_min=" << g17(fwd_min) << '\n'
                  << "ld_fwd_min_positive=" << g17(fwd_min_pos) << '\n'
                  << "ld_fwd_max=" << g17(fwd_max) << '\n'
                  << "ld_bwd_min=" << g17(bwd_min) << '\n'
                  << "ld_bwd_max=" << g17(bwd_max) << '\n'
                  << "m_min=" << g17(m_min) << '\n'
                  << "m_max=" << g17(m_max) << '\n'
                  << "m_median=" << g17(median) << '\n'
                  << "ridge_count=" << ridge_count << '\n'
                  << "wall_seconds=" << g17(elapsed.count()) << '\n'
                  << "outputs_written=" << config.outputs.size() << '\n';
    }

    for (const PrepPoint& x0 : config.verify_bound) {
        const BoundReport report = verify_gradient_bound(
            x0, config.horizon, config.params, config.scale, config.quad);
        std::cout << "bound_report q0=" << g17(x0[0]) << " p0=" << g17(x0[1])
                  << " horizon=" << g17(report.horizon)
                  << " grad_norm=" << g17(report.grad_norm)
                  << " bound_value=" << g17(report.bound_value)
                  << " ratio=" << g17(report.ratio)
                  << " norm=" << BoundReport::norm_name
                  << " cancellation_warning=" << (report.cancellation_warning ? 1 : 0)
                  << '\n';
    }
    return 0;
}

}  // namespace wpcld
