#ifndef WPCLD_CLI_HPP
#define WPCLD_CLI_HPP

/**
 * Run configuration for the command-line driver: defaults, a flat
 * key=value config file, and flag overrides, with precedence
 * flags > file > defaults. The defaults reproduce the reference sweep
 * (1000x1000 nodes over [-2,2]^2, horizon 5, m = w = 1).
 */

#include <string>
#include <vector>

#include "wpcld/field_io.hpp"
#include "wpcld/ld.hpp"
#include "wpcld/types.hpp"

namespace wpcld {

struct OutputSpec {
    enum class Format { csv, binary, ppm };
    Format format;
    std::string path;
    Channel channel = Channel::m;  // ppm only
};

struct RunConfig {
    GridSpec grid;
    double horizon = 5.0;
    PhysicalParams params;
    ScaleSpec scale;  // derived from params after parsing
    QuadratureSpec quad;
    double epsilon = kDefaultClampEpsilon;
    unsigned workers = 0;  ///< 0 = hardware concurrency
    std::vector<OutputSpec> outputs;
    std::vector<PrepPoint> verify_bound;

    /// Throws ConfigError when any component spec is invalid or there is
    /// nothing to do (no outputs and no bound checks).
    void validate() const;
};

/// Parse command-line arguments (argv[0] excluded). Unknown flags,
/// malformed numbers and inconsistent bounds raise ConfigError naming the
/// offending token.
RunConfig parse_config(const std::vector<std::string>& args);

/// Compute the field, write every requested output, print key=value summary
/// lines and any bound reports to stdout. Returns 0 on success; errors
/// propagate as exceptions for the driver to map onto exit codes.
int run(const RunConfig& config);

}  // namespace wpcld

#endif  // WPCLD_CLI_HPP
