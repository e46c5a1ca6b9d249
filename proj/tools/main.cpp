#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "wpcld/cli.hpp"
#include "wpcld/errors.hpp"

namespace {

constexpr const char* kUsage = R"(usage: wpcld [flags]

Computes forward/backward wavepacket-center Lagrangian descriptor fields and
the combined ridge diagnostic M over a grid of Gaussian preparations (q0, p0)
on the inverted harmonic oscillator.

flags:
  --grid NxM              grid resolution (default 1000x1000)
  --q-range MIN MAX       q0 extent (default -2 2)
  --p-range MIN MAX       p0 extent (default -2 2)
  --horizon T             integration horizon (default 5)
  --mass M --omega W      saddle parameters (default 1 1)
  --hbar H --sigma0 S     packet parameters (default 1 1)
  --quad-n N              Simpson subintervals, even (default 256)
  --epsilon E             clamp inside the M log (default 1e-30)
  --workers K             sweep threads, 0 = auto (default 0)
  --out-csv PATH          write the field as CSV
  --out-bin PATH          write the field as a binary LDF1 file
  --out-ppm CHANNEL PATH  write a grayscale heatmap; CHANNEL is
                          fwd_log10, bwd_log10 or m (repeatable)
  --verify-bound Q0 P0    report the gradient bound at one preparation
                          (repeatable)
  --config PATH           key=value config file, overridden by flags
)";

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    if (args.size() == 1 && (args[0] == "-h" || args[0] == "--help")) {
        std::cout << kUsage;
        return 0;
    }
    try {
        const wpcld::RunConfig config = wpcld::parse_config(args);
        return wpcld::run(config);
    } catch (const wpcld::ConfigError& err) {
        std::cerr << "error: category=config: " << err.what() << "\n\n" << kUsage;
        return 2;
    } catch (const wpcld::OverflowError& err) {
        std::cerr << "error: category=overflow: " << err.what() << '\n';
        return 3;
    } catch (const wpcld::IoError& err) {
        std::cerr << "error: category=io: " << err.what() << '\n';
        return 4;
    } catch (const std::exception& err) {
        std::cerr << "error: category=internal: " << err.what() << '\n';
        return 1;
    }
}
