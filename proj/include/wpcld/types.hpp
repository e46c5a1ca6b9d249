#ifndef WPCLD_TYPES_HPP
#define WPCLD_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wpcld/errors.hpp"

namespace wpcld {

/// A point (q0, p0) in preparation space: the initial center position and
/// momentum kick labeling one Gaussian preparation. Component 0 is q, 1 is p.
using PrepPoint = Eigen::Vector2d;

/// The evolved wavepacket center (q_c, p_c). Same component convention.
using CenterState = Eigen::Vector2d;

/**
 * Physical parameters of the Gaussian family on the inverted harmonic
 * oscillator U(q) = -1/2 m w^2 q^2.
 *
 * The derived spread constant k = hbar^2 / (4 m^2 w^2 sigma0^2) controls how
 * fast the packet width grows relative to its initial value.
 */
struct PhysicalParams {
    double mass = 1.0;    ///< m > 0
    double omega = 1.0;   ///< saddle frequency w > 0
    double hbar = 1.0;    ///< reduced Planck constant > 0
    double sigma0 = 1.0;  ///< initial position spread > 0

    double spread_constant() const {
        const double d = 2.0 * mass * omega * sigma0;
        return (hbar / d) * (hbar / d);
    }

    void validate() const {
        if (!(mass > 0.0) || !std::isfinite(mass) ||
            !(omega > 0.0) || !std::isfinite(omega) ||
            !(hbar > 0.0) || !std::isfinite(hbar) ||
            !(sigma0 > 0.0) || !std::isfinite(sigma0))
            throw std::invalid_argument(
                "PhysicalParams: mass, omega, hbar, sigma0 must be finite and > 0");
        if (!std::isfinite(spread_constant()) || !(spread_constant() > 0.0))
            throw std::invalid_argument(
                "PhysicalParams: spread constant hbar^2/(4 m^2 w^2 sigma0^2) not finite");
    }
};

/// Packet width and its growth rate at one instant.
struct WidthState {
    double sigma;      ///< position spread sigma_t > 0
    double sigma_dot;  ///< d sigma_t / dt
};

namespace detail {

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw std::domain_error(std::string(name) + " must be finite");
}

inline void require_finite(const Eigen::Vector2d& v, const char* name) {
    if (!v.allFinite())
        throw std::domain_error(std::string(name) + " must be finite");
}

[[noreturn]] inline void throw_overflow(const char* what, double t) {
    throw OverflowError(std::string(what) +
                            ": hyperbolic overflow at t = " + std::to_string(t),
                        t);
}

}  // namespace detail

}  // namespace wpcld

#endif  // WPCLD_TYPES_HPP
