#ifndef WPCLD_IHO_HPP
#define WPCLD_IHO_HPP

/**
 * Closed-form Gaussian wavepacket dynamics on the inverted harmonic
 * oscillator. An initial Gaussian centered at q0 with mean momentum p0 stays
 * Gaussian for all time; its center follows the classical hyperbolic flow
 * and its width spreads deterministically. Everything in this header is an
 * exact formula, no integration involved.
 */

#include <cmath>
#include <string>

#include "wpcld/errors.hpp"
#include "wpcld/types.hpp"

namespace wpcld {

/**
 * Evolve the wavepacket center. The center obeys the classical saddle
 * equations of motion, solved exactly by
 *
 *   q_c(t) = q0 cosh(wt) + p0/(m w) sinh(wt)
 *   p_c(t) = m w q0 sinh(wt) + p0 cosh(wt)
 *
 * Negative t evolves backward. Throws OverflowError once cosh(wt) (or the
 * product with the initial data) leaves the double range, rather than
 * letting infinities propagate into downstream log-scale fields.
 */
inline CenterState center_flow(const PrepPoint& x0, double t,
                               const PhysicalParams& params) {
    params.validate();
    detail::require_finite(x0, "preparation point");
    detail::require_finite(t, "time");

    const double wt = params.omega * t;
    const double c = std::cosh(wt);
    const double s = std::sinh(wt);
    const double mw = params.mass * params.omega;

    CenterState xc(x0[0] * c + (x0[1] / mw) * s,
                   mw * x0[0] * s + x0[1] * c);
    if (!xc.allFinite()) detail::throw_overflow("center_flow", t);
    return xc;
}

/**
 * Packet width and its rate at time t:
 *
 *   sigma_t^2 = sigma0^2 cosh^2(wt) + k sinh^2(wt),
 *   k = hbar^2 / (4 m^2 w^2 sigma0^2).
 *
 * The rate is the exact derivative sigma_dot = w sinh(wt) cosh(wt)
 * (sigma0^2 + k) / sigma_t; it vanishes at t = 0 and the width never drops
 * below min(sigma0, sqrt(k)).
 */
inline WidthState width(double t, const PhysicalParams& params) {
    params.validate();
    detail::require_finite(t, "time");

    const double wt = params.omega * t;
    const double c = std::cosh(wt);
    const double s = std::sinh(wt);
    const double s0sq = params.sigma0 * params.sigma0;
    const double k = params.spread_constant();

    const double sigma = std::sqrt(s0sq * c * c + k * s * s);
    const double sigma_dot = params.omega * s * c * (s0sq + k) / sigma;
    if (!std::isfinite(sigma) || !std::isfinite(sigma_dot))
        detail::throw_overflow("width", t);
    return {sigma, sigma_dot};
}

/**
 * Exact configuration-space velocity field of the evolving packet prepared
 * at x0:
 *
 *   v(q, t) = p_c(t)/m + (sigma_dot_t / sigma_t) (q - q_c(t))
 *
 * The first term rides the center, the second is the width-rate shear. At
 * t = 0 the field is spatially uniform (sigma_dot_0 = 0).
 */
inline double bohmian_velocity(double q, double t, const PrepPoint& x0,
                               const PhysicalParams& params) {
    detail::require_finite(q, "position");
    const CenterState xc = center_flow(x0, t, params);
    const WidthState w = width(t, params);
    const double v = xc[1] / params.mass + (w.sigma_dot / w.sigma) * (q - xc[0]);
    if (!std::isfinite(v)) detail::throw_overflow("bohmian_velocity", t);
    return v;
}

/**
 * Position at time t of the fluid trajectory starting at qB0 inside the
 * packet prepared at x0. Offsets from the center scale with the width
 * ratio:
 *
 *   q_B(t) = q_c(t) + (sigma_t / sigma_0) (qB0 - q0)
 *
 * This is the exact solution of dq/dt = bohmian_velocity(q, t); a particle
 * starting at the center stays on the center.
 */
inline double internal_bohmian_trajectory(double qB0, double t,
                                          const PrepPoint& x0,
                                          const PhysicalParams& params) {
    detail::require_finite(qB0, "initial position");
    const CenterState xc = center_flow(x0, t, params);
    const WidthState w = width(t, params);
    const double q = xc[0] + (w.sigma / params.sigma0) * (qB0 - x0[0]);
    if (!std::isfinite(q)) detail::throw_overflow("internal_bohmian_trajectory", t);
    return q;
}

/// Conserved center energy E = p^2/(2m) - 1/2 m w^2 q^2.
inline double center_energy(const CenterState& x, const PhysicalParams& params) {
    return x[1] * x[1] / (2.0 * params.mass) -
           0.5 * params.mass * params.omega * params.omega * x[0] * x[0];
}

}  // namespace wpcld

#endif  // WPCLD_IHO_HPP
