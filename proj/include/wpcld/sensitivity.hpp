#ifndef WPCLD_SENSITIVITY_HPP
#define WPCLD_SENSITIVITY_HPP

/**
 * Preparation-space sensitivity machinery: the stability matrix of the
 * center flow, the semiclassical OTOC proxy built from it, finite-difference
 * descriptor gradients, and the exponential gradient bound
 *
 *   ||grad L_fwd|| <= ||A|| int_0^T ||J(t)|| dt = O(e^{wT}),
 *
 * verified numerically point by point. Matrix norms are spectral (the
 * operator norm induced by the Euclidean norm used in the descriptor).
 */

#include <cmath>
#include <span>

#include "wpcld/ld.hpp"
#include "wpcld/types.hpp"

namespace wpcld {

/// Jacobian of the center flow map with respect to the preparation.
using StabilityMatrix = Eigen::Matrix2d;

/// J(t) = e^{At} = [[cosh(wt), sinh(wt)/(m w)], [m w sinh(wt), cosh(wt)]].
/// det J = 1 for all t; the spectral norm grows like e^{w|t|}.
inline StabilityMatrix stability_matrix(double t, const PhysicalParams& params) {
    params.validate();
    if (!std::isfinite(t)) throw std::domain_error("stability_matrix: non-finite t");
    const double wt = params.omega * t;
    const double c = std::cosh(wt);
    const double s = std::sinh(wt);
    const double mw = params.mass * params.omega;
    StabilityMatrix j;
    j << c, s / mw,
         mw * s, c;
    if (!j.allFinite()) detail::throw_overflow("stability_matrix", t);
    return j;
}

/// Semiclassical out-of-time-order growth proxy
/// C(t) = hbar^2 (dq_c(t)/dq0)^2 = hbar^2 cosh^2(wt); even in t and
/// non-decreasing in |t|.
inline double otoc_proxy(double t, const PhysicalParams& params) {
    params.validate();
    if (!std::isfinite(t)) throw std::domain_error("otoc_proxy: non-finite t");
    const double j11 = std::cosh(params.omega * t);
    const double c = params.hbar * params.hbar * j11 * j11;
    if (!std::isfinite(c)) detail::throw_overflow("otoc_proxy", t);
    return c;
}

/// Largest singular value of a 2x2 matrix in closed form.
inline double spectral_norm(const Eigen::Matrix2d& m) {
    const double f = m.squaredNorm();  // sum of squared singular values
    const double d = m.determinant();  // product of singular values
    const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * d * d));
    return std::sqrt(0.5 * (f + disc));
}

/// Centered-difference gradient of ld_forward with a cancellation flag set
/// when the differences retain too few significant digits to be trusted.
struct GradientResult {
    Eigen::Vector2d gradient;
    bool cancellation_warning = false;
};

/**
 * Centered finite-difference gradient of ld_forward in the scaled
 * preparation coordinates (q0/q_scale, p0/p_scale); h is the step in those
 * scaled units (default 1e-5 balances truncation against cancellation for
 * descriptor values up to ~e^5). The origin preparation is excluded: the
 * speed norm is non-smooth only where the trajectory sits at the fixed
 * point, which for the linear flow is exactly x0 = 0.
 */
GradientResult ld_gradient_fd(const PrepPoint& x0, double horizon,
                              const PhysicalParams& params, const ScaleSpec& scale,
                              const QuadratureSpec& quad, double h = 1e-5);

/// One bound check: measured gradient norm vs the chain-rule envelope.
struct BoundReport {
    double grad_norm;     ///< ||grad L_fwd|| by centered differences
    double bound_value;   ///< ||A|| * int_0^T ||J(t)|| dt, Simpson
    double ratio;         ///< grad_norm / bound_value
    double horizon;
    bool cancellation_warning = false;

    /// Matrix norm used on both sides of the bound.
    static constexpr const char* norm_name = "spectral";
};

/**
 * Evaluate the gradient bound at one preparation. The generator and
 * Jacobian are taken in the same scaled coordinates as the descriptor
 * (A and J conjugated by diag(1/q_scale, 1/p_scale)), so the chain-rule
 * inequality ratio <= 1 holds exactly up to discretization; ratio <= 1 + 1e-6
 * certifies the bound at this point. The bound integral reuses the
 * descriptor's Simpson rule.
 */
BoundReport verify_gradient_bound(const PrepPoint& x0, double horizon,
                                  const PhysicalParams& params,
                                  const ScaleSpec& scale,
                                  const QuadratureSpec& quad, double h = 1e-5);

/// Least-squares exponential rate of `values` against `horizons` under the
/// pure-growth model v = e^{rate * T} (zero-intercept fit of log v on T).
/// This estimates the envelope rate: for v = e^{wT} it returns w exactly,
/// and for v = e^{wT} - 1 it approaches w from below.
double fit_exponential_rate(std::span<const double> horizons,
                            std::span<const double> values);

}  // namespace wpcld

#endif  // WPCLD_SENSITIVITY_HPP
