#ifndef WPCLD_FLOW_HPP
#define WPCLD_FLOW_HPP

/**
 * Autonomous linear flows dx/dt = A x on preparation space, plus a fixed-step
 * classical Runge-Kutta integrator. The integrator is deliberately generic
 * over the 2x2 generator so that the harmonic oscillator and the free
 * particle are available as degenerate flows next to the saddle; it serves
 * as the numeric cross-check for every closed form in iho.hpp.
 */

#include <cmath>
#include <cstdint>

#include "wpcld/errors.hpp"
#include "wpcld/types.hpp"

namespace wpcld {

/// Constant generator matrix of a linear preparation-space flow.
using LinearFlow = Eigen::Matrix2d;

/// Generator of the saddle flow: A = [[0, 1/m], [m w^2, 0]]. Trace-free, so
/// the flow map has unit determinant for all t.
inline LinearFlow iho_generator(const PhysicalParams& params) {
    params.validate();
    LinearFlow a;
    a << 0.0, 1.0 / params.mass,
         params.mass * params.omega * params.omega, 0.0;
    return a;
}

/// Right-hand side A x.
inline Eigen::Vector2d flow_velocity(const LinearFlow& flow,
                                     const CenterState& x) {
    return flow * x;
}

/// Fixed-step scheme selection. Classical fourth-order Runge-Kutta only;
/// adaptivity would break run-to-run determinism and the linear flow does
/// not need it.
enum class Scheme { RungeKutta4 };

struct IntegratorSpec {
    double step = 1e-3;
    Scheme scheme = Scheme::RungeKutta4;

    void validate() const {
        if (!(step > 0.0) || !std::isfinite(step))
            throw ConfigError("IntegratorSpec: step must be finite and > 0");
    }
};

/**
 * Integrate dx/dt = flow * x from x0 to t_final with fixed-step RK4; global
 * error O(step^4). Negative t_final integrates with negated step. When
 * t_final is not a multiple of the step, the last step is shortened so the
 * endpoint is hit exactly. Throws OverflowError (with the time reached) if
 * the state leaves the double range mid-integration.
 */
inline CenterState integrate(const LinearFlow& flow, const PrepPoint& x0,
                             double t_final, const IntegratorSpec& spec) {
    spec.validate();
    if (!flow.allFinite() || !x0.allFinite() || !std::isfinite(t_final))
        throw std::domain_error("integrate: non-finite input");

    Eigen::Vector2d x = x0;
    const double dir = t_final < 0.0 ? -1.0 : 1.0;
    const double span = std::abs(t_final);

    auto rk4_step = [&flow](const Eigen::Vector2d& y, double h) {
        const Eigen::Vector2d k1 = flow * y;
        const Eigen::Vector2d k2 = flow * (y + 0.5 * h * k1);
        const Eigen::Vector2d k3 = flow * (y + 0.5 * h * k2);
        const Eigen::Vector2d k4 = flow * (y + h * k3);
        return Eigen::Vector2d(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    };

    const auto n_full = static_cast<std::uint64_t>(span / spec.step);
    for (std::uint64_t i = 0; i < n_full; ++i) {
        x = rk4_step(x, dir * spec.step);
        if (!x.allFinite())
            throw OverflowError("integrate: state overflow at t = " +
                                    std::to_string(dir * static_cast<double>(i + 1) *
                                                   spec.step),
                                dir * static_cast<double>(i + 1) * spec.step);
    }
    const double rem = span - static_cast<double>(n_full) * spec.step;
    if (rem > 0.0) {
        x = rk4_step(x, dir * rem);
        if (!x.allFinite())
            throw OverflowError("integrate: state overflow at t = " +
                                    std::to_string(t_final),
                                t_final);
    }
    return x;
}

}  // namespace wpcld

#endif  // WPCLD_FLOW_HPP
