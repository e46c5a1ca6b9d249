#include "wpcld/sensitivity.hpp"

#include <cmath>
#include <stdexcept>

#include "wpcld/flow.hpp"

namespace wpcld {

namespace {

// Too few surviving digits in f(x+h) - f(x-h) to trust the quotient.
bool cancellation_dominated(double f_plus, double f_minus) {
    const double diff = std::abs(f_plus - f_minus);
    const double mag = std::abs(f_plus) + std::abs(f_minus);
    return mag > 0.0 && diff < 1e-10 * mag;
}

}  // namespace

GradientResult ld_gradient_fd(const PrepPoint& x0, double horizon,
                              const PhysicalParams& params, const ScaleSpec& scale,
                              const QuadratureSpec& quad, double h) {
    scale.validate();
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("ld_gradient_fd: h must be finite and > 0");
    if (x0.isZero())
        throw std::domain_error(
            "ld_gradient_fd: gradient undefined at the origin preparation");

    const double dq = h * scale.q_scale;
    const double dp = h * scale.p_scale;

    const double fq_plus =
        ld_forward(PrepPoint(x0[0] + dq, x0[1]), horizon, params, scale, quad);
    const double fq_minus =
        ld_forward(PrepPoint(x0[0] - dq, x0[1]), horizon, params, scale, quad);
    const double fp_plus =
        ld_forward(PrepPoint(x0[0], x0[1] + dp), horizon, params, scale, quad);
    const double fp_minus =
        ld_forward(PrepPoint(x0[0], x0[1] - dp), horizon, params, scale, quad);

    GradientResult result;
    // d/d(q0/q_scale) = q_scale * d/dq0, realized as a step of h*q_scale in q0.
    result.gradient[0] = (fq_plus - fq_minus) / (2.0 * h);
    result.gradient[1] = (fp_plus - fp_minus) / (2.0 * h);
    result.cancellation_warning = cancellation_dominated(fq_plus, fq_minus) ||
                                  cancellation_dominated(fp_plus, fp_minus);
    return result;
}

BoundReport verify_gradient_bound(const PrepPoint& x0, double horizon,
                                  const PhysicalParams& params,
                                  const ScaleSpec& scale,
                                  const QuadratureSpec& quad, double h) {
    const GradientResult grad = ld_gradient_fd(x0, horizon, params, scale, quad, h);

    // Scaled-coordinate generator and Jacobian: conjugation by
    // S = diag(1/q_scale, 1/p_scale) matches the norm the descriptor uses.
    const Eigen::DiagonalMatrix<double, 2> s(1.0 / scale.q_scale,
                                             1.0 / scale.p_scale);
    const Eigen::DiagonalMatrix<double, 2> s_inv(scale.q_scale, scale.p_scale);
    const Eigen::Matrix2d a_scaled = s * iho_generator(params) * s_inv;
    const double a_norm = spectral_norm(a_scaled);

    quad.validate();
    const std::size_t n = quad.n_subintervals;
    const double step = horizon / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * step;
        const Eigen::Matrix2d j_scaled = s * stability_matrix(t, params) * s_inv;
        const double norm_k = spectral_norm(j_scaled);
        const double coeff = (k == 0 || k == n) ? 1.0 : ((k % 2 == 1) ? 4.0 : 2.0);
        acc += coeff * norm_k;
    }
    const double integral = acc * (step / 3.0);

    BoundReport report;
    report.grad_norm = grad.gradient.norm();
    report.bound_value = a_norm * integral;
    report.ratio = report.grad_norm / report.bound_value;
    report.horizon = horizon;
    report.cancellation_warning = grad.cancellation_warning;
    return report;
}

double fit_exponential_rate(std::span<const double> horizons,
                            std::span<const double> values) {
    if (horizons.size() != values.size() || horizons.empty())
        throw std::invalid_argument(
            "fit_exponential_rate: need equally many horizons and values");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (!(values[i] > 0.0))
            throw std::domain_error("fit_exponential_rate: values must be > 0");
        num += std::log(values[i]) * horizons[i];
        den += horizons[i] * horizons[i];
    }
    if (den == 0.0)
        throw std::invalid_argument("fit_exponential_rate: horizons are all zero");
    return num / den;
}

}  // namespace wpcld
