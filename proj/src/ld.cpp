#include "wpcld/ld.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace wpcld {

void ScaleSpec::validate() const {
    if (!(q_scale > 0.0) || !std::isfinite(q_scale) ||
        !(p_scale > 0.0) || !std::isfinite(p_scale))
        throw std::invalid_argument("ScaleSpec: scales must be finite and > 0");
}

void QuadratureSpec::validate() const {
    if (n_subintervals < 2 || n_subintervals % 2 != 0)
        throw std::invalid_argument(
            "QuadratureSpec: n_subintervals must be even and >= 2");
}

void GridSpec::validate() const {
    if (!std::isfinite(q_min) || !std::isfinite(q_max) ||
        !std::isfinite(p_min) || !std::isfinite(p_max))
        throw std::invalid_argument("GridSpec: bounds must be finite");
    if (!(q_min < q_max))
        throw std::invalid_argument("GridSpec: q_min must be < q_max");
    if (!(p_min < p_max))
        throw std::invalid_argument("GridSpec: p_min must be < p_max");
    if (n_q < 2 || n_p < 2)
        throw std::invalid_argument("GridSpec: n_q and n_p must be >= 2");
}

SpeedTable make_speed_table(double t_start, double t_end,
                            const PhysicalParams& params, const ScaleSpec& scale,
                            const QuadratureSpec& quad) {
    params.validate();
    scale.validate();
    quad.validate();
    if (!std::isfinite(t_start) || !std::isfinite(t_end))
        throw std::domain_error("make_speed_table: non-finite window");

    const std::size_t n = quad.n_subintervals;
    const double h = (t_end - t_start) / static_cast<double>(n);
    const double m = params.mass;
    const double w = params.omega;

    SpeedTable table;
    table.step = h;
    table.node_matrix.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = t_start + static_cast<double>(k) * h;
        const double wt = w * t;
        const double c = std::cosh(wt);
        const double s = std::sinh(wt);
        // B(t) = S A e^{At}, S = diag(1/q_scale, 1/p_scale):
        //   row 1: ( w sinh(wt),    cosh(wt)/m ) / q_scale
        //   row 2: ( m w^2 cosh(wt), w sinh(wt) ) / p_scale
        Eigen::Matrix2d b;
        b << w * s / scale.q_scale, c / m / scale.q_scale,
             m * w * w * c / scale.p_scale, w * s / scale.p_scale;
        if (!b.allFinite()) detail::throw_overflow("speed table", t);
        table.node_matrix[k] = b;
    }
    return table;
}

double arc_length(const SpeedTable& table, const PrepPoint& x0) {
    const std::size_t n = table.node_matrix.size() - 1;
    // Simpson coefficients 1,4,2,4,...,4,1 accumulated in node order; the
    // fixed order is what keeps pointwise and sweep results bit-identical.
    double acc = (table.node_matrix[0] * x0).norm();
    for (std::size_t k = 1; k < n; ++k) {
        const double coeff = (k % 2 == 1) ? 4.0 : 2.0;
        acc += coeff * (table.node_matrix[k] * x0).norm();
    }
    acc += (table.node_matrix[n] * x0).norm();
    return acc * (table.step / 3.0);
}

namespace {

void require_positive_horizon(double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be finite and > 0");
}

}  // namespace

double ld_forward(const PrepPoint& x0, double horizon,
                  const PhysicalParams& params, const ScaleSpec& scale,
                  const QuadratureSpec& quad) {
    require_positive_horizon(horizon);
    detail::require_finite(x0, "preparation point");
    const SpeedTable table = make_speed_table(0.0, horizon, params, scale, quad);
    const double ld = arc_length(table, x0);
    if (!std::isfinite(ld)) detail::throw_overflow("ld_forward", horizon);
    return ld;
}

double ld_backward(const PrepPoint& x0, double horizon,
                   const PhysicalParams& params, const ScaleSpec& scale,
                   const QuadratureSpec& quad) {
    return ld_forward(PrepPoint(x0[0], -x0[1]), horizon, params, scale, quad);
}

double ld_backward_direct(const PrepPoint& x0, double horizon,
                          const PhysicalParams& params, const ScaleSpec& scale,
                          const QuadratureSpec& quad) {
    require_positive_horizon(horizon);
    detail::require_finite(x0, "preparation point");
    const SpeedTable table = make_speed_table(-horizon, 0.0, params, scale, quad);
    const double ld = arc_length(table, x0);
    if (!std::isfinite(ld)) detail::throw_overflow("ld_backward_direct", -horizon);
    return ld;
}

namespace {

double combine_m(double ld_fwd, double ld_bwd, double epsilon) {
    return -std::log10(std::max(ld_fwd, epsilon) * std::max(ld_bwd, epsilon));
}

}  // namespace

double m_diagnostic(const PrepPoint& x0, double horizon,
                    const PhysicalParams& params, const ScaleSpec& scale,
                    const QuadratureSpec& quad, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("m_diagnostic: epsilon must be finite and > 0");
    const double fwd = ld_forward(x0, horizon, params, scale, quad);
    const double bwd = ld_backward(x0, horizon, params, scale, quad);
    return combine_m(fwd, bwd, epsilon);
}

FieldGrid compute_field(const GridSpec& spec, double horizon,
                        const PhysicalParams& params, const ScaleSpec& scale,
                        const QuadratureSpec& quad, double epsilon,
                        unsigned workers) {
    spec.validate();
    require_positive_horizon(horizon);
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("compute_field: epsilon must be finite and > 0");

    const SpeedTable table = make_speed_table(0.0, horizon, params, scale, quad);

    FieldGrid field;
    field.spec = spec;
    field.horizon = horizon;
    const std::size_t total = spec.n_q * spec.n_p;
    field.samples.resize(total);

    unsigned n_workers = workers;
    if (n_workers == 0) n_workers = std::max(1u, std::thread::hardware_concurrency());
    n_workers = static_cast<unsigned>(
        std::min<std::size_t>(n_workers, total));

    std::vector<std::vector<std::size_t>> overflow_nodes(n_workers);

    auto sweep_range = [&](std::size_t begin, std::size_t end, unsigned worker) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const std::size_t p_idx = idx / spec.n_q;
            const std::size_t q_idx = idx % spec.n_q;
            const PrepPoint x0(spec.q_at(q_idx), spec.p_at(p_idx));
            const double fwd = arc_length(table, x0);
            const double bwd = arc_length(table, PrepPoint(x0[0], -x0[1]));
            LDSample& out = field.samples[idx];
            out.ld_fwd = fwd;
            out.ld_bwd = bwd;
            out.m_diag = combine_m(fwd, bwd, epsilon);
            if (!std::isfinite(fwd) || !std::isfinite(bwd) ||
                !std::isfinite(out.m_diag))
                overflow_nodes[worker].push_back(idx);
        }
    };

    if (n_workers == 1) {
        sweep_range(0, total, 0);
    } else {
        const std::size_t chunk = (total + n_workers - 1) / n_workers;
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            const std::size_t begin = std::min<std::size_t>(total, w * chunk);
            const std::size_t end = std::min<std::size_t>(total, begin + chunk);
            pool.emplace_back(sweep_range, begin, end, w);
        }
        for (auto& th : pool) th.join();
    }

    std::size_t n_overflow = 0;
    for (const auto& nodes : overflow_nodes) n_overflow += nodes.size();
    if (n_overflow > 0) {
        std::vector<std::size_t> all;
        all.reserve(n_overflow);
        for (const auto& nodes : overflow_nodes)
            all.insert(all.end(), nodes.begin(), nodes.end());
        std::sort(all.begin(), all.end());
        std::ostringstream msg;
        msg << "compute_field: overflow at " << all.size() << " node(s), indices";
        for (std::size_t i = 0; i < std::min<std::size_t>(all.size(), 8); ++i)
            msg << ' ' << all[i];
        if (all.size() > 8) msg << " ...";
        throw OverflowError(msg.str(), horizon);
    }
    return field;
}

std::vector<RidgeNode> extract_ridges(const FieldGrid& field, double threshold) {
    std::vector<RidgeNode> ridges;
    const std::size_t n_q = field.spec.n_q;
    const std::size_t n_p = field.spec.n_p;

    for (std::size_t j = 0; j < n_p; ++j) {
        for (std::size_t i = 0; i < n_q; ++i) {
            const double v = field.at(j, i).m_diag;
            if (!(v > threshold)) continue;

            const bool row_max = i > 0 && i + 1 < n_q &&
                                 v > field.at(j, i - 1).m_diag &&
                                 v > field.at(j, i + 1).m_diag;
            const bool col_max = j > 0 && j + 1 < n_p &&
                                 v > field.at(j - 1, i).m_diag &&
                                 v > field.at(j + 1, i).m_diag;
            if (row_max || col_max) ridges.push_back({j, i});
        }
    }
    return ridges;
}

double median_m(const FieldGrid& field) {
    std::vector<double> values;
    values.reserve(field.samples.size());
    for (const LDSample& s : field.samples) values.push_back(s.m_diag);
    const std::size_t mid = (values.size() - 1) / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    return values[mid];
}

}  // namespace wpcld
