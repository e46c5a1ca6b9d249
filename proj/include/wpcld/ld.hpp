#ifndef WPCLD_LD_HPP
#define WPCLD_LD_HPP

/**
 * Forward/backward wavepacket-center Lagrangian descriptors and the combined
 * ridge diagnostic M, pointwise and over dense preparation-space grids.
 *
 * The forward descriptor is the arc length of the center trajectory in
 * non-dimensionalized coordinates,
 *
 *   L_fwd(x0, T) = int_0^T || (qdot_c/q_scale, pdot_c/p_scale) || dt,
 *
 * evaluated on the closed-form trajectory with composite Simpson quadrature.
 * The backward descriptor integrates over [-T, 0]. Both are minimized along
 * the saddle's invariant eigenlines p = -+ m w q, and
 *
 *   M(x0) = -log10( L_fwd * L_bwd )
 *
 * inverts those valleys into ridges that trace the manifold skeleton.
 */

#include <cstddef>
#include <vector>

#include "wpcld/errors.hpp"
#include "wpcld/types.hpp"

namespace wpcld {

/// Clamp applied to each descriptor factor inside the log of M so the
/// diagnostic stays finite at the fixed-point preparation.
inline constexpr double kDefaultClampEpsilon = 1e-30;

/// Characteristic scales dividing q and p before the speed norm is taken.
/// The defaults (q_scale = 1, p_scale = m w) make the norm frequency-
/// covariant and reduce to the identity in m = w = 1 units.
struct ScaleSpec {
    double q_scale = 1.0;
    double p_scale = 1.0;

    static ScaleSpec natural(const PhysicalParams& params) {
        return {1.0, params.mass * params.omega};
    }

    void validate() const;
};

/// Deterministic time quadrature for the arc-length integral.
struct QuadratureSpec {
    std::size_t n_subintervals = 256;  ///< even, >= 2

    void validate() const;
};

/// Inclusive-endpoint rectangular grid over preparation space. Sample (i, j)
/// sits at q0 = q_min + i * dq, p0 = p_min + j * dp.
struct GridSpec {
    double q_min = -2.0;
    double q_max = 2.0;
    double p_min = -2.0;
    double p_max = 2.0;
    std::size_t n_q = 1000;
    std::size_t n_p = 1000;

    double q_at(std::size_t i) const {
        return q_min + static_cast<double>(i) * ((q_max - q_min) / static_cast<double>(n_q - 1));
    }
    double p_at(std::size_t j) const {
        return p_min + static_cast<double>(j) * ((p_max - p_min) / static_cast<double>(n_p - 1));
    }
    double q_spacing() const { return (q_max - q_min) / static_cast<double>(n_q - 1); }
    double p_spacing() const { return (p_max - p_min) / static_cast<double>(n_p - 1); }

    void validate() const;
};

struct LDSample {
    double ld_fwd;
    double ld_bwd;
    double m_diag;
};

/// Dense field of LD samples, row-major with the p index outermost.
struct FieldGrid {
    GridSpec spec;
    double horizon = 0.0;
    std::vector<LDSample> samples;

    std::size_t index(std::size_t p_idx, std::size_t q_idx) const {
        return p_idx * spec.n_q + q_idx;
    }
    const LDSample& at(std::size_t p_idx, std::size_t q_idx) const {
        return samples[index(p_idx, q_idx)];
    }
};

/// Simpson node matrices B_k = S A e^{A t_k} over one integration window.
/// The speed at node k is ||B_k x0||, so a whole grid sweep shares one
/// table. Pointwise and grid evaluations go through the same table type,
/// which keeps them bit-identical.
struct SpeedTable {
    std::vector<Eigen::Matrix2d> node_matrix;  ///< n_subintervals + 1 entries
    double step;                               ///< Simpson step h
};

/// Node matrices at t_k = t_start + k h, h = (t_end - t_start) / n.
SpeedTable make_speed_table(double t_start, double t_end,
                            const PhysicalParams& params, const ScaleSpec& scale,
                            const QuadratureSpec& quad);

/// Composite-Simpson arc length for one preparation over a prepared table.
double arc_length(const SpeedTable& table, const PrepPoint& x0);

/// Forward descriptor over [0, T]. T must be > 0.
double ld_forward(const PrepPoint& x0, double horizon,
                  const PhysicalParams& params, const ScaleSpec& scale,
                  const QuadratureSpec& quad);

/// Backward descriptor over [-T, 0]. Computed as ld_forward on (q0, -p0),
/// which the time-reversal symmetry of the saddle flow makes exact.
double ld_backward(const PrepPoint& x0, double horizon,
                   const PhysicalParams& params, const ScaleSpec& scale,
                   const QuadratureSpec& quad);

/// Reference implementation of the backward descriptor by direct quadrature
/// over [-T, 0]; retained as a validation path for the reversal identity.
double ld_backward_direct(const PrepPoint& x0, double horizon,
                          const PhysicalParams& params, const ScaleSpec& scale,
                          const QuadratureSpec& quad);

/// Combined diagnostic -log10(max(ld_fwd, eps) * max(ld_bwd, eps)); finite
/// for every preparation including the origin.
double m_diagnostic(const PrepPoint& x0, double horizon,
                    const PhysicalParams& params, const ScaleSpec& scale,
                    const QuadratureSpec& quad,
                    double epsilon = kDefaultClampEpsilon);

/**
 * Sweep the grid and fill every node with (ld_fwd, ld_bwd, m_diag).
 *
 * Nodes are partitioned over `workers` threads (0 = hardware concurrency).
 * Every node evaluation is pure and the output array is written disjointly,
 * so the result is byte-identical for any worker count. If nodes overflow,
 * the sweep finishes and one OverflowError reporting the offending node
 * indices is thrown.
 */
FieldGrid compute_field(const GridSpec& spec, double horizon,
                        const PhysicalParams& params, const ScaleSpec& scale,
                        const QuadratureSpec& quad,
                        double epsilon = kDefaultClampEpsilon,
                        unsigned workers = 0);

struct RidgeNode {
    std::size_t p_index;
    std::size_t q_index;

    bool operator==(const RidgeNode&) const = default;
};

/// Nodes that are strict local maxima of m_diag along their grid row or
/// column and exceed the threshold, ordered by (row, column). Degenerate
/// single-row or single-column grids scan along the remaining axis only.
std::vector<RidgeNode> extract_ridges(const FieldGrid& field, double threshold);

/// Lower median of the m_diag channel (sorted element at (n-1)/2).
double median_m(const FieldGrid& field);

}  // namespace wpcld

#endif  // WPCLD_LD_HPP
