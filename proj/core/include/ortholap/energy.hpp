#ifndef ORTHOLAP_ENERGY_HPP
#define ORTHOLAP_ENERGY_HPP

#include <optional>
#include <stdexcept>

#include "ortholap/fields.hpp"

namespace ortholap {

/// Exponent p in (1,2) and regularization eps >= 0.
struct EnergyParams {
    double p = 1.5;
    double eps = 1e-3;
};

/// Throws std::invalid_argument unless 1 < p < 2 and eps >= 0.
void validate_params(const EnergyParams& params);

/// Raised when a (p-2)/2 power is evaluated at eps = 0 with a vanishing
/// gradient component.
struct SingularEvaluation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Discrete energy: sum over cells of h^2 * [(g1^2+eps)^(p/2) + (g2^2+eps)^(p/2)] / p.
/// With eps = 0 this is the degenerate functional. If `domain` is set, only
/// cells whose centers lie in the ball contribute; otherwise all cells do.
double energy(const ScalarField& field, const EnergyParams& params,
              std::optional<BallSpec> domain = std::nullopt);

/// Gradient of the discrete energy with respect to nodal values, with rows at
/// grid-boundary nodes zeroed. With eps = 0, throws SingularEvaluation if any
/// cell gradient component vanishes.
ScalarField residual(const ScalarField& field, const EnergyParams& params);

/// Per-cell, per-axis linearization weight (g^2+eps)^((p-4)/2) * (eps+(p-1)g^2).
double axis_weight(double g, const EnergyParams& params);

/// Action of the energy's second derivative at `field` on `direction`.
/// Direction and output are zero at grid-boundary nodes. Requires eps > 0.
ScalarField hessian_apply(const ScalarField& field, const EnergyParams& params,
                          const ScalarField& direction);

/// Weighted bilinear form of the linearized equation with coefficients frozen
/// at `base`: sum over cells of
///   h^2 * sum_i (eps+g_i^2)^((p-4)/2) (eps+(p-1) g_i^2) d_i(dfield) d_i(testfn),
/// g from `base`. testfn must vanish on the grid boundary; requires eps > 0.
double derivative_residual(const ScalarField& dfield, const ScalarField& base,
                           const EnergyParams& params, const ScalarField& testfn);

}  // namespace ortholap

#endif
