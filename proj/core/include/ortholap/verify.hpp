#ifndef ORTHOLAP_VERIFY_HPP
#define ORTHOLAP_VERIFY_HPP

#include <vector>

#include "ortholap/energy.hpp"
#include "ortholap/geometry.hpp"
#include "ortholap/report.hpp"
#include "ortholap/solver.hpp"

namespace ortholap {

/// Oscillations of both derivative fields of u over a decreasing radii
/// ladder, with the logarithmic factors and the measured modulus constants.
struct OscillationProfile {
    std::vector<double> radii;    ///< strictly decreasing, each in [4h, R/2]
    std::vector<double> osc1;     ///< oscillation of the x1-derivative per radius
    std::vector<double> osc2;
    std::vector<double> factors;  ///< (log(R/r))^{-1/2}
    std::vector<double> c1;       ///< osc * sqrt(log(R/r)) / denom
    std::vector<double> c2;
    double denom = 0.0;           ///< (avg_{B_R} |grad u|^p)^{1/p}
    double sup_c = 0.0;           ///< max of c1, c2 over the ladder
    double R = 0.0;
    double p = 0.0;
    double eps = 0.0;
    int n = 0;
};

OscillationProfile oscillation_profile(const ScalarField& u, double R,
                                       const std::vector<double>& radii, double p,
                                       double eps);

/// Oscillation inequality with explicit constant pi:
/// (osc_{B_r} v)^2 * log(R/r) <= pi * integral over B_R \ B_r of |grad v|^2.
EstimateReport check_lebesgue(const ScalarField& vfield, double r, double R,
                              double tolerance = 0.05);

/// Ball-wise extrema principle: interior extrema of dfield may exceed the
/// boundary-ring extrema only by an amount bounded by h times the sup of the
/// discrete gradient (violations must vanish linearly with h).
EstimateReport check_maxmin(const ScalarField& dfield, const std::vector<BallSpec>& balls);

/// Stability of the measured oscillation constant between two grids (a vs b)
/// and two regularization levels (a vs c).
EstimateReport check_modulus_stability(const OscillationProfile& a, const OscillationProfile& b,
                             const OscillationProfile& c, double tolerance = 0.25);

/// max_{B_{R/2}}(eps+|grad u|^2) / (avg_{B_R}(eps+|grad u|^2)^{p/2})^{2/p}.
double lipschitz_ratio(const ScalarField& u, const EnergyParams& params, double R);
EstimateReport check_lipschitz(double ratio_fine, double ratio_coarse,
                               double tolerance = 0.25);

/// Sum over axes of the B_{R/2} integral of |grad(node_derivative(u, j))|^2,
/// over (avg_{B_R}(|grad extension|^p + eps^{p/2}))^{2/p}.
double grad_l2_ratio(const ScalarField& u, const ScalarField& extension,
                     const EnergyParams& params, double R);
EstimateReport check_grad_l2(const std::vector<double>& ratios_by_eps,
                             double tolerance = 0.25);

/// Cutoff-weighted derivative bound in coordinates rescaled to the unit ball
/// (w = R^2(eps + |grad u|^2)); the cutoff lives between R/2 and R. The ratio
/// takes the worse of the two axes. Requires eps > 0.
double caccioppoli_ratio(const ScalarField& u, const EnergyParams& params, double R);
EstimateReport check_caccioppoli(double ratio_fine, double ratio_coarse,
                                 double tolerance = 0.25);

/// lhs and rhs of the scalar monotonicity inequality at one sample:
/// lhs = (a-b)^2 (eps+a^2+b^2)^{(p-2)/2}, rhs = (flux(a)-flux(b))(a-b) with
/// flux(t) = (eps+t^2)^{(p-2)/2} t (flux(0) = 0 when eps = 0).
struct MonotonicityTerms {
    double lhs = 0.0;
    double rhs = 0.0;
};
MonotonicityTerms monotonicity_terms(double a, double b, double eps, double p);

/// Maximizes lhs/rhs over a uniform (a, b) grid on [lo, hi]^2 minus the
/// diagonal for every eps, then repeats at doubled resolution; passes when
/// the refined max stays within the tolerance band of the coarse max.
/// Throws std::runtime_error if rhs <= 0 at any off-diagonal sample.
EstimateReport sweep_monotonicity_inequality(double p, const std::vector<double>& eps_values,
                                             int samples, double lo, double hi,
                                             double tolerance = 0.05);

/// Max over test functions and axes of the frozen-coefficient bilinear form
/// applied to (node_derivative(u, j), testfn), normalized by the form's L1
/// mass. Test functions must vanish on the grid boundary.
double derivative_equation_value(const ScalarField& u, const EnergyParams& params,
                                 const std::vector<ScalarField>& testfns);

/// Two-resolution decay: passes when value_fine <= value_coarse / 1.4.
EstimateReport check_derivative_equation(double value_fine, double value_coarse);

/// Both ladder difference sequences eventually decreasing: among the last
/// (up to) three consecutive ratios, at most one >= 1 and none > 1.1.
/// Requires at least 3 recorded differences (a 4-level ladder).
EstimateReport check_convergence(const LadderReport& ladder, double data_scale);

/// Stability across the ladder of
/// C_k = lp_norms[k] / (lp_extension + eps_k^{p/2} * pi R^2).
EstimateReport check_energy_comparison(const std::vector<double>& lp_norms,
                                       const std::vector<double>& eps_values,
                                       double lp_extension, double R, double p,
                                       double tolerance = 0.20);

/// Re-evaluates every measured ratio on (lambda u, lambda^2 eps) and reports
/// the worst relative drift against the bound 1e-9.
EstimateReport check_scaling_invariance(const ScalarField& u, const ScalarField& extension,
                                        const EnergyParams& params, double R,
                                        const std::vector<double>& radii,
                                        double lambda = 3.0);

}  // namespace ortholap

#endif
