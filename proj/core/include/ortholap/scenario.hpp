#ifndef ORTHOLAP_SCENARIO_HPP
#define ORTHOLAP_SCENARIO_HPP

#include <functional>
#include <string>
#include <vector>

#include "ortholap/fields.hpp"

namespace ortholap {

/// Named boundary-data family. data(x1, x2) takes coordinates relative to
/// the grid center. has_exact marks data that solves the degenerate equation
/// itself, so solver output can be compared against it directly.
struct Scenario {
    std::string name;
    double p = 1.5;
    std::function<double(double, double)> data;
    bool has_exact = false;
};

/// Scenario by name: "affine", "ustar-p1.2", "ustar-p1.5", "ustar-p1.8",
/// "oscillatory". The ustar names pin their exponent; the others run at
/// p_default. Throws std::invalid_argument for unknown names.
Scenario make_scenario(const std::string& name, double p_default = 1.5);

/// The fixed five-scenario suite.
std::vector<Scenario> standard_scenarios(double p_default = 1.5);

/// count log-spaced radii from R/2 down to max(min_h_units*h, R/32),
/// strictly decreasing. Requires count >= 2, min_h_units >= 4, and a
/// nondegenerate range.
std::vector<double> radii_ladder(double R, double h, int count, double min_h_units);

}  // namespace ortholap

#endif
