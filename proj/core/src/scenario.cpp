#include "ortholap/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ortholap {

namespace {

Scenario ustar(double p) {
    const double q = p / (p - 1.0);
    Scenario sc;
    sc.p = p;
    sc.data = [q](double x, double y) {
        return std::pow(std::abs(x), q) - std::pow(std::abs(y), q);
    };
    sc.has_exact = true;
    return sc;
}

}  // namespace

Scenario make_scenario(const std::string& name, double p_default) {
    if (name == "affine") {
        Scenario sc;
        sc.name = name;
        sc.p = p_default;
        sc.data = [](double x, double y) { return 3.0 * x - 2.0 * y + 1.0; };
        sc.has_exact = true;
        return sc;
    }
    if (name == "oscillatory") {
        Scenario sc;
        sc.name = name;
        sc.p = p_default;
        sc.data = [](double x, double y) {
            const double two_pi = 2.0 * std::numbers::pi;
            return std::sin(two_pi * x) + 0.5 * std::cos(two_pi * y);
        };
        return sc;
    }
    if (name == "ustar-p1.2") {
        Scenario sc = ustar(1.2);
        sc.name = name;
        return sc;
    }
    if (name == "ustar-p1.5") {
        Scenario sc = ustar(1.5);
        sc.name = name;
        return sc;
    }
    if (name == "ustar-p1.8") {
        Scenario sc = ustar(1.8);
        sc.name = name;
        return sc;
    }
    throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<Scenario> standard_scenarios(double p_default) {
    return {make_scenario("affine", p_default), make_scenario("ustar-p1.2"),
            make_scenario("ustar-p1.5"), make_scenario("ustar-p1.8"),
            make_scenario("oscillatory", p_default)};
}

std::vector<double> radii_ladder(double R, double h, int count, double min_h_units) {
    if (!(R > 0.0 && h > 0.0)) throw std::invalid_argument("radii_ladder: need R > 0, h > 0");
    if (count < 2) throw std::invalid_argument("radii_ladder: need count >= 2");
    if (!(min_h_units >= 4.0))
        throw std::invalid_argument("radii_ladder: the minimum radius must be at least 4h");
    const double rmax = R / 2.0;
    const double rmin = std::max(min_h_units * h, R / 32.0);
    if (!(rmin < rmax))
        throw std::invalid_argument(
            "radii_ladder: grid too coarse, minimum radius reaches R/2");
    std::vector<double> out(count);
    const double q = rmin / rmax;
    for (int i = 0; i < count; ++i)
        out[i] = rmax * std::pow(q, double(i) / (count - 1));
    return out;
}

}  // namespace ortholap
