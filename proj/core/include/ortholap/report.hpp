#ifndef ORTHOLAP_REPORT_HPP
#define ORTHOLAP_REPORT_HPP

#include <map>
#include <optional>
#include <string>

namespace ortholap {

/// One verified inequality: pass iff lhs <= rhs * (1 + tolerance).
/// ratio = lhs/rhs is reported only when rhs > 0.
struct EstimateReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> ratio;
    double tolerance = 0.0;
    bool pass = false;
    std::string scenario;
    std::map<std::string, double> context;
};

/// Fills ratio and pass from lhs/rhs/tolerance.
EstimateReport make_report(std::string name, double lhs, double rhs, double tolerance,
                           std::map<std::string, double> context = {},
                           std::string scenario = {});

}  // namespace ortholap

#endif
