#include "ortholap/report.hpp"

namespace ortholap {

EstimateReport make_report(std::string name, double lhs, double rhs, double tolerance,
                           std::map<std::string, double> context, std::string scenario) {
    EstimateReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.tolerance = tolerance;
    if (rhs > 0.0) r.ratio = lhs / rhs;
    r.pass = lhs <= rhs * (1.0 + tolerance);
    r.scenario = std::move(scenario);
    r.context = std::move(context);
    return r;
}

}  // namespace ortholap
