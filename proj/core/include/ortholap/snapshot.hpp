#ifndef ORTHOLAP_SNAPSHOT_HPP
#define ORTHOLAP_SNAPSHOT_HPP

#include <iosfwd>
#include <string>

#include "ortholap/fields.hpp"

namespace ortholap {

/// Field snapshot with the solve parameters it was produced under.
struct Snapshot {
    ScalarField field;
    double p = 0.0;
    double eps = 0.0;
};

/// Plain-text snapshot: first line "n h p eps", then n lines of n values,
/// row-major from the south row. Values are written with shortest
/// round-trippable formatting, so write -> read reproduces bits.
void write_snapshot(std::ostream& os, const ScalarField& field, double p, double eps);
void write_snapshot_file(const std::string& path, const ScalarField& field, double p,
                         double eps);

Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot_file(const std::string& path);

}  // namespace ortholap

#endif
