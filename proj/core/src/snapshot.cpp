#include "ortholap/snapshot.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ortholap {

namespace {

void put_double(std::ostream& os, double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    os.write(buf, res.ptr - buf);
}

}  // namespace

void write_snapshot(std::ostream& os, const ScalarField& field, double p, double eps) {
    const Grid& g = field.grid();
    os << g.n << ' ';
    put_double(os, g.h);
    os << ' ';
    put_double(os, p);
    os << ' ';
    put_double(os, eps);
    os << '\n';
    for (int iy = 0; iy < g.n; ++iy) {
        for (int ix = 0; ix < g.n; ++ix) {
            if (ix) os << ' ';
            put_double(os, field.at(ix, iy));
        }
        os << '\n';
    }
}

void write_snapshot_file(const std::string& path, const ScalarField& field, double p,
                         double eps) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
    write_snapshot(os, field, p, eps);
    if (!os) throw std::runtime_error("write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(std::istream& is) {
    int n = 0;
    double h = 0.0, p = 0.0, eps = 0.0;
    if (!(is >> n >> h >> p >> eps))
        throw std::runtime_error("read_snapshot: malformed header");
    if (n < 3 || !(h > 0.0)) throw std::runtime_error("read_snapshot: invalid header values");
    Grid g = build_grid(n, h * (n - 1), {0.0, 0.0});
    g.h = h;  // keep the stored spacing bit-exact
    std::vector<double> v(size_t(n) * n);
    for (double& x : v)
        if (!(is >> x)) throw std::runtime_error("read_snapshot: truncated value block");
    ScalarField f(g, std::move(v));
    if (!f.finite()) throw std::runtime_error("read_snapshot: non-finite values");
    return Snapshot{std::move(f), p, eps};
}

Snapshot read_snapshot_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
    return read_snapshot(is);
}

}  // namespace ortholap
