#ifndef ORTHOLAP_GEOMETRY_HPP
#define ORTHOLAP_GEOMETRY_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace ortholap {

/// Uniform square lattice over the computational domain.
///
/// n is odd so a node sits exactly at the center. Node (ix, iy) lies at
/// center + h*(ix - (n-1)/2, iy - (n-1)/2); iy counts rows from the south.
/// All distance computations are done on integer index offsets scaled by h,
/// so membership predicates do not depend on the absolute center.
struct Grid {
    int n = 0;          ///< nodes per side (odd, >= 9)
    double h = 0.0;     ///< spacing, h = side/(n-1)
    double side = 0.0;  ///< physical side length
    std::array<double, 2> center{0.0, 0.0};

    int node_count() const { return n * n; }
    int cells_per_side() const { return n - 1; }
    int cell_count() const { return (n - 1) * (n - 1); }

    int node_index(int ix, int iy) const { return iy * n + ix; }
    int cell_index(int cx, int cy) const { return cy * (n - 1) + cx; }

    /// Coordinate of node ix along an axis, relative to the center.
    double rel(int i) const { return h * (i - (n - 1) / 2); }
    double x1(int ix) const { return center[0] + rel(ix); }
    double x2(int iy) const { return center[1] + rel(iy); }

    /// Distance of node (ix, iy) from the grid center.
    double node_dist(int ix, int iy) const;
    /// Distance of the center of cell (cx, cy) from the grid center.
    double cell_dist(int cx, int cy) const;
    /// Coordinates of the center of cell (cx, cy), relative to the grid center.
    std::array<double, 2> cell_rel(int cx, int cy) const;

    bool is_boundary_node(int ix, int iy) const {
        return ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1;
    }
};

/// Ball concentric with the grid center.
struct BallSpec {
    double radius = 0.0;
};

/// Radial cutoff: 1 on the inner ball, 0 outside the outer ball, quintic
/// smoothstep in between. grad_norm/hess_norm sample |grad| and the largest
/// absolute second-derivative entry of the radial profile at each node.
struct Cutoff {
    double inner = 0.0;
    double outer = 0.0;
    std::vector<double> values;
    std::vector<double> grad_norm;
    std::vector<double> hess_norm;

    /// Analytic radial profile and its derivative magnitudes at distance rho.
    double value_at(double rho) const;
    double grad_at(double rho) const;
    double hess_at(double rho) const;
};

/// Builds the uniform grid. Throws std::invalid_argument for even n, n < 9,
/// or nonpositive side.
Grid build_grid(int n, double side, std::array<double, 2> center);

/// Throws std::invalid_argument unless 0 < radius and radius + 2h < side/2.
void validate_ball(const Grid& grid, const BallSpec& ball);

/// Node indices with |x - center| < radius, ascending index order.
std::vector<int> ball_nodes(const Grid& grid, const BallSpec& ball);

/// Discrete boundary ring: nodes with radius - h*sqrt(2) <= |x - center|
/// <= radius + h*sqrt(2). Throws std::runtime_error if the ring is empty.
std::vector<int> boundary_ring(const Grid& grid, const BallSpec& ball);

/// Quintic-smoothstep radial cutoff between inner and outer.
/// Requires 2h < inner < outer <= side/2.
Cutoff make_cutoff(const Grid& grid, double inner, double outer);

}  // namespace ortholap

#endif
