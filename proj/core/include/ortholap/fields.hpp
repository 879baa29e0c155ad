#ifndef ORTHOLAP_FIELDS_HPP
#define ORTHOLAP_FIELDS_HPP

#include <functional>
#include <vector>

#include "ortholap/geometry.hpp"

namespace ortholap {

/// Node-valued scalar field. Value semantics; the grid travels with the data.
class ScalarField {
  public:
    ScalarField() = default;
    ScalarField(Grid grid, std::vector<double> values);

    static ScalarField zeros(const Grid& grid);
    /// Samples f(x1, x2) with coordinates relative to the grid center.
    static ScalarField sample(const Grid& grid,
                              const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    double operator[](int k) const { return v_[k]; }
    double& operator[](int k) { return v_[k]; }
    double at(int ix, int iy) const { return v_[grid_.node_index(ix, iy)]; }
    double& at(int ix, int iy) { return v_[grid_.node_index(ix, iy)]; }

    /// True when every value is finite.
    bool finite() const;

  private:
    Grid grid_;
    std::vector<double> v_;
};

/// Cell-constant discrete gradient, one (g1, g2) pair per grid cell.
struct GradientField {
    Grid grid;
    std::vector<double> g1;
    std::vector<double> g2;
};

/// Bilinear-element average gradient per cell: with corners (SW, SE, NW, NE),
/// g1 = (SE - SW + NE - NW)/(2h), g2 = (NW - SW + NE - SE)/(2h).
GradientField cell_gradient(const ScalarField& field);

/// Discrete partial derivative along axis j in {1, 2} as a node field:
/// centered differences at interior nodes, one-sided second-order at the
/// boundary. Exact on quadratics.
ScalarField node_derivative(const ScalarField& field, int j);

/// Axis exchange: out(ix, iy) = in(iy, ix). Same grid.
ScalarField transpose(const ScalarField& field);

/// Sum of f(cell) * h^2 over cells whose centers lie in the ball.
/// Throws std::runtime_error if no cell center is inside.
double integrate_ball(const Grid& grid, const BallSpec& ball,
                      const std::function<double(int)>& cell_fn);

/// Same quadrature over the annulus r <= |x| < R.
double integrate_annulus(const Grid& grid, double r, double R,
                         const std::function<double(int)>& cell_fn);

/// integrate_ball divided by the continuum measure pi * radius^2.
double average_ball(const Grid& grid, const BallSpec& ball,
                    const std::function<double(int)>& cell_fn);

/// max - min of the field over ball_nodes.
double oscillation(const ScalarField& field, const BallSpec& ball);

/// Integral of |grad v|^p over the ball, |grad v|^2 = g1^2 + g2^2 per cell.
/// Requires 1 < p < 2.
double lp_gradient_norm(const ScalarField& field, const BallSpec& ball, double p);

}  // namespace ortholap

#endif
