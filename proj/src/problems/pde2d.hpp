#pragma once

#include <string>

#include "problem.hpp"
#include "solver.hpp"

namespace newtonlab::pde2d {

/// Uniform grid on the unit square with n subintervals per side (n >= 3);
/// (n-1)^2 interior nodes, homogeneous Dirichlet boundary.
struct Grid2D {
    int n = 3;
    double h() const { return 1.0 / n; }
    int interior_count() const { return (n - 1) * (n - 1); }
    /// Row-major interior index of node (ix, iy), both in 1..n-1.
    int index(int ix, int iy) const { return (iy - 1) * (n - 1) + (ix - 1); }
};

struct GridFunction2D {
    Grid2D grid;
    Vector interior_values;  // row-major over (ix, iy)
};

// Finite differences for Delta u + u^3 = 0, scaled by h^2 so that the
// Jacobian is the symmetric 5-point stencil matrix:
//   F_p = (4 u_p - sum of neighbors) - h^2 u_p^3,
//   J   = stencil matrix - diag(3 h^2 u_p^2).
void pde_residual(const Grid2D& grid, const Vector& u, Vector& out);
void pde_jacobian(const Grid2D& grid, const Vector& u, SparseCsrMatrix& out);

/// Hill-shaped bump located by exponents (k, j); epsilon = 1/n.
struct HillParams {
    int k = 1;
    int j = 1;
};

double hill_function(const HillParams& p, int n, double x, double y);

/// Nodal sampling of amplitude * hill / max(hill over grid nodes).
GridFunction2D hill_initial_guess(const Grid2D& grid, const HillParams& p, double amplitude);

/// Discrete integral h^2 * sum of interior values.
double grid_integral(const GridFunction2D& u);

/// Integral-based labels {u-, u0, u+} with targets {-I+, 0, +I+}.
struct Labels2D {
    double positive_integral = 0.0;
    double tol = 0.1;
    std::vector<std::string> names = {"u-", "u0", "u+"};
    int classify(double integral) const;
};

int classify_2d(const GridFunction2D& u, const Labels2D& labels);

/// Problem plus the reference data computed once per grid: the positive
/// solution (obtained by following the flow from a centered positive hill,
/// then polishing with full Newton steps) and its integral.
struct PdeProblemData {
    Grid2D grid;
    NonlinearProblem problem;
    Vector positive_solution;
    Labels2D labels;
};

PdeProblemData make_cubic_pde_problem(int n);

}  // namespace newtonlab::pde2d
