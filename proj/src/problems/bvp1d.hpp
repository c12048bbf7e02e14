#pragma once

#include <string>
#include <utility>

#include "problem.hpp"

namespace newtonlab::bvp1d {

/// Uniform mesh on [0,1] with n subintervals (n >= 2).
struct Mesh1D {
    int n = 2;
    double h() const { return 1.0 / n; }
    int interior_nodes() const { return n - 1; }
};

/// Piecewise linear function with homogeneous Dirichlet boundary; only the
/// n-1 interior nodal values are stored.
struct FemFunction {
    Mesh1D mesh;
    Vector interior_values;
};

// Galerkin residual/Jacobian of u'' + u^3 = 0 with P1 elements:
//   F_i = (stiffness u)_i - integral(u^3 phi_i),
//   J_ij = stiffness_ij - integral(3 u^2 phi_i phi_j),
// nonlinear terms by 3-point Gauss per element (exact for the cubic term).
void cubic_bvp_residual(const Mesh1D& mesh, const Vector& u, Vector& out);
void cubic_bvp_jacobian(const Mesh1D& mesh, const Vector& u, TridiagonalMatrix& out);

// Same discretization for u'' + e^{u+1} = 0 (the exponential is integrated
// with the same Gauss rule, which is approximate here).
void bratu_residual(const Mesh1D& mesh, const Vector& u, Vector& out);
void bratu_jacobian(const Mesh1D& mesh, const Vector& u, TridiagonalMatrix& out);

/// The tent function through (0,0), (node_index * h, alpha), (1,0), sampled
/// at the nodes; the basin plots identify it with the point (i h, alpha).
/// Throws std::out_of_range when the apex index leaves 1..n-1.
FemFunction hat_initial_guess(const Mesh1D& mesh, int node_index, double alpha);

/// Exact integral of a P1 function with zero boundary: h * sum of values.
double integral_value(const FemFunction& u);

/// The two roots of theta = sqrt(2e) * cosh(theta/4), by bisection to 1e-12.
/// first lies in (3.0, 3.1), second in (7.1, 7.2).
std::pair<double, double> bratu_theta_roots();

/// Closed-form solution u(x) = -2 ln(cosh((x-1/2) theta/2) / cosh(theta/4)).
double bratu_exact(double x, double theta);

/// Integral targets identifying the solutions of a 1-D problem.
struct SolutionLabels1D {
    std::vector<std::string> names;
    std::vector<double> integral_targets;
    double tol = 0.1;

    /// Index of the nearest target within tol, or -1.
    int classify(double integral) const;

    /// Throws std::logic_error unless targets are separated by more than 2*tol.
    void check_separation() const;
};

/// {u-, u0, u+} with targets {-pi/sqrt(2), 0, +pi/sqrt(2)}.
SolutionLabels1D cubic_bvp_labels();

/// {u1, u2} with targets = integrals of the closed-form solutions.
SolutionLabels1D bratu_labels();

/// Nearest-integral classification of a discrete function.
int classify_1d(const FemFunction& u, const SolutionLabels1D& labels);

NonlinearProblem make_cubic_bvp_problem(int n);
NonlinearProblem make_bratu_problem(int n);

}  // namespace newtonlab::bvp1d
