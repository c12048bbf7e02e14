#pragma once

#include <string>

#include "problem.hpp"

namespace newtonlab::algebraic {

/// Known zeros of a problem with a matching radius for classification.
struct RootCatalog {
    struct Entry {
        std::string name;
        Vector location;
    };
    std::vector<Entry> roots;
    double match_radius = 1e-3;

    /// Index of the root within match_radius of x (Euclidean), or -1.
    int classify(const Vector& x) const;

    /// Throws std::logic_error unless roots are pairwise separated by more
    /// than twice the matching radius.
    void check_separation() const;
};

// --- cubic polynomial z^3 - 2z - 4 on C, realized over R^2 ---------------

/// Real/imaginary parts of z^3 - 2z - 4 at z = x[0] + i x[1].
void cubic_residual(const Vector& x, Vector& out);

/// The complex derivative 3z^2 - 2 as the 2x2 real matrix [[a,-b],[b,a]].
void cubic_jacobian(const Vector& x, DenseMatrix& out);

NonlinearProblem make_cubic_problem();

/// The three zeros (2,0), (-1,1), (-1,-1).
RootCatalog cubic_roots();

// --- exp/sin benchmark system on [-1.5,1.5]^2 ----------------------------

/// F = (exp(x^2+y^2) - 3, x + y - sin(3(x+y))).
void expsin_residual(const Vector& x, Vector& out);

void expsin_jacobian(const Vector& x, DenseMatrix& out);

/// Distance from x to the union of straight lines where the Jacobian is
/// singular: {y=x} and {x+y=c : cos(3c)=1/3, line meets the box}.
double expsin_singular_distance(const Vector& x);

NonlinearProblem make_expsin_problem();

/// The six roots inside the box, found by reducing to the scalar equation
/// s = sin(3s) on the circle x^2+y^2 = ln 3, ordered by (x, y).
RootCatalog expsin_roots();

/// Half-width of the box the problem is posed on.
inline constexpr double kExpsinBoxHalfWidth = 1.5;

}  // namespace newtonlab::algebraic
