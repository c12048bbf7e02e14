#include "problems/algebraic.hpp"

#include <algorithm>
#include <cmath>

#include "rootfind.hpp"

namespace newtonlab::algebraic {

int RootCatalog::classify(const Vector& x) const {
    for (size_t i = 0; i < roots.size(); ++i) {
        const Vector& r = roots[i].location;
        double d2 = 0.0;
        for (size_t j = 0; j < r.size(); ++j) {
            const double d = x[j] - r[j];
            d2 += d * d;
        }
        if (std::sqrt(d2) <= match_radius) return static_cast<int>(i);
    }
    return -1;
}

void RootCatalog::check_separation() const {
    for (size_t i = 0; i < roots.size(); ++i) {
        for (size_t j = i + 1; j < roots.size(); ++j) {
            double d2 = 0.0;
            for (size_t k = 0; k < roots[i].location.size(); ++k) {
                const double d = roots[i].location[k] - roots[j].location[k];
                d2 += d * d;
            }
            if (std::sqrt(d2) <= 2.0 * match_radius) {
                throw std::logic_error("root catalog entries closer than twice the match radius");
            }
        }
    }
}

void cubic_residual(const Vector& x, Vector& out) {
    out.resize(2);
    const double a = x[0], b = x[1];
    const double u = a * a - b * b;  // Re z^2
    const double v = 2.0 * a * b;    // Im z^2
    out[0] = u * a - v * b - 2.0 * a - 4.0;
    out[1] = u * b + v * a - 2.0 * b;
}

void cubic_jacobian(const Vector& x, DenseMatrix& out) {
    out.rows = 2;
    out.cols = 2;
    out.entries.resize(4);
    const double a = 3.0 * (x[0] * x[0] - x[1] * x[1]) - 2.0;
    const double b = 6.0 * x[0] * x[1];
    out.entries[0] = a;
    out.entries[1] = -b;
    out.entries[2] = b;
    out.entries[3] = a;
}

NonlinearProblem make_cubic_problem() {
    NonlinearProblem p;
    p.dim = 2;
    p.residual = cubic_residual;
    p.jacobian = [](const Vector& x, Jacobian& jac) {
        cubic_jacobian(x, ensure_alternative<DenseMatrix>(jac));
    };
    p.in_domain = [](const Vector& x) { return all_finite(x); };
    p.norm = [](const Vector& v) { return euclidean_norm(v); };
    return p;
}

RootCatalog cubic_roots() {
    RootCatalog cat;
    cat.roots = {{"(-1,-1)", {-1.0, -1.0}},
                 {"(-1,1)", {-1.0, 1.0}},
                 {"(2,0)", {2.0, 0.0}}};
    cat.match_radius = 1e-3;
    cat.check_separation();
    return cat;
}

void expsin_residual(const Vector& x, Vector& out) {
    out.resize(2);
    const double s = x[0] + x[1];
    out[0] = std::exp(x[0] * x[0] + x[1] * x[1]) - 3.0;
    out[1] = s - std::sin(3.0 * s);
}

void expsin_jacobian(const Vector& x, DenseMatrix& out) {
    out.rows = 2;
    out.cols = 2;
    out.entries.resize(4);
    const double e = std::exp(x[0] * x[0] + x[1] * x[1]);
    const double c = 1.0 - 3.0 * std::cos(3.0 * (x[0] + x[1]));
    out.entries[0] = 2.0 * x[0] * e;
    out.entries[1] = 2.0 * x[1] * e;
    out.entries[2] = c;
    out.entries[3] = c;
}

double expsin_singular_distance(const Vector& x) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double best = std::abs(x[0] - x[1]) * inv_sqrt2;  // line y = x

    // Lines x + y = c with cos(3c) = 1/3 that meet the box (|c| <= 3).
    const double s0 = std::acos(1.0 / 3.0) / 3.0;
    const double period = 2.0 * M_PI / 3.0;
    const double s = x[0] + x[1];
    for (double base : {s0, -s0}) {
        for (int k = -2; k <= 2; ++k) {
            const double c = base + period * k;
            if (std::abs(c) > 2.0 * kExpsinBoxHalfWidth) continue;
            best = std::min(best, std::abs(s - c) * inv_sqrt2);
        }
    }
    return best;
}

NonlinearProblem make_expsin_problem() {
    NonlinearProblem p;
    p.dim = 2;
    p.residual = expsin_residual;
    p.jacobian = [](const Vector& x, Jacobian& jac) {
        expsin_jacobian(x, ensure_alternative<DenseMatrix>(jac));
    };
    p.in_domain = [](const Vector& x) {
        return all_finite(x) && std::abs(x[0]) <= kExpsinBoxHalfWidth &&
               std::abs(x[1]) <= kExpsinBoxHalfWidth;
    };
    p.norm = [](const Vector& v) { return euclidean_norm(v); };
    return p;
}

RootCatalog expsin_roots() {
    // Roots satisfy x^2 + y^2 = ln 3 and s = x + y with sin(3s) = s,
    // so s in {0, +s*, -s*} with s* found by bisection.
    const double r2 = std::log(3.0);
    const double s_star = bisect([](double s) { return s - std::sin(3.0 * s); }, 0.05,
                                 std::sqrt(2.0 * r2), 1e-14);

    RootCatalog cat;
    cat.match_radius = 1e-3;
    for (double s : {0.0, s_star, -s_star}) {
        const double disc = 2.0 * r2 - s * s;
        const double root = std::sqrt(disc);
        for (double sign : {1.0, -1.0}) {
            const double x = 0.5 * (s + sign * root);
            const double y = s - x;
            if (std::abs(x) <= kExpsinBoxHalfWidth && std::abs(y) <= kExpsinBoxHalfWidth) {
                char name[32];
                std::snprintf(name, sizeof(name), "(%.4f,%.4f)", x, y);
                cat.roots.push_back({name, {x, y}});
            }
        }
    }
    std::sort(cat.roots.begin(), cat.roots.end(), [](const auto& a, const auto& b) {
        if (a.location[0] != b.location[0]) return a.location[0] < b.location[0];
        return a.location[1] < b.location[1];
    });
    cat.check_separation();
    return cat;
}

}  // namespace newtonlab::algebraic
