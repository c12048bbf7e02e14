#include "problems/bvp1d.hpp"

#include <cmath>
#include <stdexcept>

#include "rootfind.hpp"

namespace newtonlab::bvp1d {

namespace {

// 3-point Gauss-Legendre rule on [0,1]; exact through degree 5.
constexpr double kGaussOffset = 0.3872983346207417;  // sqrt(3/5)/2
constexpr std::array<double, 3> kGaussNodes = {0.5 - kGaussOffset, 0.5, 0.5 + kGaussOffset};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Assembles F_i = (stiffness u)_i - integral(w(u) phi_i) for a pointwise
// nonlinearity w.
template <typename W>
void assemble_residual(const Mesh1D& mesh, const Vector& u, W&& w, Vector& out) {
    const int n = mesh.n;
    const double h = mesh.h();
    const double inv_h = 1.0 / h;
    out.assign(n - 1, 0.0);

    auto value = [&](int node) { return (node >= 1 && node <= n - 1) ? u[node - 1] : 0.0; };

    for (int e = 0; e < n; ++e) {
        const double ul = value(e);
        const double ur = value(e + 1);
        // Stiffness contribution of this element: (1/h) [[1,-1],[-1,1]].
        const double flux = (ul - ur) * inv_h;
        if (e >= 1) out[e - 1] += flux;
        if (e + 1 <= n - 1) out[e] -= flux;
        for (int g = 0; g < 3; ++g) {
            const double xi = kGaussNodes[g];
            const double wq = kGaussWeights[g] * h;
            const double uq = ul * (1.0 - xi) + ur * xi;
            const double f = w(uq);
            if (e >= 1) out[e - 1] -= wq * f * (1.0 - xi);
            if (e + 1 <= n - 1) out[e] -= wq * f * xi;
        }
    }
}

// J_ij = stiffness_ij - integral(w'(u) phi_i phi_j) with the same rule.
template <typename DW>
void assemble_jacobian(const Mesh1D& mesh, const Vector& u, DW&& dw, TridiagonalMatrix& out) {
    const int n = mesh.n;
    const double h = mesh.h();
    const double inv_h = 1.0 / h;
    const int m = n - 1;
    out.lower.assign(m > 0 ? m - 1 : 0, 0.0);
    out.diag.assign(m, 0.0);
    out.upper.assign(m > 0 ? m - 1 : 0, 0.0);

    auto value = [&](int node) { return (node >= 1 && node <= n - 1) ? u[node - 1] : 0.0; };

    for (int e = 0; e < n; ++e) {
        const double ul = value(e);
        const double ur = value(e + 1);
        double m_ll = 0.0, m_lr = 0.0, m_rr = 0.0;
        for (int g = 0; g < 3; ++g) {
            const double xi = kGaussNodes[g];
            const double wq = kGaussWeights[g] * h;
            const double uq = ul * (1.0 - xi) + ur * xi;
            const double d = dw(uq);
            m_ll += wq * d * (1.0 - xi) * (1.0 - xi);
            m_lr += wq * d * (1.0 - xi) * xi;
            m_rr += wq * d * xi * xi;
        }
        const bool left_free = e >= 1;
        const bool right_free = e + 1 <= n - 1;
        if (left_free) out.diag[e - 1] += inv_h - m_ll;
        if (right_free) out.diag[e] += inv_h - m_rr;
        if (left_free && right_free) {
            out.upper[e - 1] += -inv_h - m_lr;
            out.lower[e - 1] += -inv_h - m_lr;
        }
    }
}

}  // namespace

void cubic_bvp_residual(const Mesh1D& mesh, const Vector& u, Vector& out) {
    assemble_residual(mesh, u, [](double v) { return v * v * v; }, out);
}

void cubic_bvp_jacobian(const Mesh1D& mesh, const Vector& u, TridiagonalMatrix& out) {
    assemble_jacobian(mesh, u, [](double v) { return 3.0 * v * v; }, out);
}

void bratu_residual(const Mesh1D& mesh, const Vector& u, Vector& out) {
    assemble_residual(mesh, u, [](double v) { return std::exp(v + 1.0); }, out);
}

void bratu_jacobian(const Mesh1D& mesh, const Vector& u, TridiagonalMatrix& out) {
    assemble_jacobian(mesh, u, [](double v) { return std::exp(v + 1.0); }, out);
}

FemFunction hat_initial_guess(const Mesh1D& mesh, int node_index, double alpha) {
    if (node_index < 1 || node_index > mesh.n - 1) {
        throw std::out_of_range("hat_initial_guess: node index outside 1..n-1");
    }
    // Piecewise linear through (0,0), (i h, alpha), (1,0): the tent-shaped
    // guess family the basin plots sample by apex position and height.
    const double apex = node_index * mesh.h();
    FemFunction f{mesh, Vector(mesh.n - 1, 0.0)};
    for (int i = 1; i < mesh.n; ++i) {
        const double x = i * mesh.h();
        f.interior_values[i - 1] =
            x <= apex ? alpha * x / apex : alpha * (1.0 - x) / (1.0 - apex);
    }
    return f;
}

double integral_value(const FemFunction& u) {
    double s = 0.0;
    for (double v : u.interior_values) s += v;
    return s * u.mesh.h();
}

std::pair<double, double> bratu_theta_roots() {
    const double c = std::sqrt(2.0 * std::exp(1.0));
    auto g = [c](double theta) { return theta - c * std::cosh(0.25 * theta); };
    const double theta1 = bisect(g, 0.0, 5.0, 1e-12);
    const double theta2 = bisect(g, 5.0, 20.0, 1e-12);
    return {theta1, theta2};
}

double bratu_exact(double x, double theta) {
    return -2.0 * std::log(std::cosh((x - 0.5) * 0.5 * theta) / std::cosh(0.25 * theta));
}

int SolutionLabels1D::classify(double integral) const {
    int best = -1;
    double best_dist = tol;
    for (size_t i = 0; i < integral_targets.size(); ++i) {
        const double d = std::abs(integral - integral_targets[i]);
        if (d <= best_dist) {
            best_dist = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

void SolutionLabels1D::check_separation() const {
    for (size_t i = 0; i < integral_targets.size(); ++i) {
        for (size_t j = i + 1; j < integral_targets.size(); ++j) {
            if (std::abs(integral_targets[i] - integral_targets[j]) <= 2.0 * tol) {
                throw std::logic_error("solution labels closer than twice the tolerance");
            }
        }
    }
}

SolutionLabels1D cubic_bvp_labels() {
    const double target = M_PI / std::sqrt(2.0);
    SolutionLabels1D labels;
    labels.names = {"u-", "u0", "u+"};
    labels.integral_targets = {-target, 0.0, target};
    labels.tol = 0.1;
    labels.check_separation();
    return labels;
}

SolutionLabels1D bratu_labels() {
    const auto [theta1, theta2] = bratu_theta_roots();
    SolutionLabels1D labels;
    labels.names = {"u1", "u2"};
    labels.tol = 0.1;
    for (double theta : {theta1, theta2}) {
        labels.integral_targets.push_back(
            composite_simpson([theta](double x) { return bratu_exact(x, theta); }, 0.0, 1.0, 4096));
    }
    labels.check_separation();
    return labels;
}

int classify_1d(const FemFunction& u, const SolutionLabels1D& labels) {
    return labels.classify(integral_value(u));
}

namespace {

NonlinearProblem make_fem_problem(int n, void (*residual)(const Mesh1D&, const Vector&, Vector&),
                                  void (*jacobian)(const Mesh1D&, const Vector&,
                                                   TridiagonalMatrix&)) {
    if (n < 2) throw std::invalid_argument("mesh needs at least 2 subintervals");
    const Mesh1D mesh{n};
    NonlinearProblem p;
    p.dim = n - 1;
    p.residual = [mesh, residual](const Vector& u, Vector& out) { residual(mesh, u, out); };
    p.jacobian = [mesh, jacobian](const Vector& u, Jacobian& jac) {
        jacobian(mesh, u, ensure_alternative<TridiagonalMatrix>(jac));
    };
    p.in_domain = [](const Vector& u) { return all_finite(u); };
    // Coefficient (Euclidean) norm: the step controller, the convergence
    // threshold, and the residual history all measure nodal vectors with it.
    p.norm = [](const Vector& v) { return euclidean_norm(v); };
    return p;
}

}  // namespace

NonlinearProblem make_cubic_bvp_problem(int n) {
    return make_fem_problem(n, cubic_bvp_residual, cubic_bvp_jacobian);
}

NonlinearProblem make_bratu_problem(int n) {
    return make_fem_problem(n, bratu_residual, bratu_jacobian);
}

}  // namespace newtonlab::bvp1d
