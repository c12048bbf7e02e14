#include "problems/pde2d.hpp"

#include <cmath>
#include <stdexcept>

namespace newtonlab::pde2d {

void pde_residual(const Grid2D& grid, const Vector& u, Vector& out) {
    const int m = grid.n - 1;
    const double h2 = grid.h() * grid.h();
    out.resize(static_cast<size_t>(m) * m);

    auto value = [&](int ix, int iy) -> double {
        if (ix < 1 || ix > m || iy < 1 || iy > m) return 0.0;
        return u[grid.index(ix, iy)];
    };

    for (int iy = 1; iy <= m; ++iy) {
        for (int ix = 1; ix <= m; ++ix) {
            const double up = u[grid.index(ix, iy)];
            const double lap = 4.0 * up - value(ix - 1, iy) - value(ix + 1, iy) -
                               value(ix, iy - 1) - value(ix, iy + 1);
            out[grid.index(ix, iy)] = lap - h2 * up * up * up;
        }
    }
}

void pde_jacobian(const Grid2D& grid, const Vector& u, SparseCsrMatrix& out) {
    const int m = grid.n - 1;
    const int size = m * m;
    const double h2 = grid.h() * grid.h();

    out.n = size;
    out.row_offsets.resize(size + 1);
    out.cols.clear();
    out.values.clear();
    out.cols.reserve(static_cast<size_t>(size) * 5);
    out.values.reserve(static_cast<size_t>(size) * 5);

    out.row_offsets[0] = 0;
    for (int iy = 1; iy <= m; ++iy) {
        for (int ix = 1; ix <= m; ++ix) {
            const int row = grid.index(ix, iy);
            const double up = u[row];
            // Columns in increasing order: S, W, center, E, N.
            if (iy > 1) {
                out.cols.push_back(grid.index(ix, iy - 1));
                out.values.push_back(-1.0);
            }
            if (ix > 1) {
                out.cols.push_back(grid.index(ix - 1, iy));
                out.values.push_back(-1.0);
            }
            out.cols.push_back(row);
            out.values.push_back(4.0 - 3.0 * h2 * up * up);
            if (ix < m) {
                out.cols.push_back(grid.index(ix + 1, iy));
                out.values.push_back(-1.0);
            }
            if (iy < m) {
                out.cols.push_back(grid.index(ix, iy + 1));
                out.values.push_back(-1.0);
            }
            out.row_offsets[row + 1] = static_cast<int>(out.cols.size());
        }
    }
}

double hill_function(const HillParams& p, int n, double x, double y) {
    const double eps = 1.0 / n;
    return std::pow(x / (x + eps), p.k) * std::pow(y / (y + eps), p.j) *
           std::pow((1.0 - x) / (1.0 - x + eps), n - p.k) *
           std::pow((1.0 - y) / (1.0 - y + eps), n - p.j);
}

GridFunction2D hill_initial_guess(const Grid2D& grid, const HillParams& p, double amplitude) {
    if (p.k < 1 || p.k > grid.n - 1 || p.j < 1 || p.j > grid.n - 1) {
        throw std::out_of_range("hill exponents must lie in 1..n-1");
    }
    const int m = grid.n - 1;
    const double h = grid.h();
    GridFunction2D f{grid, Vector(static_cast<size_t>(m) * m, 0.0)};

    double sup = 0.0;
    for (int iy = 1; iy <= m; ++iy) {
        for (int ix = 1; ix <= m; ++ix) {
            const double v = hill_function(p, grid.n, ix * h, iy * h);
            f.interior_values[grid.index(ix, iy)] = v;
            sup = std::max(sup, std::abs(v));
        }
    }
    // sup-norm approximated by the maximum over grid nodes
    const double scale = (sup > 0.0) ? amplitude / sup : 0.0;
    for (double& v : f.interior_values) v *= scale;
    return f;
}

double grid_integral(const GridFunction2D& u) {
    double s = 0.0;
    for (double v : u.interior_values) s += v;
    return s * u.grid.h() * u.grid.h();
}

int Labels2D::classify(double integral) const {
    const double targets[3] = {-positive_integral, 0.0, positive_integral};
    int best = -1;
    double best_dist = tol;
    for (int i = 0; i < 3; ++i) {
        const double d = std::abs(integral - targets[i]);
        if (d <= best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

int classify_2d(const GridFunction2D& u, const Labels2D& labels) {
    return labels.classify(grid_integral(u));
}

PdeProblemData make_cubic_pde_problem(int n) {
    if (n < 3) throw std::invalid_argument("grid needs at least 3 subintervals per side");
    const Grid2D grid{n};

    PdeProblemData data;
    data.grid = grid;
    data.problem.dim = grid.interior_count();
    data.problem.residual = [grid](const Vector& u, Vector& out) { pde_residual(grid, u, out); };
    data.problem.jacobian = [grid](const Vector& u, Jacobian& jac) {
        pde_jacobian(grid, u, ensure_alternative<SparseCsrMatrix>(jac));
    };
    data.problem.in_domain = [](const Vector& u) { return all_finite(u); };
    data.problem.norm = [](const Vector& v) { return euclidean_norm(v); };

    // Reference positive solution: follow the flow from a centered positive
    // hill into the positive basin, then polish with full Newton steps.
    const GridFunction2D seed = hill_initial_guess(grid, {n / 2, n / 2}, 4.0);
    FlowConfig flow_cfg;
    flow_cfg.dt = 1e-2;
    flow_cfg.t_max = 60.0;
    flow_cfg.residual_stop = 1e-6;
    const FlowEndpoint ep = flow_endpoint(data.problem, seed.interior_values, flow_cfg);
    if (!ep.reached_residual_stop()) {
        throw std::runtime_error("positive reference solution: flow did not settle");
    }
    SolverConfig polish = SolverConfig::classical(50);
    polish.update_tol = 1e-12;
    const SolveTrace polished = solve(data.problem, ep.state, polish);
    if (polished.status != SolveStatus::Converged) {
        throw std::runtime_error("positive reference solution: polish did not converge");
    }
    data.positive_solution = polished.final_state();
    for (double v : data.positive_solution) {
        if (!(v > 0.0)) {
            throw std::runtime_error("positive reference solution has a non-positive node");
        }
    }
    data.labels.positive_integral =
        grid_integral(GridFunction2D{grid, data.positive_solution});
    data.labels.tol = 0.1;
    return data;
}

}  // namespace newtonlab::pde2d
