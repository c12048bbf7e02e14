// Acceptance suite. Usage: newtonlab_acceptance <criterion 1..11>
// Each criterion prints exactly one PASS/FAIL line and exits nonzero on FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "basin.hpp"
#include "problems/bvp1d.hpp"
#include "problems/pde2d.hpp"
#include "registry.hpp"
#include "solver.hpp"

using namespace newtonlab;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---- 1: step formula ----------------------------------------------------

void criterion_step_formula(Check& c) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> log_tau(-6.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    for (int k = 0; k < 1000; ++k) {
        const double tau = std::pow(10.0, log_tau(rng));
        double nrm;
        const int shape = k % 4;
        if (shape == 0) {
            nrm = 0.0;
        } else if (shape == 1) {
            nrm = 2.0 * tau;  // exact boundary of the min
        } else if (shape == 2) {
            nrm = 4.0 * tau * uniform(rng);  // straddles the boundary
        } else {
            nrm = std::pow(10.0, -8.0 + 10.0 * uniform(rng));
        }

        const double got = adaptive_step(tau, nrm);
        const long double expected =
            nrm == 0.0 ? 1.0L
                       : std::min(std::sqrt(2.0L * static_cast<long double>(tau) / nrm), 1.0L);
        c.require(std::abs(got - static_cast<double>(expected)) <= 1e-12,
                  "formula mismatch at tau=" + format(tau) + " nrm=" + format(nrm));
        c.require((got == 1.0) == (nrm <= 2.0 * tau),
                  "full-step boundary violated at tau=" + format(tau) + " nrm=" + format(nrm));
        c.require(got > 0.0 && got <= 1.0, "step outside (0,1]");
        if (!c.ok) return;
    }
}

// ---- 2: exponential decay of the reference flow --------------------------

void criterion_flow_decay(Check& c) {
    const auto info = make_problem("cubic");
    const FlowTrajectory traj =
        flow(info->problem, Vector{0.08, 0.55}, FlowConfig{1e-3, 5.0, 1e-300});
    c.require(traj.status == SolveStatus::MaxIters, "flow should run to t = 5");

    const double r0 = traj.residual_norms.front();
    double worst_low = 1.0, worst_high = 1.0;
    for (size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] > 5.0) break;
        const double ratio = traj.residual_norms[k] / r0;
        const double law = std::exp(-traj.times[k]);
        worst_low = std::min(worst_low, ratio / law);
        worst_high = std::max(worst_high, ratio / law);
    }
    c.require(worst_low >= 0.98 && worst_high <= 1.02,
              "decay ratio range [" + format(worst_low) + ", " + format(worst_high) +
                  "] exceeds [0.98, 1.02]");
}

// ---- 3 / 4: desk-scale performance tables -------------------------------

struct TablePair {
    PerformanceTable classical;
    PerformanceTable adaptive;
    double incorrect_classical = 0.0;
    double incorrect_adaptive = 0.0;
};

double incorrect_fraction(const BasinGrid& grid) {
    long incorrect = 0, defined = 0;
    for (const CellRecord& cell : grid.cells) {
        if (!cell.oracle_defined) continue;
        ++defined;
        if (cell.status == SolveStatus::Converged && cell.label >= 0 && !cell.correct) {
            ++incorrect;
        }
    }
    return defined > 0 ? static_cast<double>(incorrect) / defined : 0.0;
}

TablePair run_table_pair(const ProblemInfo& info, const std::array<double, 4>& rect, int res,
                         double tau) {
    SamplingPlan plan;
    plan.rect = rect;
    plan.nx = plan.ny = res;
    plan.solver = info.default_solver;
    plan.oracle = info.default_oracle;
    plan.threads = 0;

    SolverConfig classical = info.default_solver;
    classical.mode = StepMode::Classical;
    SolverConfig adaptive = info.default_solver;
    adaptive.mode = StepMode::Adaptive;
    adaptive.tau = tau;

    const SolverConfig modes[2] = {classical, adaptive};
    const auto grids = sample_basin_multi(info, plan, modes);

    TablePair out;
    out.classical = aggregate(grids[0]);
    out.adaptive = aggregate(grids[1]);
    out.incorrect_classical = incorrect_fraction(grids[0]);
    out.incorrect_adaptive = incorrect_fraction(grids[1]);
    return out;
}

void criterion_table_cubic(Check& c) {
    const auto info = make_problem("cubic");
    const TablePair t = run_table_pair(*info, {-5.0, 5.0, -5.0, 5.0}, 201, 0.1);

    c.require(std::abs(t.classical.pct_convergent - 87.7) <= 4.0,
              "classical pct " + format(t.classical.pct_convergent) + " not within 87.7 +- 4");
    c.require(std::abs(t.adaptive.pct_convergent - 96.5) <= 3.0,
              "adaptive pct " + format(t.adaptive.pct_convergent) + " not within 96.5 +- 3");
    c.require(t.adaptive.avg_rate >= 1.7 && t.adaptive.avg_rate <= 2.0,
              "adaptive rate " + format(t.adaptive.avg_rate) + " outside [1.7, 2.0]");
    c.require(t.adaptive.avg_iterations <= 18.0,
              "adaptive iterations " + format(t.adaptive.avg_iterations) + " above 18");
    c.require(t.incorrect_adaptive < t.incorrect_classical,
              "wrong-zero fraction not reduced (" + format(t.incorrect_adaptive) +
                  " vs " + format(t.incorrect_classical) + ")");
}

void criterion_table_expsin(Check& c) {
    const auto info = make_problem("expsin");
    const TablePair t = run_table_pair(*info, {0.0, 1.5, -1.5, 0.0}, 100, 0.1);

    c.require(std::abs(t.classical.pct_convergent - 81.0) <= 5.0,
              "classical pct " + format(t.classical.pct_convergent) + " not within 81 +- 5");
    c.require(std::abs(t.adaptive.pct_convergent - 97.0) <= 3.0,
              "adaptive pct " + format(t.adaptive.pct_convergent) + " not within 97 +- 3");
    c.require(t.adaptive.avg_rate >= 1.7 && t.adaptive.avg_rate <= 2.0,
              "adaptive rate " + format(t.adaptive.avg_rate) + " outside [1.7, 2.0]");
    c.require(t.adaptive.avg_iterations <= 9.0,
              "adaptive iterations " + format(t.adaptive.avg_iterations) + " above 9");
    c.require(t.incorrect_adaptive < t.incorrect_classical,
              "wrong-zero fraction not reduced (" + format(t.incorrect_adaptive) +
                  " vs " + format(t.incorrect_classical) + ")");
}

// ---- 5: integral accuracy and mesh convergence ---------------------------

double converged_integral(int n, Check& c) {
    const NonlinearProblem p = bvp1d::make_cubic_bvp_problem(n);
    const bvp1d::Mesh1D mesh{n};
    const bvp1d::FemFunction seed = bvp1d::hat_initial_guess(mesh, n / 2, 3.0);
    const SolveTrace trace = solve(p, seed.interior_values, SolverConfig::adaptive(0.1, 200));
    c.require(trace.status == SolveStatus::Converged,
              "n=" + std::to_string(n) + " did not converge");
    return bvp1d::integral_value({mesh, trace.final_state()});
}

void criterion_bvp_accuracy(Check& c) {
    const double target = M_PI / std::sqrt(2.0);

    const double i100 = converged_integral(100, c);
    c.require(std::abs(i100 - target) <= 1e-3,
              "integral error " + format(std::abs(i100 - target)) + " above 1e-3");

    std::vector<double> log_h, log_err;
    for (int n : {25, 50, 100, 200}) {
        const double integral = converged_integral(n, c);
        log_h.push_back(std::log(1.0 / n));
        log_err.push_back(std::log(std::abs(integral - target)));
    }
    if (!c.ok) return;
    // Least squares slope of ln(err) against ln(h).
    double mx = 0, my = 0;
    for (size_t i = 0; i < log_h.size(); ++i) {
        mx += log_h[i];
        my += log_err[i];
    }
    mx /= log_h.size();
    my /= log_h.size();
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < log_h.size(); ++i) {
        sxx += (log_h[i] - mx) * (log_h[i] - mx);
        sxy += (log_h[i] - mx) * (log_err[i] - my);
    }
    const double order = sxy / sxx;
    c.require(order >= 1.8, "observed order " + format(order) + " below 1.8");
}

// ---- 6: the detour scenario ----------------------------------------------

void criterion_bvp_detour(Check& c) {
    const auto info = make_problem("cubic-bvp:n=100");
    const Vector x0 = info->guess_chart(0.5, -2.405);

    SolverConfig adaptive = info->default_solver;
    adaptive.mode = StepMode::Adaptive;
    adaptive.tau = 0.5;
    SolverConfig classical = info->default_solver;

    const SolveTrace adaptive_trace = solve(info->problem, x0, adaptive);
    const SolveTrace classical_trace = solve(info->problem, x0, classical);
    c.require(adaptive_trace.status == SolveStatus::Converged, "adaptive run did not converge");
    c.require(classical_trace.status == SolveStatus::Converged, "classical run did not converge");
    if (!c.ok) return;

    const int label_adaptive = info->classify(adaptive_trace.final_state());
    const int label_classical = info->classify(classical_trace.final_state());
    const FlowEndpoint reference = flow_endpoint(info->problem, x0, info->default_oracle);
    c.require(reference.reached_residual_stop(), "reference flow did not settle");
    if (!c.ok) return;
    const int label_reference = info->classify(reference.state);

    c.require(label_adaptive >= 0 && info->labels[label_adaptive] == "u0",
              "adaptive label is not u0");
    c.require(label_reference >= 0 && info->labels[label_reference] == "u0",
              "reference label is not u0");
    c.require(label_classical >= 0 && info->labels[label_classical] == "u+",
              "classical label is not u+");
}

// ---- 7: Bratu roots and FEM accuracy --------------------------------------

void criterion_bratu(Check& c) {
    const auto [theta1, theta2] = bvp1d::bratu_theta_roots();
    const double coeff = std::sqrt(2.0 * std::exp(1.0));
    c.require(std::abs(theta1 - coeff * std::cosh(theta1 / 4.0)) <= 1e-10, "theta1 residual");
    c.require(std::abs(theta2 - coeff * std::cosh(theta2 / 4.0)) <= 1e-10, "theta2 residual");
    c.require(theta1 > 3.0 && theta1 < 3.1, "theta1 outside (3.0, 3.1)");
    c.require(theta2 > 7.1 && theta2 < 7.2, "theta2 outside (7.1, 7.2)");

    for (int n : {50, 100}) {
        const NonlinearProblem p = bvp1d::make_bratu_problem(n);
        const bvp1d::Mesh1D mesh{n};
        for (double theta : {theta1, theta2}) {
            Vector seed(n - 1);
            for (int i = 1; i < n; ++i) seed[i - 1] = bvp1d::bratu_exact(i * mesh.h(), theta);
            const SolveTrace trace = solve(p, seed, SolverConfig::classical(100));
            c.require(trace.status == SolveStatus::Converged,
                      "FEM solve n=" + std::to_string(n) + " failed");
            if (trace.status != SolveStatus::Converged) continue;
            double sup = 0.0;
            for (int i = 1; i < n; ++i) {
                sup = std::max(sup, std::abs(trace.final_state()[i - 1] -
                                             bvp1d::bratu_exact(i * mesh.h(), theta)));
            }
            c.require(sup <= 5.0 / (static_cast<double>(n) * n),
                      "sup error " + format(sup) + " above 5/n^2 at n=" + std::to_string(n));
        }
    }
}

// ---- 8: qualitative 1-D tables -------------------------------------------

void criterion_bvp_tables(Check& c) {
    {
        const auto info = make_problem("cubic-bvp:n=100");
        const TablePair t = run_table_pair(*info, {0.0, 1.0, -4.0, 4.0}, 100, 0.1);
        c.require(t.adaptive.pct_convergent >= t.classical.pct_convergent + 10.0,
                  "first problem: adaptive " + format(t.adaptive.pct_convergent) +
                      " vs classical " + format(t.classical.pct_convergent));
    }
    {
        const auto info = make_problem("bratu:n=100");
        const TablePair t = run_table_pair(*info, {0.0, 1.0, 0.0, 3.0}, 100, 0.1);
        c.require(t.adaptive.pct_convergent >= t.classical.pct_convergent + 10.0,
                  "second problem: adaptive " + format(t.adaptive.pct_convergent) +
                      " vs classical " + format(t.classical.pct_convergent));
    }
}

// ---- 9: 2-D properties -----------------------------------------------------

void criterion_pde(Check& c) {
    const pde2d::PdeProblemData data = pde2d::make_cubic_pde_problem(32);
    const pde2d::Grid2D grid = data.grid;
    const int m = grid.n - 1;

    bool positive = true;
    for (double v : data.positive_solution) positive = positive && v > 0.0;
    c.require(positive, "positive solution has a non-positive node");

    double asym = 0.0;
    for (int iy = 1; iy <= m; ++iy) {
        for (int ix = 1; ix <= m; ++ix) {
            const double v = data.positive_solution[grid.index(ix, iy)];
            asym = std::max(asym, std::abs(v - data.positive_solution[grid.index(grid.n - ix, iy)]));
            asym = std::max(asym, std::abs(v - data.positive_solution[grid.index(ix, grid.n - iy)]));
            asym = std::max(asym, std::abs(v - data.positive_solution[grid.index(iy, ix)]));
        }
    }
    c.require(asym <= 1e-6, "reflection asymmetry " + format(asym) + " above 1e-6");

    // Exact odd symmetry of traces under negated initial guesses.
    const pde2d::GridFunction2D up = pde2d::hill_initial_guess(grid, {11, 19}, 5.0);
    Vector down = up.interior_values;
    for (double& v : down) v = -v;
    const SolverConfig cfg = SolverConfig::adaptive(0.1, 200);
    const SolveTrace a = solve(data.problem, up.interior_values, cfg);
    const SolveTrace b = solve(data.problem, down, cfg);
    bool mirrored = a.iterates.size() == b.iterates.size() && a.status == b.status;
    for (size_t k = 0; mirrored && k < a.iterates.size(); ++k) {
        for (size_t i = 0; i < a.iterates[k].size(); ++i) {
            if (a.iterates[k][i] != -b.iterates[k][i]) {
                mirrored = false;
                break;
            }
        }
    }
    c.require(mirrored, "negated traces are not exact mirror images");

    // Center-plane basin slice: the step controller reduces wrong-zero cells.
    const auto info = make_problem("cubic-pde:n=32");
    SamplingPlan plan;
    plan.rect = {0.0, 1.0, -8.0, 8.0};
    plan.nx = plan.ny = 64;
    plan.solver = info->default_solver;
    plan.oracle = info->default_oracle;
    plan.threads = 0;

    SolverConfig classical = info->default_solver;
    SolverConfig adaptive = info->default_solver;
    adaptive.mode = StepMode::Adaptive;
    adaptive.tau = 0.1;
    const SolverConfig modes[2] = {classical, adaptive};
    const auto grids = sample_basin_multi(*info, plan, modes);
    const double wrong_classical = incorrect_fraction(grids[0]);
    const double wrong_adaptive = incorrect_fraction(grids[1]);
    c.require(wrong_adaptive < wrong_classical,
              "wrong-zero fraction not reduced (" + format(wrong_adaptive) + " vs " +
                  format(wrong_classical) + ")");
}

// ---- 10: residual monotonicity under small tolerances ---------------------

void criterion_residual_monotone(Check& c) {
    const auto info = make_problem("expsin");
    SolverConfig cfg = info->default_solver;
    cfg.mode = StepMode::Adaptive;
    cfg.tau = 1e-3;
    cfg.max_iters = 300;

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);

    int qualifying = 0;
    int draws = 0;
    while (qualifying < 500 && draws < 5000) {
        ++draws;
        const Vector x0{coord(rng), coord(rng)};
        const SolveTrace trace = solve(info->problem, x0, cfg);
        if (trace.status != SolveStatus::Converged && trace.status != SolveStatus::MaxIters) {
            continue;  // left the domain or hit a singularity
        }
        ++qualifying;
        for (size_t k = 1; k < trace.residual_norms.size(); ++k) {
            if (trace.residual_norms[k] > trace.residual_norms[k - 1] * (1.0 + 1e-12)) {
                c.require(false, "residual increased at step " + std::to_string(k) +
                                     " from start (" + format(x0[0]) + ", " + format(x0[1]) + ")");
                return;
            }
        }
    }
    c.require(qualifying >= 500,
              "only " + std::to_string(qualifying) + " of 500 traces stayed in domain");
}

// ---- 11: determinism through the command line -----------------------------

void criterion_determinism(Check& c) {
    const char* cli = std::getenv("NEWTONLAB_CLI");
    c.require(cli != nullptr, "NEWTONLAB_CLI is not set");
    if (cli == nullptr) return;

    auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    };
    auto run = [&](int threads, const std::string& tag) {
        std::ostringstream cmd;
        cmd << '"' << cli << '"'
            << " basin --problem cubic --rect -5,5,-5,5 --res 64,64 --mode adaptive:0.1"
            << " --threads " << threads << " --out det_" << tag << ".ppm --stats det_" << tag
            << ".csv > det_" << tag << ".log 2>&1";
        return std::system(cmd.str().c_str());
    };

    c.require(run(1, "t1") == 0, "single-thread run failed");
    c.require(run(8, "t8a") == 0, "eight-thread run failed");
    c.require(run(8, "t8b") == 0, "repeated eight-thread run failed");
    if (!c.ok) return;

    const std::string ppm1 = slurp("det_t1.ppm");
    const std::string ppm8a = slurp("det_t8a.ppm");
    const std::string ppm8b = slurp("det_t8b.ppm");
    c.require(!ppm1.empty(), "empty image output");
    c.require(ppm1 == ppm8a, "PPM differs between 1 and 8 threads");
    c.require(ppm8a == ppm8b, "PPM differs between repeated runs");
    c.require(slurp("det_t1.csv") == slurp("det_t8a.csv"), "CSV differs between thread counts");
    c.require(slurp("det_t8a.csv") == slurp("det_t8b.csv"), "CSV differs between repeated runs");

    for (const char* tag : {"t1", "t8a", "t8b"}) {
        std::remove((std::string("det_") + tag + ".ppm").c_str());
        std::remove((std::string("det_") + tag + ".csv").c_str());
        std::remove((std::string("det_") + tag + ".log").c_str());
    }
}

struct Criterion {
    int number;
    const char* name;
    void (*run)(Check&);
    double limit_seconds;
};

const Criterion kCriteria[] = {
    {1, "prediction step size formula", criterion_step_formula, 1.0},
    {2, "reference flow follows the exponential decay law", criterion_flow_decay, 1.0},
    {3, "cubic performance table at desk scale", criterion_table_cubic, 120.0},
    {4, "exp/sin performance table at desk scale", criterion_table_expsin, 120.0},
    {5, "1-D integral accuracy and mesh convergence", criterion_bvp_accuracy, 30.0},
    {6, "oversized first update takes the classical run to u+", criterion_bvp_detour, 10.0},
    {7, "Bratu roots and FEM accuracy", criterion_bratu, 30.0},
    {8, "step control widens 1-D convergence by 10 points", criterion_bvp_tables, 600.0},
    {9, "2-D positivity, symmetry, and wrong-zero reduction", criterion_pde, 600.0},
    {10, "residual norms decrease monotonically at small tau", criterion_residual_monotone, 60.0},
    {11, "byte-identical CLI outputs across thread counts", criterion_determinism, 120.0},
};

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <criterion 1..11>\n", argv[0]);
        return 2;
    }
    const int wanted = std::atoi(argv[1]);

    for (const Criterion& criterion : kCriteria) {
        if (criterion.number != wanted) continue;
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.limit_seconds) {
            check.require(false, "runtime " + format(elapsed) + "s exceeds " +
                                     format(criterion.limit_seconds) + "s");
        }

        std::printf("%s  %2d  %s (%.1fs)%s%s\n", check.ok ? "PASS" : "FAIL", criterion.number,
                    criterion.name, elapsed, check.detail.empty() ? "" : " — ",
                    check.detail.c_str());
        return check.ok ? 0 : 1;
    }
    std::fprintf(stderr, "unknown criterion %d\n", wanted);
    return 2;
}
