#include "export.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "basin.hpp"
#include "trace_json.hpp"

namespace newtonlab {

std::string export_direction_field(const ProblemInfo& info, const std::array<double, 4>& rect,
                                   int nx, int ny, FieldKind kind) {
    if (info.problem.dim != 2) {
        throw std::invalid_argument("direction fields are defined for 2-dimensional problems");
    }
    if (nx < 2 || ny < 2) throw std::invalid_argument("field resolution must be at least 2");

    std::string out = "x,y,vx,vy,magnitude,flag\n";
    char line[256];
    Vector x(2), v;

    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            x[0] = cell_coordinate(rect[0], rect[1], ix, nx);
            x[1] = cell_coordinate(rect[2], rect[3], iy, ny);

            bool singular = false;
            if (kind == FieldKind::Raw) {
                info.problem.residual(x, v);
            } else {
                try {
                    v = newton_raphson_transform(info.problem, x);
                } catch (const SingularMatrixError&) {
                    singular = true;
                } catch (const NoConvergenceError&) {
                    singular = true;
                } catch (const OutOfDomainError&) {
                    singular = true;
                }
            }

            if (singular) {
                std::snprintf(line, sizeof(line), "%.12g,%.12g,,,,singular\n", x[0], x[1]);
            } else {
                const double mag = euclidean_norm(v);
                if (mag < 1e-12) {
                    std::snprintf(line, sizeof(line), "%.12g,%.12g,0,0,%.12g,fixed_point\n", x[0],
                                  x[1], mag);
                } else {
                    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.12g,%.12g,ok\n", x[0],
                                  x[1], v[0] / mag, v[1] / mag, mag);
                }
            }
            out += line;
        }
    }
    return out;
}

std::string export_trajectory_comparison(const ProblemInfo& info, const Vector& x0, double tau,
                                         const FlowConfig& flow_cfg) {
    SolverConfig classical = info.default_solver;
    classical.mode = StepMode::Classical;
    SolverConfig adaptive = info.default_solver;
    adaptive.mode = StepMode::Adaptive;
    adaptive.tau = tau;

    const SolveTrace classical_trace = solve(info.problem, x0, classical);
    const SolveTrace adaptive_trace = solve(info.problem, x0, adaptive);
    const FlowTrajectory reference = flow(info.problem, x0, flow_cfg);

    nlohmann::json j;
    j["problem"] = info.id;
    j["x0"] = x0;
    j["tau"] = tau;
    j["flow_dt"] = flow_cfg.dt;
    j["classical"] = nlohmann::json::parse(trace_to_json(classical_trace, info.id, classical));
    j["adaptive"] = nlohmann::json::parse(trace_to_json(adaptive_trace, info.id, adaptive));
    j["flow"] = nlohmann::json::parse(trajectory_to_json(reference, info.id));
    return j.dump(2);
}

}  // namespace newtonlab
