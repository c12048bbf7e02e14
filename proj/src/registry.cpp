#include "registry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "problems/algebraic.hpp"
#include "problems/bvp1d.hpp"
#include "problems/pde2d.hpp"

namespace newtonlab {

namespace {

struct ParsedId {
    std::string family;
    int n = 0;
    int slice = 0;
    bool has_n = false;
    bool has_slice = false;
};

ParsedId parse_id(const std::string& id) {
    ParsedId parsed;
    std::stringstream ss(id);
    std::string part;
    bool first = true;
    while (std::getline(ss, part, ':')) {
        if (first) {
            parsed.family = part;
            first = false;
            continue;
        }
        const auto eq = part.find('=');
        if (eq == std::string::npos) {
            throw UnknownProblemError("malformed problem option '" + part + "' in id " + id);
        }
        const std::string key = part.substr(0, eq);
        const std::string value = part.substr(eq + 1);
        int parsed_value = 0;
        try {
            parsed_value = std::stoi(value);
        } catch (const std::exception&) {
            throw UnknownProblemError("non-integer value for '" + key + "' in id " + id);
        }
        if (key == "n") {
            parsed.n = parsed_value;
            parsed.has_n = true;
        } else if (key == "slice") {
            parsed.slice = parsed_value;
            parsed.has_slice = true;
        } else {
            throw UnknownProblemError("unknown problem option '" + key + "' in id " + id);
        }
    }
    if (parsed.family.empty()) throw UnknownProblemError("empty problem id");
    return parsed;
}

int clamp_node(double s, int n) {
    const int i = static_cast<int>(std::lround(s * n));
    return std::clamp(i, 1, n - 1);
}

std::shared_ptr<ProblemInfo> make_algebraic(const std::string& family) {
    auto info = std::make_shared<ProblemInfo>();
    info->id = family;
    info->family = family;

    const auto catalog = std::make_shared<algebraic::RootCatalog>(
        family == "cubic" ? algebraic::cubic_roots() : algebraic::expsin_roots());
    info->problem =
        family == "cubic" ? algebraic::make_cubic_problem() : algebraic::make_expsin_problem();
    info->guess_chart = [](double s, double t) { return Vector{s, t}; };
    info->classify = [catalog](const Vector& x) { return catalog->classify(x); };
    for (const auto& r : catalog->roots) {
        info->labels.push_back(r.name);
        info->chart_roots.push_back({r.location[0], r.location[1]});
    }
    info->rate_error = [catalog](const Vector& x, int oracle_label) {
        const Vector& root = catalog->roots[static_cast<size_t>(oracle_label)].location;
        double d2 = 0.0;
        for (size_t i = 0; i < root.size(); ++i) {
            const double d = x[i] - root[i];
            d2 += d * d;
        }
        return std::sqrt(d2);
    };

    info->default_solver = SolverConfig::classical(100);
    info->default_oracle = FlowConfig{1e-2, 50.0, 1e-8};
    if (family == "cubic") {
        info->default_rect = {-5.0, 5.0, -5.0, 5.0};
        info->desk_resolution = {201, 201};
    } else {
        info->default_rect = {0.0, 1.5, -1.5, 0.0};
        info->desk_resolution = {100, 100};
    }
    info->paper_resolution = {1001, 1001};
    return info;
}

std::shared_ptr<ProblemInfo> make_bvp(const std::string& family, int n) {
    auto info = std::make_shared<ProblemInfo>();
    info->id = family + ":n=" + std::to_string(n);
    info->family = family;

    const bvp1d::Mesh1D mesh{n};
    const bool bratu = family == "bratu";
    info->problem = bratu ? bvp1d::make_bratu_problem(n) : bvp1d::make_cubic_bvp_problem(n);
    const auto labels = std::make_shared<bvp1d::SolutionLabels1D>(
        bratu ? bvp1d::bratu_labels() : bvp1d::cubic_bvp_labels());

    info->guess_chart = [mesh](double s, double alpha) {
        return bvp1d::hat_initial_guess(mesh, clamp_node(s, mesh.n), alpha).interior_values;
    };
    info->classify = [labels, mesh](const Vector& u) {
        return labels->classify(bvp1d::integral_value({mesh, u}));
    };
    info->labels = labels->names;
    info->rate_error = [labels, mesh](const Vector& u, int) {
        const double integral = bvp1d::integral_value({mesh, u});
        double best = std::abs(integral - labels->integral_targets[0]);
        for (double target : labels->integral_targets) {
            best = std::min(best, std::abs(integral - target));
        }
        return best;
    };

    info->default_solver = SolverConfig::classical(200);
    info->default_oracle = FlowConfig{1e-2, 50.0, 1e-8};
    info->default_rect = bratu ? std::array<double, 4>{0.0, 1.0, 0.0, 3.0}
                               : std::array<double, 4>{0.0, 1.0, -4.0, 4.0};
    info->desk_resolution = {100, 100};
    info->paper_resolution = {400, 400};
    info->check_oracle_distance = true;
    info->oracle_distance_tol = 1e-3;
    return info;
}

std::shared_ptr<ProblemInfo> make_pde(int n, int slice) {
    auto info = std::make_shared<ProblemInfo>();
    info->id = "cubic-pde:n=" + std::to_string(n) + ":slice=" + std::to_string(slice);
    info->family = "cubic-pde";

    auto data = std::make_shared<pde2d::PdeProblemData>(pde2d::make_cubic_pde_problem(n));
    if (slice < 1 || slice > n - 1) {
        throw UnknownProblemError("slice must lie in 1..n-1");
    }
    info->problem = data->problem;
    info->guess_chart = [data, slice](double s, double amplitude) {
        const int k = clamp_node(s, data->grid.n);
        return pde2d::hill_initial_guess(data->grid, {k, slice}, amplitude).interior_values;
    };
    info->classify = [data](const Vector& u) {
        return data->labels.classify(pde2d::grid_integral({data->grid, u}));
    };
    info->labels = data->labels.names;
    info->rate_error = [data](const Vector& u, int) {
        const double integral = pde2d::grid_integral({data->grid, u});
        const double ip = data->labels.positive_integral;
        return std::min({std::abs(integral + ip), std::abs(integral), std::abs(integral - ip)});
    };

    info->default_solver = SolverConfig::classical(200);
    // Desk-scale oracle budget: a looser residual stop is enough to label a
    // flow endpoint, and it keeps the 2-D reference affordable.
    info->default_oracle = FlowConfig{2e-2, 50.0, 1e-4};
    info->default_rect = {0.0, 1.0, -8.0, 8.0};
    info->desk_resolution = {64, 64};
    info->paper_resolution = {500, 500};
    return info;
}

}  // namespace

std::shared_ptr<const ProblemInfo> make_problem(const std::string& id) {
    const ParsedId parsed = parse_id(id);

    if (parsed.family == "cubic" || parsed.family == "expsin") {
        if (parsed.has_n || parsed.has_slice) {
            throw UnknownProblemError("problem '" + parsed.family + "' takes no options");
        }
        return make_algebraic(parsed.family);
    }
    if (parsed.family == "cubic-bvp" || parsed.family == "bratu") {
        if (parsed.has_slice) {
            throw UnknownProblemError("problem '" + parsed.family + "' has no slice option");
        }
        const int n = parsed.has_n ? parsed.n : 100;
        if (n < 2) throw UnknownProblemError("mesh size n must be at least 2");
        return make_bvp(parsed.family, n);
    }
    if (parsed.family == "cubic-pde") {
        const int n = parsed.has_n ? parsed.n : 32;
        if (n < 3) throw UnknownProblemError("grid size n must be at least 3");
        const int slice = parsed.has_slice ? parsed.slice : n / 2;
        return make_pde(n, slice);
    }
    throw UnknownProblemError("unknown problem id '" + id + "'");
}

}  // namespace newtonlab
