#include "problem.hpp"

namespace newtonlab {

void solve_jacobian_system(Jacobian& jac, Vector& rhs, Vector& out, LinearScratch& scratch) {
    if (auto* dense = std::get_if<DenseMatrix>(&jac)) {
        out.assign(rhs.begin(), rhs.end());
        solve_dense_in_place(*dense, out);
        return;
    }
    if (auto* tri = std::get_if<TridiagonalMatrix>(&jac)) {
        solve_tridiagonal_into(*tri, rhs, out, scratch.work);
        return;
    }
    auto& sparse = std::get<SparseCsrMatrix>(jac);
    const double* warm = nullptr;
    if (scratch.warm_start && scratch.has_last &&
        scratch.last_solution.size() == static_cast<size_t>(sparse.n)) {
        warm = scratch.last_solution.data();
    }
    solve_sparse_sym_into(sparse, rhs, scratch.sparse_tol, out, scratch.minres, warm);
    if (scratch.warm_start) {
        scratch.last_solution = out;
        scratch.has_last = true;
    }
}

}  // namespace newtonlab
