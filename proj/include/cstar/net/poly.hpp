#pragma once

#include <functional>

#include "cstar/net/basis.hpp"

namespace cstar::net {

namespace detail {

/// All multi-indices over m variables with total degree <= max_degree,
/// ordered by degree.
inline std::vector<std::vector<int>> multi_indices(int m, int max_degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<size_t>(m), 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == m - 1) {
            cur[static_cast<size_t>(var)] = left;
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[static_cast<size_t>(var)] = e;
            rec(var + 1, left - e);
        }
    };
    for (int deg = 0; deg <= max_degree; ++deg) rec(0, deg);
    return out;
}

}  // namespace detail

struct PolyDegreeResult {
    int degree = -1;                 // smallest fitting degree
    std::vector<double> residuals;   // absolute RMS residual per degree 0..L
};

/// Detects the polynomial degree of z -> f_z(xhat) in the basis values
/// v_1(z),...,v_m(z), by least-squares fits with monomial features of total
/// degree <= D over the whole grid.  Requires linear activations and a
/// constant input; returns the smallest D with residual <= accept_tol and
/// throws if no D up to the layer count L fits (the statement being checked
/// is exactly "f_z(x) is a degree-L polynomial in the v_l(z)").
inline PolyDegreeResult poly_degree_check(const BasisCStarNet& net,
                                          const Eigen::VectorXcd& xhat,
                                          double accept_tol = 1e-8) {
    for (const auto& layer : net.layers())
        if (!layer.activation.is_linear())
            throw InvalidArgument("poly_degree_check requires linear activations");

    const int L = net.depth();
    const int m = net.basis_size();
    const int grid = net.grid_size();
    const CStarNet realized = net.realize();
    ModuleVector x = embed_constant(net.descriptor(), xhat);

    // Targets: all slice outputs, stacked as grid x out_dim.
    Eigen::MatrixXcd f(grid, realized.output_dim());
    for (int z = 0; z < grid; ++z) f.row(z) = realized.forward_at(x, z).transpose();

    const Eigen::MatrixXcd& V = net.basis_values();
    PolyDegreeResult result;
    for (int D = 0; D <= L; ++D) {
        const auto exps = detail::multi_indices(m, D);
        Eigen::MatrixXcd features(grid, exps.size());
        for (int z = 0; z < grid; ++z)
            for (size_t c = 0; c < exps.size(); ++c) {
                Complex val = 1.0;
                for (int var = 0; var < m; ++var)
                    for (int e = 0; e < exps[c][static_cast<size_t>(var)]; ++e)
                        val *= V(z, var);
                features(z, static_cast<long>(c)) = val;
            }
        Eigen::MatrixXcd sol = features.completeOrthogonalDecomposition().solve(f);
        const double rmse =
            std::sqrt((features * sol - f).squaredNorm() / (grid * realized.output_dim()));
        result.residuals.push_back(rmse);
        if (result.degree < 0 && rmse <= accept_tol) result.degree = D;
    }
    if (result.degree < 0)
        throw NumericalError("slice outputs are not a degree-L polynomial in the basis");
    return result;
}

}  // namespace cstar::net
