#pragma once

#include "cstar/rkhm/kernel.hpp"

namespace cstar::rkhm {

namespace detail {

/// Solves the module system sum_j (G_ij + lambda delta_ij) c_j = y_i for
/// c_j in A, through the faithful representation.  The grid kind decouples
/// into one n x n complex solve per grid point; all other kinds solve one
/// flattened (nD) x (nD) Hermitian system with a stacked block right-hand
/// side.  With lambda = 0 (interpolation) the minimum-norm least-squares
/// solution is taken instead.
inline std::vector<AlgebraElement> solve_regularized(const GramBlock& g,
                                                     const std::vector<AlgebraElement>& y,
                                                     double lambda, bool interpolate,
                                                     int threads = 1) {
    const auto& desc = g.descriptor();
    const int n = g.size();
    if (static_cast<int>(y.size()) != n)
        throw DescriptorMismatch("fit_krr: |X| != |Y|");
    for (const auto& e : y) require_same_descriptor(desc, e.descriptor(), "fit_krr");

    std::vector<AlgebraElement> coef(static_cast<size_t>(n), AlgebraElement::zero(desc));

    if (desc->kind() == AlgebraKind::GridFunction || desc->kind() == AlgebraKind::Scalar) {
        const int m = desc->coord_size();
        parallel_for(m, threads, [&](int z) {
            Eigen::MatrixXcd K(n, n);
            Eigen::VectorXcd rhs(n);
            for (int i = 0; i < n; ++i) {
                rhs[i] = y[static_cast<size_t>(i)].coords()[z];
                for (int j = 0; j < n; ++j) K(i, j) = g.at(i, j).coords()[z];
            }
            K.diagonal().array() += lambda;
            Eigen::VectorXcd c;
            if (interpolate) {
                c = K.completeOrthogonalDecomposition().solve(rhs);
            } else {
                c = K.ldlt().solve(rhs);
            }
            const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
            if (!c.allFinite() || (K * c - rhs).cwiseAbs().maxCoeff() > 1e-6 * scale)
                throw NumericalError("fit_krr: singular system at grid point " +
                                     std::to_string(z));
            for (int i = 0; i < n; ++i) coef[static_cast<size_t>(i)].coords()[z] = c[i];
        });
        return coef;
    }

    const int D = desc->rep_dim();
    Eigen::MatrixXcd M = g.flatten();
    M.diagonal().array() += lambda;
    Eigen::MatrixXcd B(n * D, D);
    for (int i = 0; i < n; ++i)
        B.block(i * D, 0, D, D) = regular_representation(y[static_cast<size_t>(i)]);

    Eigen::MatrixXcd C;
    if (interpolate) {
        C = M.completeOrthogonalDecomposition().solve(B);
    } else {
        C = M.ldlt().solve(B);
    }
    const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    if (!C.allFinite() || (M * C - B).cwiseAbs().maxCoeff() > 1e-6 * scale)
        throw NumericalError("fit_krr: singular flattened system");

    // Each solution block is a product of representation matrices, hence in
    // the image algebra; reading its defining coordinates is exact.
    for (int i = 0; i < n; ++i)
        coef[static_cast<size_t>(i)] =
            element_from_representation(desc, C.block(i * D, 0, D, D));
    return coef;
}

}  // namespace detail

/// Fitted RKHM kernel ridge regressor: v = sum_i phi(x_i) c_i with A-valued
/// coefficients; prediction uses the reproducing property
/// v(x) = <phi(x), v> = sum_i k(x, x_i) c_i.
class RkhmRegressor {
public:
    RkhmRegressor(AKernel kernel, std::vector<VectorXd> points,
                  std::vector<AlgebraElement> coefficients, double lambda)
        : kernel_(std::move(kernel)),
          points_(std::move(points)),
          coefficients_(std::move(coefficients)),
          lambda_(lambda) {
        if (points_.size() != coefficients_.size())
            throw InvalidArgument("regressor needs one coefficient per training point");
    }

    AlgebraElement predict(const VectorXd& x) const {
        AlgebraElement acc = AlgebraElement::zero(kernel_.descriptor());
        for (size_t i = 0; i < points_.size(); ++i)
            acc = add(acc, mul(kernel_.eval(x, points_[i]), coefficients_[i]));
        return acc;
    }

    const AKernel& kernel() const { return kernel_; }
    const std::vector<VectorXd>& points() const { return points_; }
    const std::vector<AlgebraElement>& coefficients() const { return coefficients_; }
    double lambda() const { return lambda_; }

private:
    AKernel kernel_;
    std::vector<VectorXd> points_;
    std::vector<AlgebraElement> coefficients_;
    double lambda_;
};

/// Kernel ridge regression over the RKHM: solves (G + lambda I_A) c = Y in
/// the module sense.  lambda must be positive; exact interpolation at
/// lambda = 0 is only available behind the explicit flag and falls back to a
/// pseudo-inverse on rank-deficient Grams.
inline RkhmRegressor fit_krr(const AKernel& k, const std::vector<VectorXd>& x,
                             const std::vector<AlgebraElement>& y, double lambda,
                             bool interpolate = false, int threads = 1) {
    if (x.size() != y.size()) throw InvalidArgument("fit_krr: |X| != |Y|");
    if (x.empty()) throw InvalidArgument("fit_krr: empty training set");
    if (!interpolate && !(lambda > 0.0))
        throw InvalidArgument("fit_krr: lambda must be > 0 (or pass interpolate)");
    if (interpolate) lambda = 0.0;
    GramBlock g = gram(k, x, threads);
    auto coef = detail::solve_regularized(g, y, lambda, interpolate, threads);
    return RkhmRegressor(k, x, std::move(coef), lambda);
}

inline AlgebraElement predict(const RkhmRegressor& reg, const VectorXd& x) {
    return reg.predict(x);
}

inline Json to_json(const RkhmRegressor& reg) {
    Json j;
    j["kernel"] = to_json(reg.kernel());
    j["lambda"] = reg.lambda();
    Json pts = Json::array();
    for (const auto& p : reg.points())
        pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    j["points"] = pts;
    Json coefs = Json::array();
    for (const auto& c : reg.coefficients()) coefs.push_back(cstar::to_json(c));
    j["coefficients"] = coefs;
    return j;
}

inline RkhmRegressor regressor_from_json(const Json& j) {
    AKernel k = kernel_from_json(j.at("kernel"));
    std::vector<VectorXd> pts;
    for (const auto& pj : j.at("points")) {
        auto v = pj.get<std::vector<double>>();
        pts.push_back(Eigen::Map<const VectorXd>(v.data(), static_cast<long>(v.size())));
    }
    std::vector<AlgebraElement> coefs;
    for (const auto& cj : j.at("coefficients"))
        coefs.push_back(element_from_json(k.descriptor(), cj));
    return RkhmRegressor(std::move(k), std::move(pts), std::move(coefs),
                         j.at("lambda").get<double>());
}

}  // namespace cstar::rkhm
