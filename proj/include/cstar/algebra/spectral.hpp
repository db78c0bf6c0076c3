#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "cstar/algebra/representation.hpp"

namespace cstar {

/// Default absolute tolerance on the minimum eigenvalue in positivity checks.
inline constexpr double kPositivityTol = 1e-8;

/// C*-norm: sup of |values| for grid functions, largest singular value of the
/// faithful representation otherwise.  For finite groups the operator norm of
/// the left regular representation equals the sup over irreducible
/// representations, since the regular representation contains every
/// irreducible one.
inline double norm(const AlgebraElement& a) {
    switch (a.kind()) {
        case AlgebraKind::Scalar:
            return std::abs(a.coords()[0]);
        case AlgebraKind::GridFunction:
            return a.coords().cwiseAbs().maxCoeff();
        default: {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(regular_representation(a));
            return svd.singularValues()[0];
        }
    }
}

/// Hilbert-Schmidt (Frobenius) norm of the coordinate matrix; used for the
/// operator-vs-HS norm comparison on dense matrices.
inline double hs_norm(const AlgebraElement& a) {
    if (a.kind() == AlgebraKind::Scalar || a.kind() == AlgebraKind::GridFunction)
        return a.coords().norm();
    return regular_representation(a).norm();
}

namespace detail {

inline double hermitian_deviation(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue_hermitized(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    return es.eigenvalues().minCoeff();
}

}  // namespace detail

/// True iff a is Hermitian within tol and its spectrum is >= -tol in the
/// faithful representation.  Grid functions: values real and >= -tol.
/// Tolerances are absolute, matching the 1e-8 default on the minimum
/// eigenvalue.
inline bool is_positive(const AlgebraElement& a, double tol = kPositivityTol) {
    if (tol < 0) throw InvalidArgument("is_positive: tol must be >= 0");
    if (a.kind() == AlgebraKind::GridFunction || a.kind() == AlgebraKind::Scalar) {
        for (int i = 0; i < a.coords().size(); ++i) {
            const Complex v = a.coords()[i];
            if (std::abs(v.imag()) > tol || v.real() < -tol) return false;
        }
        return true;
    }
    const Eigen::MatrixXcd m = regular_representation(a);
    if (detail::hermitian_deviation(m) > tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
        return false;
    return detail::min_eigenvalue_hermitized(m) >= -tol;
}

/// c <=_A d iff d - c is positive.
inline bool leq(const AlgebraElement& a, const AlgebraElement& b, double tol = kPositivityTol) {
    return is_positive(sub(b, a), tol);
}

/// The unique positive square root of a positive element, by functional
/// calculus: pointwise sqrt for grid functions, Hermitian eigendecomposition
/// of the representation otherwise (negative eigenvalues from roundoff are
/// clamped to zero).  The square root of a circulant / block / group-algebra
/// representation stays in the image algebra, so the coordinate pull-back is
/// exact.
inline AlgebraElement sqrt_positive(const AlgebraElement& a) {
    const auto& desc = a.descriptor();
    if (desc->kind() == AlgebraKind::GridFunction || desc->kind() == AlgebraKind::Scalar) {
        Eigen::VectorXcd c(a.coords().size());
        for (int i = 0; i < c.size(); ++i)
            c[i] = std::sqrt(std::max(0.0, a.coords()[i].real()));
        return AlgebraElement(desc, std::move(c));
    }
    Eigen::MatrixXcd h = regular_representation(a);
    h = 0.5 * (h + h.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed in sqrt");
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd root =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    return element_from_representation(desc, root);
}

/// A-valued absolute value |a| = sqrt(a* a).
inline AlgebraElement abs(const AlgebraElement& a) {
    return sqrt_positive(mul(star(a), a));
}

}  // namespace cstar
