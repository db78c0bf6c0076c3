#pragma once

#include <random>

#include "cstar/algebra/spectral.hpp"

namespace cstar {

using Rng = std::mt19937_64;

/// Uniform coordinates in the complex box [-1,1] x i[-1,1].
inline AlgebraElement random_element(const DescriptorPtr& desc, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXcd c(desc->coord_size());
    for (int i = 0; i < c.size(); ++i) {
        const double re = u(rng);
        const double im = u(rng);
        c[i] = Complex(re, im);
    }
    return AlgebraElement(desc, std::move(c));
}

/// Random element with zero imaginary parts.
inline AlgebraElement random_real_element(const DescriptorPtr& desc, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXcd c(desc->coord_size());
    for (int i = 0; i < c.size(); ++i) c[i] = Complex(u(rng), 0.0);
    return AlgebraElement(desc, std::move(c));
}

/// (a + a*)/2, Hermitian by construction.
inline AlgebraElement random_hermitian(const DescriptorPtr& desc, Rng& rng) {
    AlgebraElement a = random_element(desc, rng);
    return scale(0.5, add(a, star(a)));
}

/// d* d for random d; positive by definition.
inline AlgebraElement random_positive(const DescriptorPtr& desc, Rng& rng) {
    AlgebraElement d = random_element(desc, rng);
    return mul(star(d), d);
}

/// A unitary element: unit-modulus values for the commutative kinds, the Q
/// factor of a random matrix pulled back through the representation
/// otherwise.  For circulant and group kinds we use exp(i h) with h a random
/// Hermitian element of the algebra, which stays in the algebra.
inline AlgebraElement random_unitary(const DescriptorPtr& desc, Rng& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    switch (desc->kind()) {
        case AlgebraKind::Scalar:
        case AlgebraKind::GridFunction: {
            Eigen::VectorXcd c(desc->coord_size());
            for (int i = 0; i < c.size(); ++i) c[i] = std::polar(1.0, angle(rng));
            return AlgebraElement(desc, std::move(c));
        }
        case AlgebraKind::DenseMatrix:
        case AlgebraKind::BlockDiagonal: {
            // Per-block QR of a random matrix.
            AlgebraElement a = random_element(desc, rng);
            Eigen::MatrixXcd m = regular_representation(a);
            Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
            int pos = 0;
            std::vector<int> sizes = desc->kind() == AlgebraKind::DenseMatrix
                                         ? std::vector<int>{desc->matrix_dim()}
                                         : desc->block_sizes();
            for (int b : sizes) {
                Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m.block(pos, pos, b, b));
                q.block(pos, pos, b, b) =
                    qr.householderQ() * Eigen::MatrixXcd::Identity(b, b);
                pos += b;
            }
            return element_from_representation(desc, q);
        }
        default: {
            // exp(i h) via the Hermitian eigendecomposition of h's representation.
            AlgebraElement h = random_hermitian(desc, rng);
            Eigen::MatrixXcd hm = regular_representation(h);
            hm = 0.5 * (hm + hm.adjoint().eval());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
            Eigen::VectorXcd phases(es.eigenvalues().size());
            for (int i = 0; i < phases.size(); ++i)
                phases[i] = std::polar(1.0, es.eigenvalues()[i]);
            Eigen::MatrixXcd u =
                es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
            return element_from_representation(desc, u);
        }
    }
}

}  // namespace cstar
