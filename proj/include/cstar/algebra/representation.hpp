#pragma once

#include <Eigen/Dense>

#include "cstar/algebra/element.hpp"

namespace cstar {

/// Faithful *-representation as a dense complex matrix: grids map to diagonal
/// matrices, circulants to dense circulant matrices, group elements to left
/// translation matrices L_a[g][k] = a(g k^{-1}).  Satisfies R(ab) = R(a)R(b)
/// and R(a*) = R(a)^H; norms, square roots and linear solves go through it.
inline Eigen::MatrixXcd regular_representation(const AlgebraElement& a) {
    const auto& desc = a.descriptor();
    const auto& x = a.coords();
    const int D = desc->rep_dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(D, D);

    switch (desc->kind()) {
        case AlgebraKind::Scalar:
            m(0, 0) = x[0];
            break;
        case AlgebraKind::DenseMatrix: {
            const int d = desc->matrix_dim();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) m(i, j) = x[i * d + j];
            break;
        }
        case AlgebraKind::Circulant: {
            const int d = desc->matrix_dim();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) m(i, j) = x[(i - j + d) % d];
            break;
        }
        case AlgebraKind::BlockDiagonal: {
            int off = 0, pos = 0;
            for (int bsz : desc->block_sizes()) {
                for (int i = 0; i < bsz; ++i)
                    for (int j = 0; j < bsz; ++j) m(pos + i, pos + j) = x[off + i * bsz + j];
                off += bsz * bsz;
                pos += bsz;
            }
            break;
        }
        case AlgebraKind::GridFunction:
            for (int i = 0; i < D; ++i) m(i, i) = x[i];
            break;
        case AlgebraKind::GroupAlgebra: {
            const auto& g = desc->group();
            for (int r = 0; r < D; ++r)
                for (int k = 0; k < D; ++k) m(r, k) = x[g.op(r, g.inverse(k))];
            break;
        }
    }
    return m;
}

/// Inverse of regular_representation on its image: reads back the defining
/// coordinates (first column for circulants, identity column for group
/// algebras, diagonal for grids).  For matrices not exactly in the image this
/// acts as the natural coordinate projection.
inline AlgebraElement element_from_representation(const DescriptorPtr& desc,
                                                  const Eigen::MatrixXcd& m) {
    if (m.rows() != desc->rep_dim() || m.cols() != desc->rep_dim())
        throw InvalidArgument("representation matrix has wrong dimension");
    Eigen::VectorXcd c(desc->coord_size());

    switch (desc->kind()) {
        case AlgebraKind::Scalar:
            c[0] = m(0, 0);
            break;
        case AlgebraKind::DenseMatrix: {
            const int d = desc->matrix_dim();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) c[i * d + j] = m(i, j);
            break;
        }
        case AlgebraKind::Circulant: {
            const int d = desc->matrix_dim();
            for (int i = 0; i < d; ++i) c[i] = m(i, 0);
            break;
        }
        case AlgebraKind::BlockDiagonal: {
            int off = 0, pos = 0;
            for (int bsz : desc->block_sizes()) {
                for (int i = 0; i < bsz; ++i)
                    for (int j = 0; j < bsz; ++j) c[off + i * bsz + j] = m(pos + i, pos + j);
                off += bsz * bsz;
                pos += bsz;
            }
            break;
        }
        case AlgebraKind::GridFunction:
            for (int i = 0; i < desc->grid_size(); ++i) c[i] = m(i, i);
            break;
        case AlgebraKind::GroupAlgebra: {
            const int e = desc->group().identity();
            for (int g = 0; g < desc->group().order(); ++g) c[g] = m(g, e);
            break;
        }
    }
    return AlgebraElement(desc, std::move(c));
}

}  // namespace cstar
