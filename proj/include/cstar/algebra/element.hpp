#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "cstar/algebra/descriptor.hpp"
#include "cstar/errors.hpp"

namespace cstar {

using Complex = std::complex<double>;

/// One element of a concrete C*-algebra, stored by its defining coordinates:
/// matrix entries (row-major), circulant generator, per-block entries, grid
/// values, or group-algebra coefficients a(g).
class AlgebraElement {
public:
    AlgebraElement(DescriptorPtr desc, Eigen::VectorXcd coords)
        : desc_(std::move(desc)), coords_(std::move(coords)) {
        if (!desc_) throw InvalidArgument("element needs a descriptor");
        if (coords_.size() != desc_->coord_size())
            throw InvalidArgument("coordinate count does not match descriptor shape");
    }

    static AlgebraElement zero(DescriptorPtr desc) {
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(desc->coord_size());
        return AlgebraElement(std::move(desc), std::move(c));
    }

    static AlgebraElement identity(DescriptorPtr desc) {
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(desc->coord_size());
        switch (desc->kind()) {
            case AlgebraKind::Scalar:
                c[0] = 1.0;
                break;
            case AlgebraKind::DenseMatrix: {
                const int d = desc->matrix_dim();
                for (int i = 0; i < d; ++i) c[i * d + i] = 1.0;
                break;
            }
            case AlgebraKind::Circulant:
                c[0] = 1.0;
                break;
            case AlgebraKind::BlockDiagonal: {
                int off = 0;
                for (int b : desc->block_sizes()) {
                    for (int i = 0; i < b; ++i) c[off + i * b + i] = 1.0;
                    off += b * b;
                }
                break;
            }
            case AlgebraKind::GridFunction:
                c.setOnes();
                break;
            case AlgebraKind::GroupAlgebra:
                c[desc->group().identity()] = 1.0;
                break;
        }
        return AlgebraElement(std::move(desc), std::move(c));
    }

    /// The embedding of a complex scalar, alpha * 1_A.
    static AlgebraElement from_scalar(DescriptorPtr desc, Complex alpha) {
        AlgebraElement e = identity(std::move(desc));
        e.coords_ *= alpha;
        return e;
    }

    const DescriptorPtr& descriptor() const { return desc_; }
    const Eigen::VectorXcd& coords() const { return coords_; }
    Eigen::VectorXcd& coords() { return coords_; }
    AlgebraKind kind() const { return desc_->kind(); }

    bool is_zero(double tol = 0.0) const {
        return coords_.cwiseAbs().maxCoeff() <= tol;
    }

private:
    DescriptorPtr desc_;
    Eigen::VectorXcd coords_;
};

inline AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_descriptor(a.descriptor(), b.descriptor(), "add");
    return AlgebraElement(a.descriptor(), a.coords() + b.coords());
}

inline AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_descriptor(a.descriptor(), b.descriptor(), "sub");
    return AlgebraElement(a.descriptor(), a.coords() - b.coords());
}

inline AlgebraElement scale(Complex alpha, const AlgebraElement& a) {
    return AlgebraElement(a.descriptor(), alpha * a.coords());
}

inline AlgebraElement neg(const AlgebraElement& a) {
    return AlgebraElement(a.descriptor(), -a.coords());
}

/// The algebra product: pointwise for grids, matrix product for matrix kinds,
/// cyclic convolution for circulants, group convolution (a*b)(g) =
/// sum_h a(h) b(h^{-1} g) for group algebras.
inline AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_descriptor(a.descriptor(), b.descriptor(), "mul");
    const auto& desc = a.descriptor();
    const auto& x = a.coords();
    const auto& y = b.coords();
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(x.size());

    switch (desc->kind()) {
        case AlgebraKind::Scalar:
            r[0] = x[0] * y[0];
            break;
        case AlgebraKind::GridFunction:
            r = x.cwiseProduct(y);
            break;
        case AlgebraKind::DenseMatrix: {
            const int d = desc->matrix_dim();
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) {
                    const Complex aik = x[i * d + k];
                    if (aik == Complex(0.0)) continue;
                    for (int j = 0; j < d; ++j) r[i * d + j] += aik * y[k * d + j];
                }
            break;
        }
        case AlgebraKind::BlockDiagonal: {
            int off = 0;
            for (int bsz : desc->block_sizes()) {
                for (int i = 0; i < bsz; ++i)
                    for (int k = 0; k < bsz; ++k) {
                        const Complex aik = x[off + i * bsz + k];
                        if (aik == Complex(0.0)) continue;
                        for (int j = 0; j < bsz; ++j)
                            r[off + i * bsz + j] += aik * y[off + k * bsz + j];
                    }
                off += bsz * bsz;
            }
            break;
        }
        case AlgebraKind::Circulant: {
            const int d = desc->matrix_dim();
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) r[(j + k) % d] += x[j] * y[k];
            break;
        }
        case AlgebraKind::GroupAlgebra: {
            const auto& g = desc->group();
            const int n = g.order();
            for (int h = 0; h < n; ++h) {
                if (x[h] == Complex(0.0)) continue;
                for (int k = 0; k < n; ++k) r[g.op(h, k)] += x[h] * y[k];
            }
            break;
        }
    }
    return AlgebraElement(desc, std::move(r));
}

/// The involution: conjugate for grids, conjugate transpose for matrix kinds,
/// a*(g) = conj(a(g^{-1})) for group algebras.
inline AlgebraElement star(const AlgebraElement& a) {
    const auto& desc = a.descriptor();
    const auto& x = a.coords();
    Eigen::VectorXcd r(x.size());

    switch (desc->kind()) {
        case AlgebraKind::Scalar:
        case AlgebraKind::GridFunction:
            r = x.conjugate();
            break;
        case AlgebraKind::DenseMatrix: {
            const int d = desc->matrix_dim();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) r[i * d + j] = std::conj(x[j * d + i]);
            break;
        }
        case AlgebraKind::BlockDiagonal: {
            int off = 0;
            for (int bsz : desc->block_sizes()) {
                for (int i = 0; i < bsz; ++i)
                    for (int j = 0; j < bsz; ++j)
                        r[off + i * bsz + j] = std::conj(x[off + j * bsz + i]);
                off += bsz * bsz;
            }
            break;
        }
        case AlgebraKind::Circulant: {
            const int d = desc->matrix_dim();
            for (int k = 0; k < d; ++k) r[k] = std::conj(x[(d - k) % d]);
            break;
        }
        case AlgebraKind::GroupAlgebra: {
            const auto& g = desc->group();
            for (int v = 0; v < g.order(); ++v) r[v] = std::conj(x[g.inverse(v)]);
            break;
        }
    }
    return AlgebraElement(desc, std::move(r));
}

/// Right translation of group-algebra coefficients: (rho_g a)(h) = a(hg).
inline AlgebraElement translate_right(const AlgebraElement& a, int g) {
    if (a.kind() != AlgebraKind::GroupAlgebra)
        throw InvalidArgument("translate_right requires a group-algebra element");
    const auto& grp = a.descriptor()->group();
    Eigen::VectorXcd r(a.coords().size());
    for (int h = 0; h < grp.order(); ++h) r[h] = a.coords()[grp.op(h, g)];
    return AlgebraElement(a.descriptor(), std::move(r));
}

inline AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) { return add(a, b); }
inline AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return sub(a, b); }
inline AlgebraElement operator-(const AlgebraElement& a) { return neg(a); }
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return mul(a, b); }
inline AlgebraElement operator*(Complex alpha, const AlgebraElement& a) { return scale(alpha, a); }
inline AlgebraElement operator*(double alpha, const AlgebraElement& a) { return scale(alpha, a); }

/// Largest absolute coordinate difference; the workhorse of exactness tests.
inline double max_coord_dist(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_descriptor(a.descriptor(), b.descriptor(), "max_coord_dist");
    return (a.coords() - b.coords()).cwiseAbs().maxCoeff();
}

}  // namespace cstar
