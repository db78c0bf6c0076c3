#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cstar/algebra/group.hpp"
#include "cstar/errors.hpp"

namespace cstar {

enum class AlgebraKind {
    Scalar,         // C itself
    DenseMatrix,    // C^{d x d}
    Circulant,      // circulant d x d matrices, stored by generator vector
    BlockDiagonal,  // block-diagonal matrices with fixed block sizes
    GridFunction,   // functions on a fixed m-point grid, pointwise product
    GroupAlgebra,   // C[G] for a finite group G, convolution product
};

inline std::string to_string(AlgebraKind k) {
    switch (k) {
        case AlgebraKind::Scalar: return "scalar";
        case AlgebraKind::DenseMatrix: return "dense-matrix";
        case AlgebraKind::Circulant: return "circulant";
        case AlgebraKind::BlockDiagonal: return "block-diagonal";
        case AlgebraKind::GridFunction: return "grid-function";
        case AlgebraKind::GroupAlgebra: return "group-algebra";
    }
    return "?";
}

class AlgebraDescriptor;
using DescriptorPtr = std::shared_ptr<const AlgebraDescriptor>;

/// Identifies one concrete C*-algebra: the kind plus its dimension metadata.
/// Elements store a reference to their descriptor; all binary operations
/// require structurally equal descriptors.
class AlgebraDescriptor {
public:
    static DescriptorPtr scalar() {
        return std::make_shared<AlgebraDescriptor>(AlgebraKind::Scalar, 1);
    }

    static DescriptorPtr dense_matrix(int d) {
        if (d < 1) throw InvalidArgument("matrix dimension must be >= 1");
        return std::make_shared<AlgebraDescriptor>(AlgebraKind::DenseMatrix, d);
    }

    static DescriptorPtr circulant(int d) {
        if (d < 1) throw InvalidArgument("circulant dimension must be >= 1");
        return std::make_shared<AlgebraDescriptor>(AlgebraKind::Circulant, d);
    }

    static DescriptorPtr block_diagonal(std::vector<int> block_sizes) {
        if (block_sizes.empty()) throw InvalidArgument("block-diagonal needs >= 1 block");
        for (int b : block_sizes)
            if (b < 1) throw InvalidArgument("block sizes must be >= 1");
        auto d = std::make_shared<AlgebraDescriptor>(AlgebraKind::BlockDiagonal, 0);
        d->blocks_ = std::move(block_sizes);
        d->finish();
        return d;
    }

    /// Grid with uniform quadrature weights 1/m.
    static DescriptorPtr grid_function(int m) {
        if (m < 1) throw InvalidArgument("grid size must be >= 1");
        return grid_function(Eigen::VectorXd::Constant(m, 1.0 / m));
    }

    static DescriptorPtr grid_function(Eigen::VectorXd quadrature_weights) {
        const int m = static_cast<int>(quadrature_weights.size());
        if (m < 1) throw InvalidArgument("grid size must be >= 1");
        for (int i = 0; i < m; ++i)
            if (!(quadrature_weights[i] > 0.0))
                throw InvalidArgument("quadrature weights must be positive");
        if (std::abs(quadrature_weights.sum() - 1.0) > 1e-12)
            throw InvalidArgument("quadrature weights must sum to 1");
        auto d = std::make_shared<AlgebraDescriptor>(AlgebraKind::GridFunction, m);
        d->weights_ = std::move(quadrature_weights);
        return d;
    }

    static DescriptorPtr group_algebra(GroupTable table) {
        auto d = std::make_shared<AlgebraDescriptor>(AlgebraKind::GroupAlgebra, table.order());
        d->group_ = std::move(table);
        return d;
    }

    AlgebraDescriptor(AlgebraKind kind, int dim) : kind_(kind), dim_(dim) { finish(); }

    AlgebraKind kind() const { return kind_; }

    /// Number of stored complex coordinates per element.
    int coord_size() const { return coord_size_; }

    /// Dimension of the faithful matrix representation.
    int rep_dim() const { return rep_dim_; }

    int matrix_dim() const { return dim_; }
    int grid_size() const { return dim_; }
    const std::vector<int>& block_sizes() const { return blocks_; }
    const Eigen::VectorXd& quadrature_weights() const { return weights_; }
    const GroupTable& group() const {
        if (!group_) throw InvalidArgument("descriptor has no group table");
        return *group_;
    }

    /// True for kinds whose product commutes (grid functions, abelian groups).
    bool is_commutative() const {
        switch (kind_) {
            case AlgebraKind::Scalar:
            case AlgebraKind::GridFunction:
            case AlgebraKind::Circulant: return true;
            case AlgebraKind::GroupAlgebra: return group_->is_abelian();
            case AlgebraKind::DenseMatrix: return dim_ == 1;
            case AlgebraKind::BlockDiagonal:
                return std::all_of(blocks_.begin(), blocks_.end(), [](int b) { return b == 1; });
        }
        return false;
    }

    /// Coordinate shape, as serialized: [d,d] for matrices, [b1,...] for
    /// blocks, [m]/[n]/[d] for the vector-shaped kinds.
    std::vector<int> shape() const {
        switch (kind_) {
            case AlgebraKind::Scalar: return {1};
            case AlgebraKind::DenseMatrix: return {dim_, dim_};
            case AlgebraKind::BlockDiagonal: return blocks_;
            default: return {dim_};
        }
    }

    bool operator==(const AlgebraDescriptor& o) const {
        if (kind_ != o.kind_ || dim_ != o.dim_) return false;
        switch (kind_) {
            case AlgebraKind::BlockDiagonal: return blocks_ == o.blocks_;
            case AlgebraKind::GridFunction: return weights_ == o.weights_;
            case AlgebraKind::GroupAlgebra: return *group_ == *o.group_;
            default: return true;
        }
    }
    bool operator!=(const AlgebraDescriptor& o) const { return !(*this == o); }

private:
    void finish() {
        switch (kind_) {
            case AlgebraKind::Scalar:
                coord_size_ = rep_dim_ = 1;
                break;
            case AlgebraKind::DenseMatrix:
                coord_size_ = dim_ * dim_;
                rep_dim_ = dim_;
                break;
            case AlgebraKind::Circulant:
            case AlgebraKind::GridFunction:
            case AlgebraKind::GroupAlgebra:
                coord_size_ = rep_dim_ = dim_;
                break;
            case AlgebraKind::BlockDiagonal:
                dim_ = std::accumulate(blocks_.begin(), blocks_.end(), 0);
                coord_size_ = 0;
                for (int b : blocks_) coord_size_ += b * b;
                rep_dim_ = dim_;
                break;
        }
    }

    AlgebraKind kind_;
    int dim_;  // matrix/circulant/grid/group dimension; total dim for blocks
    std::vector<int> blocks_;
    Eigen::VectorXd weights_;
    std::optional<GroupTable> group_;
    int coord_size_ = 0;
    int rep_dim_ = 0;
};

inline bool same_descriptor(const DescriptorPtr& a, const DescriptorPtr& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_descriptor(const DescriptorPtr& a, const DescriptorPtr& b,
                                    const char* op) {
    if (!same_descriptor(a, b))
        throw DescriptorMismatch(std::string(op) + ": operands live over different algebras");
}

}  // namespace cstar
