#pragma once

#include "cstar/net/autodiff.hpp"

namespace cstar::net {

/// Weight discretization by a fixed function basis: each weight entry is
/// w^j_{i,k} = sum_l c^j_{l,i,k} v_l, with the basis functions stored as
/// their values on the grid of Z.  Biases are constant in z.
struct BasisLayer {
    int out_dim = 0;
    int in_dim = 0;
    std::vector<Eigen::MatrixXcd> coeff;  // coeff[l] is out_dim x in_dim
    Eigen::VectorXcd bias;                // constant biases, length out_dim
    ActivationSpec activation;
};

class BasisCStarNet {
public:
    BasisCStarNet(DescriptorPtr grid_desc, Eigen::MatrixXcd basis_values,
                  std::vector<BasisLayer> layers)
        : desc_(std::move(grid_desc)),
          basis_(std::move(basis_values)),
          layers_(std::move(layers)) {
        if (desc_->kind() != AlgebraKind::GridFunction)
            throw InvalidArgument("basis net requires a grid-function descriptor");
        if (basis_.rows() != desc_->grid_size() || basis_.cols() < 1)
            throw InvalidArgument("basis values must be grid_size x m with m >= 1");
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(basis_);
        if (qr.rank() != basis_.cols())
            throw InvalidArgument("basis evaluation matrix must have full column rank");
        if (layers_.empty()) throw InvalidArgument("basis net needs >= 1 layer");
        int prev = layers_.front().in_dim;
        for (const auto& l : layers_) {
            if (l.in_dim != prev) throw InvalidArgument("basis net layer width mismatch");
            if (static_cast<int>(l.coeff.size()) != basis_.cols())
                throw InvalidArgument("basis net needs one coefficient matrix per basis fn");
            for (const auto& c : l.coeff)
                if (c.rows() != l.out_dim || c.cols() != l.in_dim)
                    throw InvalidArgument("basis coefficient shape mismatch");
            if (l.bias.size() != l.out_dim)
                throw InvalidArgument("basis bias shape mismatch");
            prev = l.out_dim;
        }
    }

    const DescriptorPtr& descriptor() const { return desc_; }
    const Eigen::MatrixXcd& basis_values() const { return basis_; }
    int basis_size() const { return static_cast<int>(basis_.cols()); }
    int grid_size() const { return desc_->grid_size(); }
    int depth() const { return static_cast<int>(layers_.size()); }
    const std::vector<BasisLayer>& layers() const { return layers_; }
    std::vector<BasisLayer>& layers() { return layers_; }

    /// Expands the coefficients into a concrete grid net.
    CStarNet realize() const {
        std::vector<CStarLayer> out;
        for (const auto& l : layers_) {
            CStarLayer cl;
            cl.out_dim = l.out_dim;
            cl.in_dim = l.in_dim;
            cl.activation = l.activation;
            cl.weights.reserve(static_cast<size_t>(l.out_dim) * l.in_dim);
            for (int i = 0; i < l.out_dim; ++i)
                for (int k = 0; k < l.in_dim; ++k) {
                    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(grid_size());
                    for (int b = 0; b < basis_size(); ++b)
                        w += l.coeff[static_cast<size_t>(b)](i, k) * basis_.col(b);
                    cl.weights.emplace_back(desc_, std::move(w));
                }
            for (int i = 0; i < l.out_dim; ++i)
                cl.bias.push_back(AlgebraElement::from_scalar(desc_, l.bias[i]));
            out.push_back(std::move(cl));
        }
        return CStarNet(desc_, std::move(out));
    }

private:
    DescriptorPtr desc_;
    Eigen::MatrixXcd basis_;
    std::vector<BasisLayer> layers_;
};

/// Monomial basis v_l(z) = z^l for l = 1..m, evaluated on given grid points.
inline Eigen::MatrixXcd monomial_basis(const Eigen::VectorXd& grid_points, int m) {
    Eigen::MatrixXcd v(grid_points.size(), m);
    for (int t = 0; t < grid_points.size(); ++t) {
        double p = 1.0;
        for (int l = 0; l < m; ++l) {
            p *= grid_points[t];
            v(t, l) = p;
        }
    }
    return v;
}

/// Cosine basis v_l(z) = cos(l z) for l = 1..m.
inline Eigen::MatrixXcd cosine_basis(const Eigen::VectorXd& grid_points, int m) {
    Eigen::MatrixXcd v(grid_points.size(), m);
    for (int t = 0; t < grid_points.size(); ++t)
        for (int l = 0; l < m; ++l) v(t, l) = std::cos((l + 1) * grid_points[t]);
    return v;
}

/// Full-batch gradient descent on the basis coefficients c^j_{l,i,k} and the
/// constant biases; the chain rule through w = sum_l c_l v_l contracts the
/// grid gradient against conj(v_l).
inline TrainResult train_basis(BasisCStarNet& net, const NetDataset& data,
                               const TrainOptions& opts) {
    if (opts.steps < 0) throw InvalidArgument("train: steps must be >= 0");
    TrainResult result;
    const Eigen::MatrixXcd& V = net.basis_values();
    for (int step = 0; step < opts.steps; ++step) {
        CStarNet realized = net.realize();
        NetGrad grad = NetGrad::zeros_like(realized);
        const double loss = dataset_loss_and_grad(realized, data, grad);
        result.loss_trace.push_back(loss);
        if (!std::isfinite(loss)) {
            result.diverged = true;
            return result;
        }
        for (size_t l = 0; l < net.layers().size(); ++l) {
            auto& layer = net.layers()[l];
            for (int i = 0; i < layer.out_dim; ++i) {
                for (int k = 0; k < layer.in_dim; ++k) {
                    const Eigen::VectorXcd& gw =
                        grad.layers[l].weights[static_cast<size_t>(i) * layer.in_dim + k]
                            .coords();
                    // grad_c_l = sum_z g_w(z) conj(V(z,l)); Eigen's dot
                    // conjugates its first argument.
                    for (int b = 0; b < net.basis_size(); ++b)
                        layer.coeff[static_cast<size_t>(b)](i, k) -=
                            opts.learning_rate * V.col(b).dot(gw);
                }
                layer.bias[i] -=
                    opts.learning_rate * grad.layers[l].bias[static_cast<size_t>(i)].coords().sum();
            }
        }
    }
    const double final_loss = dataset_loss(net.realize(), data);
    result.loss_trace.push_back(final_loss);
    if (!std::isfinite(final_loss)) result.diverged = true;
    return result;
}

}  // namespace cstar::net
