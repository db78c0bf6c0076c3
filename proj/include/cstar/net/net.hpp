#pragma once

#include <vector>

#include "cstar/algebra/random.hpp"
#include "cstar/module/vector.hpp"
#include "cstar/net/activation.hpp"

namespace cstar::net {

/// An ordinary dense network with complex scalar weights; the z-slices of a
/// grid-descriptor C*-algebra net are exactly these.
struct ScalarLayer {
    Eigen::MatrixXcd weights;
    Eigen::VectorXcd bias;
    ActivationSpec activation;
};

class ScalarNet {
public:
    explicit ScalarNet(std::vector<ScalarLayer> layers) : layers_(std::move(layers)) {
        if (layers_.empty()) throw InvalidArgument("scalar net needs >= 1 layer");
        for (size_t l = 0; l < layers_.size(); ++l) {
            if (layers_[l].weights.rows() != layers_[l].bias.size())
                throw InvalidArgument("scalar net: bias/weight shape mismatch");
            if (l > 0 && layers_[l].weights.cols() != layers_[l - 1].weights.rows())
                throw InvalidArgument("scalar net: consecutive layer shape mismatch");
        }
    }

    int input_dim() const { return static_cast<int>(layers_.front().weights.cols()); }
    int output_dim() const { return static_cast<int>(layers_.back().weights.rows()); }
    const std::vector<ScalarLayer>& layers() const { return layers_; }
    std::vector<ScalarLayer>& layers() { return layers_; }

    /// Explicit ascending-k accumulation, matching the algebra-side forward
    /// pass coordinate for coordinate.
    Eigen::VectorXcd forward(const Eigen::VectorXcd& x) const {
        if (x.size() != input_dim())
            throw DescriptorMismatch("scalar net forward: input dimension mismatch");
        Eigen::VectorXcd state = x;
        for (const auto& layer : layers_) {
            Eigen::VectorXcd next(layer.weights.rows());
            for (int i = 0; i < layer.weights.rows(); ++i) {
                Complex acc = layer.bias[i];
                for (int k = 0; k < layer.weights.cols(); ++k)
                    acc += layer.weights(i, k) * state[k];
                next[i] = layer.activation.apply(acc);
            }
            state = std::move(next);
        }
        return state;
    }

private:
    std::vector<ScalarLayer> layers_;
};

/// Whether the weight element multiplies the signal from the left (the module
/// convention) or the right.  Right action is kept for the equivariance
/// power checks: over a nonabelian group it breaks right-translation
/// equivariance.
enum class WeightAction { Left, Right };

/// One affine-plus-activation layer with A-valued weights and biases.
struct CStarLayer {
    int out_dim = 0;
    int in_dim = 0;
    std::vector<AlgebraElement> weights;  // row-major, out_dim x in_dim
    std::vector<AlgebraElement> bias;     // out_dim
    ActivationSpec activation;
    WeightAction action = WeightAction::Left;

    const AlgebraElement& weight(int i, int k) const {
        return weights[static_cast<size_t>(i) * in_dim + k];
    }
    AlgebraElement& weight(int i, int k) {
        return weights[static_cast<size_t>(i) * in_dim + k];
    }
};

/// Feed-forward network over A^d: f(x) = sigma_L(W^L ... sigma_1(W^1 x + b^1)
/// ... + b^L), with every weight, bias and signal entry in one algebra.
class CStarNet {
public:
    CStarNet(DescriptorPtr desc, std::vector<CStarLayer> layers)
        : desc_(std::move(desc)), layers_(std::move(layers)) {
        if (layers_.empty()) throw InvalidArgument("net needs >= 1 layer");
        int prev = layers_.front().in_dim;
        for (const auto& layer : layers_) {
            if (layer.out_dim < 1 || layer.in_dim < 1)
                throw InvalidArgument("net layer dimensions must be >= 1");
            if (layer.in_dim != prev) throw InvalidArgument("net layer width mismatch");
            if (layer.weights.size() != static_cast<size_t>(layer.out_dim) * layer.in_dim ||
                layer.bias.size() != static_cast<size_t>(layer.out_dim))
                throw InvalidArgument("net layer has wrong number of parameters");
            for (const auto& w : layer.weights)
                require_same_descriptor(desc_, w.descriptor(), "net weight");
            for (const auto& b : layer.bias)
                require_same_descriptor(desc_, b.descriptor(), "net bias");
            prev = layer.out_dim;
        }
    }

    const DescriptorPtr& descriptor() const { return desc_; }
    int input_dim() const { return layers_.front().in_dim; }
    int output_dim() const { return layers_.back().out_dim; }
    int depth() const { return static_cast<int>(layers_.size()); }
    const std::vector<CStarLayer>& layers() const { return layers_; }
    std::vector<CStarLayer>& layers() { return layers_; }

    ModuleVector forward(const ModuleVector& x) const {
        require_same_descriptor(desc_, x.descriptor(), "net forward");
        if (x.dim() != input_dim())
            throw DescriptorMismatch("net forward: input width mismatch");
        ModuleVector state = x;
        for (const auto& layer : layers_) state = apply_layer(layer, state);
        return state;
    }

    /// The z-slice network of a grid-function net: f_z(x) computed directly
    /// from the sliced weights W^j(z), b^j(z).  Exactly equals the z-entry of
    /// forward(x), since products and activations act per grid coordinate.
    Eigen::VectorXcd forward_at(const ModuleVector& x, int z) const {
        check_grid(z);
        require_same_descriptor(desc_, x.descriptor(), "forward_at");
        if (x.dim() != input_dim())
            throw DescriptorMismatch("forward_at: input width mismatch");
        Eigen::VectorXcd state(x.dim());
        for (int k = 0; k < x.dim(); ++k) state[k] = x[k].coords()[z];
        return forward_slice(state, z);
    }

    /// Scalar forward pass through the z-slice weights.
    Eigen::VectorXcd forward_slice(const Eigen::VectorXcd& xz, int z) const {
        check_grid(z);
        Eigen::VectorXcd state = xz;
        for (const auto& layer : layers_) {
            Eigen::VectorXcd next(layer.out_dim);
            for (int i = 0; i < layer.out_dim; ++i) {
                Complex acc = layer.bias[static_cast<size_t>(i)].coords()[z];
                for (int k = 0; k < layer.in_dim; ++k)
                    acc += layer.weight(i, k).coords()[z] * state[k];
                next[i] = layer.activation.apply(acc);
            }
            state = std::move(next);
        }
        return state;
    }

private:
    void check_grid(int z) const {
        if (desc_->kind() != AlgebraKind::GridFunction)
            throw InvalidArgument("slice access requires a grid-function descriptor");
        if (z < 0 || z >= desc_->grid_size())
            throw InvalidArgument("grid index out of range");
    }

    ModuleVector apply_layer(const CStarLayer& layer, const ModuleVector& state) const {
        std::vector<AlgebraElement> out;
        out.reserve(static_cast<size_t>(layer.out_dim));
        for (int i = 0; i < layer.out_dim; ++i) {
            AlgebraElement acc = layer.bias[static_cast<size_t>(i)];
            for (int k = 0; k < layer.in_dim; ++k) {
                const AlgebraElement& w = layer.weight(i, k);
                acc = add(acc, layer.action == WeightAction::Left ? mul(w, state[k])
                                                                  : mul(state[k], w));
            }
            Eigen::VectorXcd c(acc.coords().size());
            for (int idx = 0; idx < c.size(); ++idx)
                c[idx] = layer.activation.apply(acc.coords()[idx]);
            out.emplace_back(desc_, std::move(c));
        }
        return ModuleVector(std::move(out));
    }

    DescriptorPtr desc_;
    std::vector<CStarLayer> layers_;
};

/// The z-slice of a grid net as a standalone scalar network; its forward
/// agrees with forward_at on every input.
inline ScalarNet instantiate_scalar_net(const CStarNet& net, int z) {
    if (net.descriptor()->kind() != AlgebraKind::GridFunction)
        throw InvalidArgument("instantiate_scalar_net requires a grid-function descriptor");
    if (z < 0 || z >= net.descriptor()->grid_size())
        throw InvalidArgument("grid index out of range");
    std::vector<ScalarLayer> layers;
    for (const auto& layer : net.layers()) {
        ScalarLayer sl;
        sl.weights.resize(layer.out_dim, layer.in_dim);
        sl.bias.resize(layer.out_dim);
        for (int i = 0; i < layer.out_dim; ++i) {
            sl.bias[i] = layer.bias[static_cast<size_t>(i)].coords()[z];
            for (int k = 0; k < layer.in_dim; ++k)
                sl.weights(i, k) = layer.weight(i, k).coords()[z];
        }
        sl.activation = layer.activation;
        layers.push_back(std::move(sl));
    }
    return ScalarNet(std::move(layers));
}

/// Embeds a plain complex vector as a constant-in-z module vector,
/// x(z) = xhat for every z.
inline ModuleVector embed_constant(const DescriptorPtr& desc, const Eigen::VectorXcd& xhat) {
    std::vector<AlgebraElement> entries;
    entries.reserve(static_cast<size_t>(xhat.size()));
    for (int k = 0; k < xhat.size(); ++k)
        entries.push_back(AlgebraElement::from_scalar(desc, xhat[k]));
    return ModuleVector(std::move(entries));
}

/// Seeded i.i.d. uniform initialization scaled by 1/sqrt(in_dim * coord_size);
/// real-valued coordinates.
inline CStarNet random_net(const DescriptorPtr& desc, const std::vector<int>& widths,
                           ActivationSpec activation, Rng& rng,
                           WeightAction action = WeightAction::Left) {
    if (widths.size() < 2) throw InvalidArgument("random_net needs >= 2 widths");
    std::vector<CStarLayer> layers;
    for (size_t l = 0; l + 1 < widths.size(); ++l) {
        CStarLayer layer;
        layer.in_dim = widths[l];
        layer.out_dim = widths[l + 1];
        layer.activation = activation;
        layer.action = action;
        const double s =
            1.0 / std::sqrt(static_cast<double>(layer.in_dim) * desc->coord_size());
        std::uniform_real_distribution<double> u(-s, s);
        for (int i = 0; i < layer.out_dim * layer.in_dim; ++i) {
            Eigen::VectorXcd c(desc->coord_size());
            for (int t = 0; t < c.size(); ++t) c[t] = Complex(u(rng), 0.0);
            layer.weights.emplace_back(desc, std::move(c));
        }
        for (int i = 0; i < layer.out_dim; ++i) {
            Eigen::VectorXcd c(desc->coord_size());
            for (int t = 0; t < c.size(); ++t) c[t] = Complex(u(rng), 0.0);
            layer.bias.emplace_back(desc, std::move(c));
        }
        layers.push_back(std::move(layer));
    }
    return CStarNet(desc, std::move(layers));
}

}  // namespace cstar::net
