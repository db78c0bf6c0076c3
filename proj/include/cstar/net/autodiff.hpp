#pragma once

#include <cmath>
#include <vector>

#include "cstar/net/net.hpp"

namespace cstar::net {

/// Squared loss of one prediction: sum over entries and coordinates of
/// |out - target|^2, real and imaginary parts both counted.
inline double squared_loss(const ModuleVector& out, const ModuleVector& target) {
    if (out.dim() != target.dim()) throw DescriptorMismatch("loss: width mismatch");
    double acc = 0.0;
    for (int i = 0; i < out.dim(); ++i)
        acc += (out[i].coords() - target[i].coords()).squaredNorm();
    return acc;
}

struct LayerGrad {
    std::vector<AlgebraElement> weights;
    std::vector<AlgebraElement> bias;
};

struct NetGrad {
    std::vector<LayerGrad> layers;

    static NetGrad zeros_like(const CStarNet& net) {
        NetGrad g;
        for (const auto& layer : net.layers()) {
            LayerGrad lg;
            lg.weights.assign(layer.weights.size(),
                              AlgebraElement::zero(net.descriptor()));
            lg.bias.assign(layer.bias.size(), AlgebraElement::zero(net.descriptor()));
            g.layers.push_back(std::move(lg));
        }
        return g;
    }
};

/// Backpropagation for one sample.  Gradients are packed complex arrays
/// g = dL/d(re) + i dL/d(im); the chain rule through the bilinear algebra
/// product c = a b is grad_a = mul(g, star(b)) and grad_b = mul(star(a), g),
/// which reduces to g B^H / A^H g for matrices and to conjugate pointwise
/// products for grids.  Returns the sample loss; gradients are scaled by
/// `weight` and accumulated into `grad`.
inline double backprop_sample(const CStarNet& net, const ModuleVector& x,
                              const ModuleVector& y, NetGrad& grad, double weight = 1.0) {
    const auto& desc = net.descriptor();
    const int L = net.depth();

    // Forward pass, caching pre-activations and layer outputs.
    std::vector<ModuleVector> states;   // states[l] = input of layer l
    std::vector<ModuleVector> preacts;  // pre-activation of layer l
    states.reserve(static_cast<size_t>(L) + 1);
    preacts.reserve(static_cast<size_t>(L));
    states.push_back(x);
    for (const auto& layer : net.layers()) {
        const ModuleVector& s = states.back();
        std::vector<AlgebraElement> pre;
        pre.reserve(static_cast<size_t>(layer.out_dim));
        for (int i = 0; i < layer.out_dim; ++i) {
            AlgebraElement acc = layer.bias[static_cast<size_t>(i)];
            for (int k = 0; k < layer.in_dim; ++k) {
                const AlgebraElement& w = layer.weight(i, k);
                acc = add(acc, layer.action == WeightAction::Left ? mul(w, s[k])
                                                                  : mul(s[k], w));
            }
            pre.push_back(std::move(acc));
        }
        ModuleVector pre_v(std::move(pre));
        std::vector<AlgebraElement> post;
        post.reserve(static_cast<size_t>(layer.out_dim));
        for (int i = 0; i < layer.out_dim; ++i) {
            Eigen::VectorXcd c(pre_v[i].coords().size());
            for (int t = 0; t < c.size(); ++t)
                c[t] = layer.activation.apply(pre_v[i].coords()[t]);
            post.emplace_back(desc, std::move(c));
        }
        preacts.push_back(std::move(pre_v));
        states.emplace_back(std::move(post));
    }

    const ModuleVector& out = states.back();
    const double loss = squared_loss(out, y);

    // Output gradient of the squared loss: 2 (out - y), scaled.
    std::vector<AlgebraElement> g;
    g.reserve(static_cast<size_t>(out.dim()));
    for (int i = 0; i < out.dim(); ++i)
        g.push_back(AlgebraElement(desc, (2.0 * weight) * (out[i].coords() - y[i].coords())));

    for (int l = L - 1; l >= 0; --l) {
        const auto& layer = net.layers()[static_cast<size_t>(l)];
        auto& lg = grad.layers[static_cast<size_t>(l)];
        const ModuleVector& s_in = states[static_cast<size_t>(l)];

        // Through the activation.
        for (int i = 0; i < layer.out_dim; ++i) {
            Eigen::VectorXcd& gc = g[static_cast<size_t>(i)].coords();
            const Eigen::VectorXcd& pc = preacts[static_cast<size_t>(l)][i].coords();
            for (int t = 0; t < gc.size(); ++t)
                gc[t] = layer.activation.backprop(pc[t], gc[t]);
        }

        // Through the affine map.
        std::vector<AlgebraElement> g_in(static_cast<size_t>(layer.in_dim),
                                         AlgebraElement::zero(desc));
        for (int i = 0; i < layer.out_dim; ++i) {
            const AlgebraElement& gi = g[static_cast<size_t>(i)];
            lg.bias[static_cast<size_t>(i)] = add(lg.bias[static_cast<size_t>(i)], gi);
            for (int k = 0; k < layer.in_dim; ++k) {
                auto& gw = lg.weights[static_cast<size_t>(i) * layer.in_dim + k];
                if (layer.action == WeightAction::Left) {
                    gw = add(gw, mul(gi, star(s_in[k])));
                    g_in[static_cast<size_t>(k)] =
                        add(g_in[static_cast<size_t>(k)], mul(star(layer.weight(i, k)), gi));
                } else {
                    gw = add(gw, mul(star(s_in[k]), gi));
                    g_in[static_cast<size_t>(k)] =
                        add(g_in[static_cast<size_t>(k)], mul(gi, star(layer.weight(i, k))));
                }
            }
        }
        g = std::move(g_in);
    }
    return loss;
}

struct NetDataset {
    std::vector<ModuleVector> inputs;
    std::vector<ModuleVector> targets;

    void validate() const {
        if (inputs.empty() || inputs.size() != targets.size())
            throw InvalidArgument("dataset needs matching nonempty inputs/targets");
    }
};

/// Mean squared loss and its gradient over a dataset.
inline double dataset_loss_and_grad(const CStarNet& net, const NetDataset& data,
                                    NetGrad& grad) {
    data.validate();
    const double w = 1.0 / static_cast<double>(data.inputs.size());
    double loss = 0.0;
    for (size_t t = 0; t < data.inputs.size(); ++t)
        loss += backprop_sample(net, data.inputs[t], data.targets[t], grad, w);
    return loss * w;
}

inline double dataset_loss(const CStarNet& net, const NetDataset& data) {
    data.validate();
    double loss = 0.0;
    for (size_t t = 0; t < data.inputs.size(); ++t)
        loss += squared_loss(net.forward(data.inputs[t]), data.targets[t]);
    return loss / static_cast<double>(data.inputs.size());
}

struct TrainOptions {
    int steps = 100;
    double learning_rate = 0.1;
};

struct TrainResult {
    std::vector<double> loss_trace;  // loss before each step, plus the final loss
    bool diverged = false;
};

/// Deterministic full-batch gradient descent on the raw coordinate
/// parameters.  Divergence (non-finite loss) stops the updates and is
/// reported, not fatal.
inline TrainResult train(CStarNet& net, const NetDataset& data, const TrainOptions& opts) {
    if (opts.steps < 0) throw InvalidArgument("train: steps must be >= 0");
    TrainResult result;
    for (int step = 0; step < opts.steps; ++step) {
        NetGrad grad = NetGrad::zeros_like(net);
        const double loss = dataset_loss_and_grad(net, data, grad);
        result.loss_trace.push_back(loss);
        if (!std::isfinite(loss)) {
            result.diverged = true;
            return result;
        }
        for (size_t l = 0; l < net.layers().size(); ++l) {
            auto& layer = net.layers()[l];
            for (size_t i = 0; i < layer.weights.size(); ++i)
                layer.weights[i].coords() -=
                    opts.learning_rate * grad.layers[l].weights[i].coords();
            for (size_t i = 0; i < layer.bias.size(); ++i)
                layer.bias[i].coords() -= opts.learning_rate * grad.layers[l].bias[i].coords();
        }
    }
    const double final_loss = dataset_loss(net, data);
    result.loss_trace.push_back(final_loss);
    if (!std::isfinite(final_loss)) result.diverged = true;
    return result;
}

/// Backprop vs central finite differences (h = 1e-5) over every parameter
/// coordinate, real and imaginary parts separately; returns the largest
/// relative error.
inline double grad_check(const CStarNet& net, const ModuleVector& x, const ModuleVector& y,
                         double h = 1e-5) {
    NetGrad grad = NetGrad::zeros_like(net);
    backprop_sample(net, x, y, grad);

    CStarNet probe = net;
    auto loss_at = [&]() { return squared_loss(probe.forward(x), y); };
    auto rel_err = [](double a, double b) {
        return std::abs(a - b) / std::max({1e-6, std::abs(a), std::abs(b)});
    };

    double worst = 0.0;
    for (size_t l = 0; l < net.layers().size(); ++l) {
        auto check_param = [&](Eigen::VectorXcd& coords, const Eigen::VectorXcd& gcoords) {
            for (int t = 0; t < coords.size(); ++t) {
                for (int part = 0; part < 2; ++part) {
                    const Complex delta = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
                    const Complex orig = coords[t];
                    coords[t] = orig + delta;
                    const double lp = loss_at();
                    coords[t] = orig - delta;
                    const double lm = loss_at();
                    coords[t] = orig;
                    const double fd = (lp - lm) / (2.0 * h);
                    const double bp = part == 0 ? gcoords[t].real() : gcoords[t].imag();
                    worst = std::max(worst, rel_err(fd, bp));
                }
            }
        };
        auto& layer = probe.layers()[l];
        for (size_t i = 0; i < layer.weights.size(); ++i)
            check_param(layer.weights[i].coords(), grad.layers[l].weights[i].coords());
        for (size_t i = 0; i < layer.bias.size(); ++i)
            check_param(layer.bias[i].coords(), grad.layers[l].bias[i].coords());
    }
    return worst;
}

}  // namespace cstar::net
