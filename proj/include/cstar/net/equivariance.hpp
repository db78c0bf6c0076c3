#pragma once

#include "cstar/net/net.hpp"

namespace cstar::net {

/// Entrywise right translation of a group-algebra module vector:
/// (rho_g x)_i(h) = x_i(hg).
inline ModuleVector translate_right(const ModuleVector& x, int g) {
    std::vector<AlgebraElement> entries;
    entries.reserve(static_cast<size_t>(x.dim()));
    for (int i = 0; i < x.dim(); ++i) entries.push_back(cstar::translate_right(x[i], g));
    return ModuleVector(std::move(entries));
}

/// Max over random inputs and all group elements of the coordinatewise
/// distance between f(rho_g x) and rho_g f(x).  Left-action weights commute
/// with right translation, so a correctly built group net scores ~0; a
/// right-action net over a nonabelian group does not.
inline double equivariance_error(const CStarNet& net, int trials, uint64_t seed) {
    if (net.descriptor()->kind() != AlgebraKind::GroupAlgebra)
        throw InvalidArgument("equivariance_error requires a group-algebra descriptor");
    const auto& group = net.descriptor()->group();
    Rng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<AlgebraElement> entries;
        for (int i = 0; i < net.input_dim(); ++i)
            entries.push_back(random_element(net.descriptor(), rng));
        ModuleVector x(std::move(entries));
        ModuleVector fx = net.forward(x);
        for (int g = 0; g < group.order(); ++g) {
            ModuleVector lhs = net.forward(translate_right(x, g));
            ModuleVector rhs = translate_right(fx, g);
            for (int i = 0; i < lhs.dim(); ++i)
                worst = std::max(worst, max_coord_dist(lhs[i], rhs[i]));
        }
    }
    return worst;
}

/// A group net whose biases are constant functions on G (the translation
/// invariant elements), so the whole affine layer is equivariant.
inline CStarNet random_equivariant_net(const DescriptorPtr& desc,
                                       const std::vector<int>& widths,
                                       ActivationSpec activation, Rng& rng,
                                       WeightAction action = WeightAction::Left) {
    if (desc->kind() != AlgebraKind::GroupAlgebra)
        throw InvalidArgument("random_equivariant_net requires a group algebra");
    CStarNet net = random_net(desc, widths, activation, rng, action);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (auto& layer : net.layers())
        for (auto& b : layer.bias) {
            const Complex value(u(rng), 0.0);
            b.coords().setConstant(value);
        }
    return net;
}

}  // namespace cstar::net
