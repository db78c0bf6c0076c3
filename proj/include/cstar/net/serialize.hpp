#pragma once

#include "cstar/net/basis.hpp"

namespace cstar::net {

inline Json to_json(const ActivationSpec& a) {
    Json j;
    j["type"] = to_string(a.type);
    if (a.type == Activation::Linear) j["slope"] = a.slope;
    return j;
}

inline ActivationSpec activation_from_json(const Json& j) {
    ActivationSpec a;
    a.type = activation_from_name(j.at("type").get<std::string>());
    a.slope = j.value("slope", 1.0);
    return a;
}

/// Model files carry the descriptor header, then either raw grid/coordinate
/// weights ("cstar-net") or basis coefficients ("basis-net").
inline Json to_json(const CStarNet& net) {
    Json j;
    j["type"] = "cstar-net";
    j["descriptor"] = cstar::to_json(*net.descriptor());
    Json layers = Json::array();
    for (const auto& layer : net.layers()) {
        Json lj;
        lj["out_dim"] = layer.out_dim;
        lj["in_dim"] = layer.in_dim;
        lj["activation"] = to_json(layer.activation);
        lj["action"] = layer.action == WeightAction::Left ? "left" : "right";
        Json w = Json::array();
        for (const auto& e : layer.weights) w.push_back(cstar::to_json(e));
        Json b = Json::array();
        for (const auto& e : layer.bias) b.push_back(cstar::to_json(e));
        lj["weights"] = w;
        lj["bias"] = b;
        layers.push_back(std::move(lj));
    }
    j["layers"] = layers;
    return j;
}

inline CStarNet net_from_json(const Json& j) {
    if (j.at("type").get<std::string>() != "cstar-net")
        throw IoError("model file is not a cstar-net");
    DescriptorPtr desc = descriptor_from_json(j.at("descriptor"));
    std::vector<CStarLayer> layers;
    for (const auto& lj : j.at("layers")) {
        CStarLayer layer;
        layer.out_dim = lj.at("out_dim").get<int>();
        layer.in_dim = lj.at("in_dim").get<int>();
        layer.activation = activation_from_json(lj.at("activation"));
        layer.action = lj.value("action", std::string("left")) == "right"
                           ? WeightAction::Right
                           : WeightAction::Left;
        for (const auto& e : lj.at("weights"))
            layer.weights.push_back(element_from_json(desc, e));
        for (const auto& e : lj.at("bias")) layer.bias.push_back(element_from_json(desc, e));
        layers.push_back(std::move(layer));
    }
    return CStarNet(std::move(desc), std::move(layers));
}

inline Json to_json(const BasisCStarNet& net) {
    Json j;
    j["type"] = "basis-net";
    j["descriptor"] = cstar::to_json(*net.descriptor());
    const auto& V = net.basis_values();
    std::vector<double> vre, vim;
    for (int t = 0; t < V.rows(); ++t)
        for (int l = 0; l < V.cols(); ++l) {
            vre.push_back(V(t, l).real());
            vim.push_back(V(t, l).imag());
        }
    j["basis"] = Json{{"rows", V.rows()}, {"cols", V.cols()}, {"re", vre}, {"im", vim}};
    Json layers = Json::array();
    for (const auto& layer : net.layers()) {
        Json lj;
        lj["out_dim"] = layer.out_dim;
        lj["in_dim"] = layer.in_dim;
        lj["activation"] = to_json(layer.activation);
        Json coeff = Json::array();
        for (const auto& c : layer.coeff) {
            std::vector<double> cre, cim;
            for (int i = 0; i < c.rows(); ++i)
                for (int k = 0; k < c.cols(); ++k) {
                    cre.push_back(c(i, k).real());
                    cim.push_back(c(i, k).imag());
                }
            coeff.push_back(Json{{"re", cre}, {"im", cim}});
        }
        lj["coeff"] = coeff;
        std::vector<double> bre, bim;
        for (int i = 0; i < layer.bias.size(); ++i) {
            bre.push_back(layer.bias[i].real());
            bim.push_back(layer.bias[i].imag());
        }
        lj["bias"] = Json{{"re", bre}, {"im", bim}};
        layers.push_back(std::move(lj));
    }
    j["layers"] = layers;
    return j;
}

inline BasisCStarNet basis_net_from_json(const Json& j) {
    if (j.at("type").get<std::string>() != "basis-net")
        throw IoError("model file is not a basis-net");
    DescriptorPtr desc = descriptor_from_json(j.at("descriptor"));
    const auto& bj = j.at("basis");
    const int rows = bj.at("rows").get<int>();
    const int cols = bj.at("cols").get<int>();
    auto vre = bj.at("re").get<std::vector<double>>();
    auto vim = bj.at("im").get<std::vector<double>>();
    Eigen::MatrixXcd V(rows, cols);
    for (int t = 0; t < rows; ++t)
        for (int l = 0; l < cols; ++l) {
            const size_t idx = static_cast<size_t>(t) * cols + l;
            V(t, l) = Complex(vre[idx], vim[idx]);
        }
    std::vector<BasisLayer> layers;
    for (const auto& lj : j.at("layers")) {
        BasisLayer layer;
        layer.out_dim = lj.at("out_dim").get<int>();
        layer.in_dim = lj.at("in_dim").get<int>();
        layer.activation = activation_from_json(lj.at("activation"));
        for (const auto& cj : lj.at("coeff")) {
            auto cre = cj.at("re").get<std::vector<double>>();
            auto cim = cj.at("im").get<std::vector<double>>();
            Eigen::MatrixXcd c(layer.out_dim, layer.in_dim);
            for (int i = 0; i < layer.out_dim; ++i)
                for (int k = 0; k < layer.in_dim; ++k) {
                    const size_t idx = static_cast<size_t>(i) * layer.in_dim + k;
                    c(i, k) = Complex(cre[idx], cim[idx]);
                }
            layer.coeff.push_back(std::move(c));
        }
        auto bre = lj.at("bias").at("re").get<std::vector<double>>();
        auto bim = lj.at("bias").at("im").get<std::vector<double>>();
        layer.bias.resize(layer.out_dim);
        for (int i = 0; i < layer.out_dim; ++i) layer.bias[i] = Complex(bre[i], bim[i]);
        layers.push_back(std::move(layer));
    }
    return BasisCStarNet(std::move(desc), std::move(V), std::move(layers));
}

}  // namespace cstar::net
