#pragma once

#include <json.hpp>

#include "cstar/algebra/element.hpp"

namespace cstar {

using Json = nlohmann::json;

inline Json to_json(const AlgebraDescriptor& desc) {
    Json j;
    j["kind"] = to_string(desc.kind());
    switch (desc.kind()) {
        case AlgebraKind::Scalar:
            break;
        case AlgebraKind::DenseMatrix:
        case AlgebraKind::Circulant:
            j["dim"] = desc.matrix_dim();
            break;
        case AlgebraKind::BlockDiagonal:
            j["blocks"] = desc.block_sizes();
            break;
        case AlgebraKind::GridFunction: {
            j["points"] = desc.grid_size();
            std::vector<double> w(desc.quadrature_weights().data(),
                                  desc.quadrature_weights().data() + desc.grid_size());
            j["weights"] = w;
            break;
        }
        case AlgebraKind::GroupAlgebra:
            j["order"] = desc.group().order();
            j["table"] = desc.group().table();  // row-major
            break;
    }
    return j;
}

inline DescriptorPtr descriptor_from_json(const Json& j) {
    if (!j.contains("kind")) throw IoError("descriptor JSON missing \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "scalar") return AlgebraDescriptor::scalar();
    if (kind == "dense-matrix") return AlgebraDescriptor::dense_matrix(j.at("dim").get<int>());
    if (kind == "circulant") return AlgebraDescriptor::circulant(j.at("dim").get<int>());
    if (kind == "block-diagonal")
        return AlgebraDescriptor::block_diagonal(j.at("blocks").get<std::vector<int>>());
    if (kind == "grid-function") {
        const int m = j.at("points").get<int>();
        if (j.contains("weights")) {
            auto w = j.at("weights").get<std::vector<double>>();
            if (static_cast<int>(w.size()) != m)
                throw IoError("grid-function weights length does not match points");
            return AlgebraDescriptor::grid_function(
                Eigen::Map<const Eigen::VectorXd>(w.data(), m));
        }
        return AlgebraDescriptor::grid_function(m);
    }
    if (kind == "group-algebra") {
        const int n = j.at("order").get<int>();
        return AlgebraDescriptor::group_algebra(
            GroupTable(n, j.at("table").get<std::vector<int>>()));
    }
    throw IoError("unknown algebra kind \"" + kind + "\"");
}

/// Elements serialize as { "kind", "shape", "re", "im" }; the descriptor
/// context (group table, quadrature weights) travels separately.
inline Json to_json(const AlgebraElement& e) {
    Json j;
    j["kind"] = to_string(e.kind());
    j["shape"] = e.descriptor()->shape();
    std::vector<double> re(e.coords().size()), im(e.coords().size());
    for (int i = 0; i < e.coords().size(); ++i) {
        re[static_cast<size_t>(i)] = e.coords()[i].real();
        im[static_cast<size_t>(i)] = e.coords()[i].imag();
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

inline AlgebraElement element_from_json(const DescriptorPtr& desc, const Json& j) {
    if (j.at("kind").get<std::string>() != to_string(desc->kind()))
        throw IoError("element kind \"" + j.at("kind").get<std::string>() +
                      "\" does not match descriptor kind " + to_string(desc->kind()));
    if (j.at("shape").get<std::vector<int>>() != desc->shape())
        throw IoError("element shape does not match descriptor");
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size() || static_cast<int>(re.size()) != desc->coord_size())
        throw IoError("element coordinate arrays have wrong length");
    Eigen::VectorXcd c(desc->coord_size());
    for (int i = 0; i < c.size(); ++i)
        c[i] = Complex(re[static_cast<size_t>(i)], im[static_cast<size_t>(i)]);
    return AlgebraElement(desc, std::move(c));
}

}  // namespace cstar
