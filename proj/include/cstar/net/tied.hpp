#pragma once

#include <optional>

#include "cstar/net/net.hpp"

namespace cstar::net {

/// Surjective parameter map alpha: W -> Omega with Omega = [-bound, bound].
/// Identity takes W = Omega; TanhClamp takes W = R onto the open interval,
/// the closed endpoints being limits.
struct AlphaMap {
    enum class Kind { Identity, TanhClamp };
    Kind kind = Kind::Identity;
    double bound = 10.0;

    double apply(double z) const {
        return kind == Kind::Identity ? z : bound * std::tanh(z);
    }

    double invert(double w) const {
        if (kind == Kind::Identity) return w;
        if (std::abs(w) >= bound)
            throw InvalidArgument("alpha invert: value outside the open interval");
        return std::atanh(w / bound);
    }
};

/// Flat index of one scalar-net parameter: column in_dim addresses the bias.
struct ParameterIndex {
    int layer = 0;
    int row = 0;
    int col = 0;  // 0..in_dim-1 weight, in_dim bias

    bool operator==(const ParameterIndex& o) const {
        return layer == o.layer && row == o.row && col == o.col;
    }
};

/// The tying partition M_1..M_K of the parameter index set, each block bound
/// to one coordinate of Z = W^K through its alpha map.  Parameters in no
/// block (M_0) stay fixed at their template values.
class ParameterMap {
public:
    ParameterMap(std::vector<std::vector<ParameterIndex>> blocks,
                 std::vector<AlphaMap> alphas)
        : blocks_(std::move(blocks)), alphas_(std::move(alphas)) {
        if (alphas_.size() != blocks_.size())
            throw InvalidArgument("parameter map needs one alpha per block");
        for (const auto& blk : blocks_) {
            if (blk.empty()) throw InvalidArgument("tying blocks must be nonempty");
            for (const auto& idx : blk) {
                for (const auto& other : seen_)
                    if (idx == other)
                        throw InvalidArgument("tying blocks must be disjoint");
                seen_.push_back(idx);
            }
        }
    }

    int tied_count() const { return static_cast<int>(blocks_.size()); }  // K
    const std::vector<std::vector<ParameterIndex>>& blocks() const { return blocks_; }
    const AlphaMap& alpha(int block) const { return alphas_[static_cast<size_t>(block)]; }

    /// Block index owning a parameter, or nullopt for the fixed block M_0.
    std::optional<int> block_of(const ParameterIndex& idx) const {
        for (size_t b = 0; b < blocks_.size(); ++b)
            for (const auto& p : blocks_[b])
                if (p == idx) return static_cast<int>(b);
        return std::nullopt;
    }

    /// K = 0: every parameter fixed; the net is constant in z.
    static ParameterMap fixed() { return ParameterMap({}, {}); }

    /// K = N: one singleton block per parameter, in canonical layer-major
    /// order (weights row-major, then the bias column).
    static ParameterMap fully_free(const std::vector<int>& widths, AlphaMap alpha) {
        std::vector<std::vector<ParameterIndex>> blocks;
        for (size_t l = 0; l + 1 < widths.size(); ++l)
            for (int i = 0; i < widths[l + 1]; ++i)
                for (int k = 0; k <= widths[l]; ++k)
                    blocks.push_back({ParameterIndex{static_cast<int>(l), i, k}});
        std::vector<AlphaMap> alphas(blocks.size(), alpha);
        return ParameterMap(std::move(blocks), std::move(alphas));
    }

    /// K = 1: every parameter tied to one scalar coordinate.
    static ParameterMap fully_tied(const std::vector<int>& widths, AlphaMap alpha) {
        std::vector<ParameterIndex> blk;
        for (size_t l = 0; l + 1 < widths.size(); ++l)
            for (int i = 0; i < widths[l + 1]; ++i)
                for (int k = 0; k <= widths[l]; ++k)
                    blk.push_back(ParameterIndex{static_cast<int>(l), i, k});
        return ParameterMap({std::move(blk)}, {alpha});
    }

private:
    std::vector<std::vector<ParameterIndex>> blocks_;
    std::vector<AlphaMap> alphas_;
    std::vector<ParameterIndex> seen_;
};

/// A grid-descriptor C*-algebra net built from a real scalar template by
/// tying parameters to coordinates of Z = W^K.  The grid holds M sampled
/// points of Z; instantiate() evaluates the slice network at an arbitrary
/// z in W^K, grid or not.
class TiedCStarNet {
public:
    static TiedCStarNet build(const ScalarNet& scalar_template, ParameterMap pm,
                              Eigen::MatrixXd sample_points) {
        const int K = pm.tied_count();
        if (sample_points.cols() != K)
            throw InvalidArgument("sample points must have K columns");
        if (K == 0 && sample_points.rows() != 1)
            throw InvalidArgument("K = 0 means Z is a singleton: exactly one sample point");
        if (sample_points.rows() < 1) throw InvalidArgument("need >= 1 sample point");
        for (const auto& layer : scalar_template.layers()) {
            if (layer.weights.imag().cwiseAbs().maxCoeff() > 1e-12 ||
                layer.bias.imag().cwiseAbs().maxCoeff() > 1e-12)
                throw InvalidArgument("tied nets require a real-valued template");
        }
        for (const auto& blk : pm.blocks())
            for (const auto& idx : blk) check_index(scalar_template, idx);

        return TiedCStarNet(scalar_template, std::move(pm), std::move(sample_points));
    }

    const CStarNet& net() const { return *net_; }
    const Eigen::MatrixXd& sample_points() const { return samples_; }
    const ParameterMap& parameter_map() const { return pm_; }

    /// The slice network at z in W^K: tied parameters take alpha(z_l), fixed
    /// ones keep their template value.
    ScalarNet instantiate(const Eigen::VectorXd& z) const {
        if (z.size() != pm_.tied_count())
            throw InvalidArgument("instantiate: z must have K coordinates");
        std::vector<ScalarLayer> layers = template_.layers();
        for (int b = 0; b < pm_.tied_count(); ++b) {
            const double value = pm_.alpha(b).apply(z[b]);
            for (const auto& idx : pm_.blocks()[static_cast<size_t>(b)]) {
                auto& layer = layers[static_cast<size_t>(idx.layer)];
                if (idx.col == layer.weights.cols())
                    layer.bias[idx.row] = value;
                else
                    layer.weights(idx.row, idx.col) = value;
            }
        }
        return ScalarNet(std::move(layers));
    }

    /// The z realizing a target scalar net through this map (the converse
    /// inclusion of the function-class equivalence).  Requires the target to
    /// respect the tying: all parameters of a block must share one value.
    Eigen::VectorXd parameter_point(const ScalarNet& target) const {
        Eigen::VectorXd z(pm_.tied_count());
        for (int b = 0; b < pm_.tied_count(); ++b) {
            const auto& blk = pm_.blocks()[static_cast<size_t>(b)];
            const double w0 = read_param(target, blk.front());
            for (const auto& idx : blk)
                if (std::abs(read_param(target, idx) - w0) > 1e-9)
                    throw InvalidArgument("target does not respect the tying partition");
            z[b] = pm_.alpha(b).invert(w0);
        }
        return z;
    }

private:
    TiedCStarNet(ScalarNet scalar_template, ParameterMap pm, Eigen::MatrixXd samples)
        : template_(std::move(scalar_template)), pm_(std::move(pm)), samples_(std::move(samples)) {
        realize();
    }

    static void check_index(const ScalarNet& net, const ParameterIndex& idx) {
        if (idx.layer < 0 || idx.layer >= static_cast<int>(net.layers().size()))
            throw InvalidArgument("parameter index: layer out of range");
        const auto& layer = net.layers()[static_cast<size_t>(idx.layer)];
        if (idx.row < 0 || idx.row >= layer.weights.rows() || idx.col < 0 ||
            idx.col > layer.weights.cols())
            throw InvalidArgument("parameter index out of range");
    }

    static double read_param(const ScalarNet& net, const ParameterIndex& idx) {
        const auto& layer = net.layers()[static_cast<size_t>(idx.layer)];
        return idx.col == layer.weights.cols() ? layer.bias[idx.row].real()
                                               : layer.weights(idx.row, idx.col).real();
    }

    void realize() {
        const int M = static_cast<int>(samples_.rows());
        auto desc = AlgebraDescriptor::grid_function(M);
        std::vector<CStarLayer> layers;
        for (size_t l = 0; l < template_.layers().size(); ++l) {
            const auto& tl = template_.layers()[l];
            CStarLayer cl;
            cl.out_dim = static_cast<int>(tl.weights.rows());
            cl.in_dim = static_cast<int>(tl.weights.cols());
            cl.activation = tl.activation;
            auto grid_values = [&](const ParameterIndex& idx, double fixed_value) {
                Eigen::VectorXcd v(M);
                if (auto b = pm_.block_of(idx)) {
                    for (int t = 0; t < M; ++t)
                        v[t] = pm_.alpha(*b).apply(samples_(t, *b));
                } else {
                    v.setConstant(fixed_value);
                }
                return v;
            };
            for (int i = 0; i < cl.out_dim; ++i)
                for (int k = 0; k < cl.in_dim; ++k)
                    cl.weights.emplace_back(
                        desc, grid_values(ParameterIndex{static_cast<int>(l), i, k},
                                          tl.weights(i, k).real()));
            for (int i = 0; i < cl.out_dim; ++i)
                cl.bias.emplace_back(
                    desc, grid_values(ParameterIndex{static_cast<int>(l), i, cl.in_dim},
                                      tl.bias[i].real()));
            layers.push_back(std::move(cl));
        }
        net_.emplace(std::move(desc), std::move(layers));
    }

    ScalarNet template_;
    ParameterMap pm_;
    Eigen::MatrixXd samples_;
    std::optional<CStarNet> net_;
};

/// build_tied_net, named as an operation.
inline TiedCStarNet build_tied_net(const ScalarNet& scalar_template, ParameterMap pm,
                                   Eigen::MatrixXd sample_points) {
    return TiedCStarNet::build(scalar_template, std::move(pm), std::move(sample_points));
}

}  // namespace cstar::net
