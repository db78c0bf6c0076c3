#pragma once

#include "cstar/net/net.hpp"

namespace cstar::net {

/// A probability measure on the discretized Z, supported on grid indices.
struct ProbabilityWeights {
    std::vector<int> support;  // grid indices
    Eigen::VectorXd p;         // simplex weights

    ProbabilityWeights(std::vector<int> sup, Eigen::VectorXd weights)
        : support(std::move(sup)), p(std::move(weights)) {
        if (support.empty() || static_cast<int>(support.size()) != p.size())
            throw InvalidArgument("probability weights need matching support/weights");
        for (int i = 0; i < p.size(); ++i)
            if (p[i] < 0.0) throw InvalidArgument("probability weights must be >= 0");
        if (std::abs(p.sum() - 1.0) > 1e-12)
            throw InvalidArgument("probability weights must sum to 1");
    }

    static ProbabilityWeights uniform(std::vector<int> sup) {
        const int m = static_cast<int>(sup.size());
        return ProbabilityWeights(std::move(sup), Eigen::VectorXd::Constant(m, 1.0 / m));
    }

    static ProbabilityWeights dirac(int index) {
        return ProbabilityWeights({index}, Eigen::VectorXd::Ones(1));
    }
};

/// The averaged net: sum_i p_i f_{z_i}(x), the discrete form of integrating
/// the slice networks against P.  The integrand is the fully activated slice
/// output f_z(x), so the average is generally outside the slice family.
/// Support points must lie on the grid.
inline Eigen::VectorXcd average(const CStarNet& net, const ModuleVector& x,
                                const ProbabilityWeights& P) {
    if (net.descriptor()->kind() != AlgebraKind::GridFunction)
        throw InvalidArgument("average requires a grid-function descriptor");
    const int m = net.descriptor()->grid_size();
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(net.output_dim());
    for (size_t i = 0; i < P.support.size(); ++i) {
        const int z = P.support[i];
        if (z < 0 || z >= m)
            throw InvalidArgument("average: support point off the grid");
        acc += P.p[static_cast<long>(i)] * net.forward_at(x, z);
    }
    return acc;
}

/// Precomputed slice outputs for a fixed net on a dataset of constant
/// inputs: outputs[t].col(i) = f_{z_i}(x_t).  Everything downstream of this
/// table is a quadratic function of p.
struct SliceTable {
    std::vector<Eigen::MatrixXcd> outputs;
    std::vector<Eigen::VectorXcd> targets;

    int support_size() const { return static_cast<int>(outputs.front().cols()); }
    int sample_count() const { return static_cast<int>(outputs.size()); }
};

inline SliceTable build_slice_table(const CStarNet& net,
                                    const std::vector<Eigen::VectorXcd>& inputs,
                                    const std::vector<Eigen::VectorXcd>& targets,
                                    const std::vector<int>& support) {
    if (inputs.empty() || inputs.size() != targets.size())
        throw InvalidArgument("slice table needs matching nonempty inputs/targets");
    if (support.empty()) throw InvalidArgument("slice table needs nonempty support");
    SliceTable table;
    for (size_t t = 0; t < inputs.size(); ++t) {
        ModuleVector x = embed_constant(net.descriptor(), inputs[t]);
        Eigen::MatrixXcd out(net.output_dim(), support.size());
        for (size_t i = 0; i < support.size(); ++i)
            out.col(static_cast<long>(i)) = net.forward_at(x, support[i]);
        table.outputs.push_back(std::move(out));
        table.targets.push_back(targets[t]);
    }
    return table;
}

/// Mean squared loss of the averaged net, L(P) = mean_t |S_t p - y_t|^2.
inline double averaged_loss(const SliceTable& table, const Eigen::VectorXd& p) {
    double acc = 0.0;
    for (int t = 0; t < table.sample_count(); ++t)
        acc += (table.outputs[static_cast<size_t>(t)] * p.cast<Complex>() -
                table.targets[static_cast<size_t>(t)])
                   .squaredNorm();
    return acc / table.sample_count();
}

/// grad_i = (2/n) sum_t Re <S_t p - y_t, s_{t,i}>.
inline Eigen::VectorXd averaged_loss_gradient(const SliceTable& table,
                                              const Eigen::VectorXd& p) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(p.size());
    for (int t = 0; t < table.sample_count(); ++t) {
        const auto& S = table.outputs[static_cast<size_t>(t)];
        Eigen::VectorXcd resid = S * p.cast<Complex>() - table.targets[static_cast<size_t>(t)];
        for (int i = 0; i < p.size(); ++i)
            g[i] += 2.0 * resid.dot(S.col(i)).real();
    }
    return g / table.sample_count();
}

/// Largest chord violation of convexity, max over sampled t of
/// L(t p + (1-t) q) - [t L(p) + (1-t) L(q)]; nonpositive for a convex L.
inline double max_chord_violation(const SliceTable& table, const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& q, int t_steps = 11) {
    const double lp = averaged_loss(table, p);
    const double lq = averaged_loss(table, q);
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < t_steps; ++s) {
        const double t = t_steps == 1 ? 0.5 : static_cast<double>(s) / (t_steps - 1);
        const double mid = averaged_loss(table, t * p + (1.0 - t) * q);
        worst = std::max(worst, mid - (t * lp + (1.0 - t) * lq));
    }
    return worst;
}

struct MeasureOptResult {
    ProbabilityWeights weights;
    std::vector<double> trace;  // objective per accepted iterate
    double initial = 0.0;
    double final = 0.0;
};

/// Exponentiated-gradient (entropic mirror descent) on the simplex, with a
/// 0.5/Lipschitz initial step, growth on accepted steps and halving on
/// rejected ones.  The objective is convex in p, iterates stay on the
/// simplex by construction, and the final objective never exceeds the
/// initial one.
inline MeasureOptResult optimize_measure(const CStarNet& net,
                                         const std::vector<Eigen::VectorXcd>& inputs,
                                         const std::vector<Eigen::VectorXcd>& targets,
                                         const ProbabilityWeights& p0, int steps) {
    if (steps < 0) throw InvalidArgument("optimize_measure: steps must be >= 0");
    SliceTable table = build_slice_table(net, inputs, targets, p0.support);

    Eigen::VectorXd p = p0.p;
    double obj = averaged_loss(table, p);
    MeasureOptResult result{p0, {obj}, obj, obj};

    // Entrywise gradient bound as the Lipschitz estimate.
    double lip = 0.0;
    for (int t = 0; t < table.sample_count(); ++t) {
        const auto& S = table.outputs[static_cast<size_t>(t)];
        double max_col = 0.0;
        for (int i = 0; i < S.cols(); ++i) max_col = std::max(max_col, S.col(i).norm());
        const double y = table.targets[static_cast<size_t>(t)].norm();
        lip += 2.0 * max_col * (max_col + y);
    }
    lip /= std::max(1, table.sample_count());
    double eta = 0.5 / std::max(lip, 1e-12);

    for (int step = 0; step < steps; ++step) {
        Eigen::VectorXd g = averaged_loss_gradient(table, p);
        bool accepted = false;
        for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
            Eigen::VectorXd scaled = -eta * g;
            scaled.array() -= scaled.maxCoeff();  // shift for overflow safety
            Eigen::VectorXd candidate = p.cwiseProduct(scaled.array().exp().matrix());
            const double total = candidate.sum();
            if (!(total > 0.0) || !candidate.allFinite()) {
                eta *= 0.5;
                continue;
            }
            candidate /= total;
            const double cand_obj = averaged_loss(table, candidate);
            if (cand_obj <= obj) {
                p = std::move(candidate);
                obj = cand_obj;
                eta *= 1.2;
                accepted = true;
            } else {
                eta *= 0.5;
            }
        }
        result.trace.push_back(obj);
        if (!accepted) break;  // no descent direction at float resolution
    }

    result.weights = ProbabilityWeights(p0.support, p / p.sum());
    result.final = obj;
    return result;
}

}  // namespace cstar::net
