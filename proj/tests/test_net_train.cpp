#include <gtest/gtest.h>

#include "cstar/net/autodiff.hpp"
#include "cstar/net/basis.hpp"
#include "test_support.hpp"

using namespace cstar;
using namespace cstar::net;
using cstar::testing::all_kinds;
using cstar::testing::random_module_vector;

namespace {

NetDataset random_dataset(const DescriptorPtr& desc, int n, int in_dim, int out_dim,
                          Rng& rng) {
    NetDataset data;
    for (int t = 0; t < n; ++t) {
        data.inputs.push_back(random_module_vector(desc, in_dim, rng));
        data.targets.push_back(random_module_vector(desc, out_dim, rng));
    }
    return data;
}

// Keeps relu pre-activations away from their kinks, re-rolling the sample.
bool away_from_kinks(const CStarNet& net, const ModuleVector& x, double margin) {
    ModuleVector state = x;
    for (const auto& layer : net.layers()) {
        std::vector<AlgebraElement> pre;
        for (int i = 0; i < layer.out_dim; ++i) {
            AlgebraElement acc = layer.bias[static_cast<size_t>(i)];
            for (int k = 0; k < layer.in_dim; ++k)
                acc = add(acc, mul(layer.weight(i, k), state[k]));
            pre.push_back(acc);
        }
        for (const auto& p : pre)
            for (int t = 0; t < p.coords().size(); ++t)
                if (std::abs(p.coords()[t].real()) < margin ||
                    std::abs(p.coords()[t].imag()) < margin)
                    return false;
        std::vector<AlgebraElement> post;
        for (auto& p : pre) {
            Eigen::VectorXcd c(p.coords().size());
            for (int t = 0; t < c.size(); ++t) c[t] = layer.activation.apply(p.coords()[t]);
            post.emplace_back(x.descriptor(), std::move(c));
        }
        state = ModuleVector(std::move(post));
    }
    return true;
}

}  // namespace

TEST(GradCheck, IdentitySingleLayer) {
    Rng rng(61);
    for (const auto& desc : all_kinds()) {
        CStarNet net = random_net(desc, {2, 2}, {Activation::Identity}, rng);
        ModuleVector x = random_module_vector(desc, 2, rng);
        ModuleVector y = random_module_vector(desc, 2, rng);
        EXPECT_LE(grad_check(net, x, y), 1e-7) << to_string(desc->kind());
    }
}

TEST(GradCheck, TanhThreeLayerGrid) {
    auto desc = AlgebraDescriptor::grid_function(8);
    Rng rng(62);
    CStarNet net = random_net(desc, {3, 4, 3, 2}, {Activation::Tanh}, rng);
    ModuleVector x = random_module_vector(desc, 3, rng);
    ModuleVector y = random_module_vector(desc, 2, rng);
    EXPECT_LE(grad_check(net, x, y), 1e-5);
}

TEST(GradCheck, TanhDeepAcrossKinds) {
    Rng rng(63);
    for (const auto& desc : all_kinds()) {
        CStarNet net = random_net(desc, {2, 3, 2}, {Activation::Tanh}, rng);
        ModuleVector x = random_module_vector(desc, 2, rng);
        ModuleVector y = random_module_vector(desc, 2, rng);
        EXPECT_LE(grad_check(net, x, y), 1e-5) << to_string(desc->kind());
    }
}

TEST(GradCheck, ReluAwayFromKinks) {
    Rng rng(64);
    for (const auto& desc : all_kinds()) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            CStarNet net = random_net(desc, {2, 3, 2}, {Activation::Relu}, rng);
            ModuleVector x = random_module_vector(desc, 2, rng);
            if (!away_from_kinks(net, x, 1e-3)) continue;
            ModuleVector y = random_module_vector(desc, 2, rng);
            EXPECT_LE(grad_check(net, x, y), 1e-5) << to_string(desc->kind());
            break;
        }
    }
}

TEST(GradCheck, RightActionWeights) {
    auto desc = AlgebraDescriptor::group_algebra(GroupTable::symmetric3());
    Rng rng(65);
    CStarNet net = random_net(desc, {2, 2}, {Activation::Tanh}, rng, WeightAction::Right);
    ModuleVector x = random_module_vector(desc, 2, rng);
    ModuleVector y = random_module_vector(desc, 2, rng);
    EXPECT_LE(grad_check(net, x, y), 1e-5);
}

TEST(Train, ZeroStepsLeavesParametersUntouched) {
    auto desc = AlgebraDescriptor::circulant(3);
    Rng rng(66);
    CStarNet net = random_net(desc, {2, 2}, {Activation::Tanh}, rng);
    CStarNet before = net;
    NetDataset data = random_dataset(desc, 4, 2, 2, rng);
    TrainResult r = train(net, data, {0, 0.1});
    EXPECT_EQ(r.loss_trace.size(), 1u);
    EXPECT_FALSE(r.diverged);
    for (size_t l = 0; l < net.layers().size(); ++l)
        for (size_t i = 0; i < net.layers()[l].weights.size(); ++i)
            EXPECT_LE(max_coord_dist(net.layers()[l].weights[i],
                                     before.layers()[l].weights[i]),
                      0.0);
}

// Oracle: augmented normal equations.  A linear 1-layer scalar net trained on
// noiseless linear data converges to the least-squares solution.
TEST(Train, LinearScalarNetReachesOlsSolution) {
    auto desc = AlgebraDescriptor::scalar();
    Rng rng(67);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    const int n = 24, d_in = 3;
    Eigen::MatrixXd X(n, d_in);
    Eigen::VectorXd yv(n);
    Eigen::Vector3d truth(0.7, -0.4, 0.2);
    const double truth_bias = 0.3;
    for (int t = 0; t < n; ++t) {
        for (int k = 0; k < d_in; ++k) X(t, k) = u(rng);
        yv[t] = X.row(t).dot(truth) + truth_bias;
    }

    // Normal equations with an appended all-ones column.
    Eigen::MatrixXd Xa(n, d_in + 1);
    Xa << X, Eigen::VectorXd::Ones(n);
    Eigen::VectorXd ols = (Xa.transpose() * Xa).ldlt().solve(Xa.transpose() * yv);

    NetDataset data;
    for (int t = 0; t < n; ++t) {
        std::vector<AlgebraElement> in;
        for (int k = 0; k < d_in; ++k) in.push_back(AlgebraElement::from_scalar(desc, X(t, k)));
        data.inputs.emplace_back(std::move(in));
        data.targets.emplace_back(
            std::vector<AlgebraElement>{AlgebraElement::from_scalar(desc, yv[t])});
    }

    CStarNet net = random_net(desc, {d_in, 1}, {Activation::Identity}, rng);
    TrainResult r = train(net, data, {4000, 0.25});
    ASSERT_FALSE(r.diverged);
    EXPECT_LT(r.loss_trace.back(), 1e-10);
    for (int k = 0; k < d_in; ++k)
        EXPECT_NEAR(net.layers()[0].weight(0, k).coords()[0].real(), ols[k], 1e-4);
    EXPECT_NEAR(net.layers()[0].bias[0].coords()[0].real(), ols[d_in], 1e-4);
}

// Oracle: a grid net with decoupled weights trains exactly like m
// independent scalar nets on the slice data.
TEST(Train, GridTrainingEqualsPerSliceScalarTraining) {
    const int m = 3;
    auto grid = AlgebraDescriptor::grid_function(m);
    auto scalar = AlgebraDescriptor::scalar();
    Rng rng(68);

    CStarNet gnet = random_net(grid, {2, 3, 1}, {Activation::Tanh}, rng);
    NetDataset gdata = random_dataset(grid, 5, 2, 1, rng);
    const TrainOptions opts{40, 0.05};

    // Scalar copies of each slice, trained on the slice data.
    std::vector<CStarNet> slices;
    for (int z = 0; z < m; ++z) {
        std::vector<CStarLayer> layers;
        for (const auto& gl : gnet.layers()) {
            CStarLayer sl;
            sl.out_dim = gl.out_dim;
            sl.in_dim = gl.in_dim;
            sl.activation = gl.activation;
            for (const auto& w : gl.weights)
                sl.weights.push_back(AlgebraElement::from_scalar(scalar, w.coords()[z]));
            for (const auto& b : gl.bias)
                sl.bias.push_back(AlgebraElement::from_scalar(scalar, b.coords()[z]));
            layers.push_back(std::move(sl));
        }
        slices.emplace_back(scalar, std::move(layers));
    }

    train(gnet, gdata, opts);

    for (int z = 0; z < m; ++z) {
        NetDataset sdata;
        for (size_t t = 0; t < gdata.inputs.size(); ++t) {
            std::vector<AlgebraElement> in, out;
            for (int k = 0; k < gdata.inputs[t].dim(); ++k)
                in.push_back(
                    AlgebraElement::from_scalar(scalar, gdata.inputs[t][k].coords()[z]));
            for (int k = 0; k < gdata.targets[t].dim(); ++k)
                out.push_back(
                    AlgebraElement::from_scalar(scalar, gdata.targets[t][k].coords()[z]));
            sdata.inputs.emplace_back(std::move(in));
            sdata.targets.emplace_back(std::move(out));
        }
        // The grid loss is the sum of slice losses and slice parameters are
        // decoupled, so the slice-z gradient of the grid training equals the
        // gradient of the standalone scalar training.
        train(slices[static_cast<size_t>(z)], sdata, opts);
        for (size_t l = 0; l < gnet.layers().size(); ++l) {
            for (size_t i = 0; i < gnet.layers()[l].weights.size(); ++i)
                EXPECT_NEAR(std::abs(gnet.layers()[l].weights[i].coords()[z] -
                                     slices[static_cast<size_t>(z)].layers()[l].weights[i]
                                         .coords()[0]),
                            0.0, 1e-12)
                    << "slice " << z;
            for (size_t i = 0; i < gnet.layers()[l].bias.size(); ++i)
                EXPECT_NEAR(std::abs(gnet.layers()[l].bias[i].coords()[z] -
                                     slices[static_cast<size_t>(z)].layers()[l].bias[i]
                                         .coords()[0]),
                            0.0, 1e-12);
        }
    }
}

TEST(Train, DivergenceIsReportedNotFatal) {
    auto desc = AlgebraDescriptor::scalar();
    Rng rng(69);
    CStarNet net = random_net(desc, {1, 1}, {Activation::Identity}, rng);
    NetDataset data = random_dataset(desc, 3, 1, 1, rng);
    TrainResult r = train(net, data, {200, 1e6});  // absurd step size
    EXPECT_TRUE(r.diverged);
}

TEST(TrainBasis, GradientDescentOnCoefficientsDecreasesLoss) {
    const int m_grid = 6, m_basis = 2;
    auto desc = AlgebraDescriptor::grid_function(m_grid);
    Rng rng(70);
    Eigen::VectorXd pts(m_grid);
    for (int t = 0; t < m_grid; ++t) pts[t] = -1.0 + 2.0 * t / (m_grid - 1);
    Eigen::MatrixXcd V = monomial_basis(pts, m_basis);

    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<BasisLayer> layers(2);
    layers[0].out_dim = 2;
    layers[0].in_dim = 2;
    layers[1].out_dim = 1;
    layers[1].in_dim = 2;
    for (auto& l : layers) {
        for (int b = 0; b < m_basis; ++b) {
            Eigen::MatrixXcd c(l.out_dim, l.in_dim);
            for (int i = 0; i < l.out_dim; ++i)
                for (int k = 0; k < l.in_dim; ++k) c(i, k) = Complex(u(rng), 0.0);
            l.coeff.push_back(std::move(c));
        }
        l.bias = Eigen::VectorXcd::Zero(l.out_dim);
        l.activation = {Activation::Tanh};
    }
    BasisCStarNet bnet(desc, V, std::move(layers));

    NetDataset data = random_dataset(desc, 6, 2, 1, rng);
    TrainResult r = train_basis(bnet, data, {60, 0.05});
    ASSERT_FALSE(r.diverged);
    EXPECT_LT(r.loss_trace.back(), r.loss_trace.front());

    // The analytic coefficient gradient agrees with finite differences.
    const double h = 1e-6;
    CStarNet realized = bnet.realize();
    NetGrad grad = NetGrad::zeros_like(realized);
    double base = 0.0;
    for (size_t t = 0; t < data.inputs.size(); ++t)
        base += backprop_sample(realized, data.inputs[t], data.targets[t], grad,
                                1.0 / data.inputs.size());
    base /= static_cast<double>(data.inputs.size());
    const Eigen::VectorXcd& gw = grad.layers[0].weights[0].coords();
    const Complex analytic = V.col(1).dot(gw);

    auto loss_of = [&](const BasisCStarNet& n) {
        return dataset_loss(n.realize(), data);
    };
    BasisCStarNet probe = bnet;
    probe.layers()[0].coeff[1](0, 0) += h;
    const double lp = loss_of(probe);
    probe.layers()[0].coeff[1](0, 0) -= 2 * h;
    const double lm = loss_of(probe);
    EXPECT_NEAR((lp - lm) / (2 * h), analytic.real(), 1e-5);
}
