#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

#include "cstar/net/equivariance.hpp"
#include "cstar/net/measure.hpp"
#include "cstar/net/poly.hpp"
#include "cstar/rkhm/embedding.hpp"
#include "cstar/rkhm/regression.hpp"

namespace cstar::experiments {

// Desk-scale ceilings: every experiment finishes in well under a minute
// single-threaded.
inline constexpr int kMaxSamples = 256;
inline constexpr int kMaxMatrixDim = 16;
inline constexpr int kMaxGrid = 64;
inline constexpr int kMaxDepth = 5;

/// One reproducible run: metrics plus the thresholds verdict.  Reports are
/// bit-identical across reruns with the same seed; wall-clock time is kept
/// out of the serialized content so files can be compared byte for byte.
struct ExperimentReport {
    std::string id;
    uint64_t seed = 0;
    Json parameters = Json::object();
    std::map<std::string, double> metrics;
    bool pass = false;
    double wall_ms = 0.0;

    Json to_json(bool include_timing = false) const {
        Json j;
        j["experiment"] = id;
        j["seed"] = seed;
        j["parameters"] = parameters;
        j["metrics"] = metrics;
        j["pass"] = pass;
        if (include_timing) j["wall_ms"] = wall_ms;
        return j;
    }
};

namespace detail {

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::vector<DescriptorPtr> survey_descriptors() {
    return {
        AlgebraDescriptor::scalar(),
        AlgebraDescriptor::dense_matrix(3),
        AlgebraDescriptor::circulant(4),
        AlgebraDescriptor::block_diagonal({2, 2}),
        AlgebraDescriptor::grid_function(6),
        AlgebraDescriptor::group_algebra(GroupTable::symmetric3()),
    };
}

}  // namespace detail

/// C*-identity, submultiplicativity and involution laws on random elements
/// of every kind; reports the worst deviations.
inline ExperimentReport run_algebra_check(int trials, uint64_t seed) {
    if (trials < 1 || trials > 10 * kMaxSamples)
        throw InvalidArgument("algebra check: trials out of range");
    detail::Stopwatch watch;
    ExperimentReport report;
    report.id = "algebra-check";
    report.seed = seed;
    report.parameters["trials"] = trials;

    Rng rng(seed);
    double worst_cstar = 0.0, worst_submult = 0.0, worst_involution = 0.0, worst_abs = 0.0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& desc : detail::survey_descriptors()) {
        for (int t = 0; t < trials; ++t) {
            AlgebraElement a = random_element(desc, rng);
            AlgebraElement b = random_element(desc, rng);
            const double na = norm(a);
            worst_cstar = std::max(worst_cstar, std::abs(norm(mul(star(a), a)) - na * na) /
                                                    std::max(1.0, na * na));
            worst_submult =
                std::max(worst_submult, norm(mul(a, b)) - norm(a) * norm(b));
            const Complex alpha(u(rng), u(rng)), beta(u(rng), u(rng));
            worst_involution = std::max(
                {worst_involution,
                 max_coord_dist(star(add(scale(alpha, a), scale(beta, b))),
                                add(scale(std::conj(alpha), star(a)),
                                    scale(std::conj(beta), star(b)))),
                 max_coord_dist(star(mul(a, b)), mul(star(b), star(a))),
                 max_coord_dist(star(star(a)), a)});
            AlgebraElement absa = abs(a);
            worst_abs =
                std::max(worst_abs, norm(sub(mul(absa, absa), mul(star(a), a))));
        }
    }
    report.metrics["max_cstar_identity_violation"] = worst_cstar;
    report.metrics["max_submultiplicativity_violation"] = worst_submult;
    report.metrics["max_involution_violation"] = worst_involution;
    report.metrics["max_abs_square_violation"] = worst_abs;
    report.pass = worst_cstar <= 1e-10 && worst_submult <= 1e-10 &&
                  worst_involution <= 1e-12 && worst_abs <= 1e-10;
    report.wall_ms = watch.ms();
    return report;
}

/// Operator norm vs Hilbert-Schmidt norm on random dense matrices,
/// d in {2,4,8,16}: asserts op <= HS <= sqrt(d) op and reports the mean
/// ratio growth.
inline ExperimentReport run_norm_comparison(int trials, uint64_t seed) {
    if (trials < 1 || trials > 4096)
        throw InvalidArgument("norm comparison: trials out of range");
    detail::Stopwatch watch;
    ExperimentReport report;
    report.id = "norm-compare";
    report.seed = seed;
    report.parameters["trials"] = trials;

    Rng rng(seed);
    int violations = 0;
    for (int d : {2, 4, 8, 16}) {
        auto desc = AlgebraDescriptor::dense_matrix(d);
        double ratio_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            AlgebraElement a = random_element(desc, rng);
            const double op = norm(a);
            const double hs = hs_norm(a);
            if (!(op <= hs + 1e-12 && hs <= std::sqrt(static_cast<double>(d)) * op + 1e-12))
                ++violations;
            ratio_sum += hs / op;
        }
        report.metrics["mean_hs_over_op_d" + std::to_string(d)] = ratio_sum / trials;
    }
    report.metrics["violations"] = violations;
    report.pass = violations == 0;
    report.wall_ms = watch.ms();
    return report;
}

/// Generic basis net for the degree-detection experiment: widths all 1,
/// cosine basis on a full period, coefficient magnitudes in [0.7, 1.3] so
/// the top-degree term cannot vanish.
inline net::BasisCStarNet expressiveness_probe(int depth, int basis_size, uint64_t seed,
                                               int grid = 64) {
    if (depth < 1 || depth > kMaxDepth) throw InvalidArgument("depth out of range");
    if (basis_size < 1 || basis_size > 4) throw InvalidArgument("basis size out of range");
    if (grid < 8 || grid > 2 * kMaxGrid) throw InvalidArgument("grid out of range");
    Rng rng(seed);
    std::uniform_real_distribution<double> mag(0.7, 1.3);
    std::bernoulli_distribution flip(0.5);
    Eigen::VectorXd pts(grid);
    for (int t = 0; t < grid; ++t) pts[t] = 2.0 * M_PI * t / grid;
    std::vector<net::BasisLayer> layers(static_cast<size_t>(depth));
    for (auto& l : layers) {
        l.out_dim = l.in_dim = 1;
        for (int b = 0; b < basis_size; ++b) {
            Eigen::MatrixXcd c(1, 1);
            c(0, 0) = Complex((flip(rng) ? -1.0 : 1.0) * mag(rng), 0.0);
            l.coeff.push_back(c);
        }
        l.bias = Eigen::VectorXcd::Constant(1, Complex(0.5 * mag(rng), 0.0));
        l.activation = {net::Activation::Linear, 0.9};
    }
    return net::BasisCStarNet(AlgebraDescriptor::grid_function(grid),
                              net::cosine_basis(pts, basis_size), std::move(layers));
}

/// Degree detection for the linear-activation basis net: the slice map
/// z -> f_z(x) is a polynomial of degree exactly the depth in the basis
/// values, for generic coefficients.
inline ExperimentReport run_expressiveness(int depth, int basis_size, uint64_t seed) {
    detail::Stopwatch watch;
    ExperimentReport report;
    report.id = "prop-poly";
    report.seed = seed;
    report.parameters["L"] = depth;
    report.parameters["m"] = basis_size;

    net::BasisCStarNet probe = expressiveness_probe(depth, basis_size, seed);
    net::PolyDegreeResult r =
        net::poly_degree_check(probe, Eigen::VectorXcd::Constant(1, Complex(1.2, 0.0)));
    report.metrics["detected_degree"] = r.degree;
    report.metrics["residual_at_L"] = r.residuals[static_cast<size_t>(depth)];
    if (depth >= 1)
        report.metrics["residual_at_L_minus_1"] = r.residuals[static_cast<size_t>(depth) - 1];
    report.pass = r.degree == depth && r.residuals[static_cast<size_t>(depth)] <= 1e-8 &&
                  (depth == 0 || r.residuals[static_cast<size_t>(depth) - 1] > 1e-3);
    report.wall_ms = watch.ms();
    return report;
}

/// Convexity of P -> L(A_P f(x), y) over sampled simplex segments for a
/// fixed random net; reports the worst chord violation.
inline ExperimentReport run_convexity(uint64_t seed, int segments) {
    if (segments < 1 || segments > 4096) throw InvalidArgument("segments out of range");
    detail::Stopwatch watch;
    ExperimentReport report;
    report.id = "prop-convex";
    report.seed = seed;
    report.parameters["segments"] = segments;

    const int grid = 6, samples = 4;
    Rng rng(seed);
    auto desc = AlgebraDescriptor::grid_function(grid);
    net::CStarNet f = net::random_net(desc, {2, 3, 2}, {net::Activation::Tanh}, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::VectorXcd> inputs, targets;
    for (int t = 0; t < samples; ++t) {
        Eigen::VectorXcd x(2), y(2);
        x << Complex(u(rng), 0.0), Complex(u(rng), 0.0);
        y << Complex(u(rng), 0.0), Complex(u(rng), 0.0);
        inputs.push_back(x);
        targets.push_back(y);
    }
    std::vector<int> support(grid);
    for (int z = 0; z < grid; ++z) support[static_cast<size_t>(z)] = z;
    net::SliceTable table = net::build_slice_table(f, inputs, targets, support);

    std::uniform_real_distribution<double> w(0.05, 1.0);
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < segments; ++s) {
        Eigen::VectorXd p(grid), q(grid);
        for (int i = 0; i < grid; ++i) {
            p[i] = w(rng);
            q[i] = w(rng);
        }
        p /= p.sum();
        q /= q.sum();
        worst = std::max(worst, net::max_chord_violation(table, p, q, 11));
    }
    report.metrics["max_chord_violation"] = worst;
    report.pass = worst <= 1e-10;
    report.wall_ms = watch.ms();
    return report;
}

/// Train/test kernel ridge regression over the RKHM; reports A-norm errors
/// and the Gram minimum eigenvalue (flagging singular designs).
inline ExperimentReport run_rkhm_regression(const std::vector<rkhm::VectorXd>& x,
                                            const std::vector<AlgebraElement>& y,
                                            const rkhm::AKernel& kernel, double lambda,
                                            double test_fraction, uint64_t seed,
                                            bool interpolate = false) {
    if (x.size() != y.size() || x.empty()) throw InvalidArgument("regression: bad dataset");
    if (static_cast<int>(x.size()) > kMaxSamples)
        throw InvalidArgument("regression: sample ceiling exceeded");
    detail::Stopwatch watch;
    ExperimentReport report;
    report.id = "rkhm-regression";
    report.seed = seed;
    report.parameters["n"] = x.size();
    report.parameters["lambda"] = lambda;
    report.parameters["test_fraction"] = test_fraction;

    // Seeded shuffle split.
    std::vector<size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const size_t n_test =
        std::min(x.size() - 1, static_cast<size_t>(test_fraction * x.size()));
    std::vector<rkhm::VectorXd> xtr, xte;
    std::vector<AlgebraElement> ytr, yte;
    for (size_t i = 0; i < order.size(); ++i) {
        if (i < n_test) {
            xte.push_back(x[order[i]]);
            yte.push_back(y[order[i]]);
        } else {
            xtr.push_back(x[order[i]]);
            ytr.push_back(y[order[i]]);
        }
    }

    rkhm::GramBlock g = rkhm::gram(kernel, xtr);
    const double min_eig = g.min_eigenvalue();
    rkhm::RkhmRegressor reg = rkhm::fit_krr(kernel, xtr, ytr, lambda, interpolate);

    auto mean_error = [&](const std::vector<rkhm::VectorXd>& xs,
                          const std::vector<AlgebraElement>& ys) {
        if (xs.empty()) return 0.0;
        double acc = 0.0;
        for (size_t i = 0; i < xs.size(); ++i)
            acc += norm(sub(reg.predict(xs[i]), ys[i]));
        return acc / static_cast<double>(xs.size());
    };
    const double train_err = mean_error(xtr, ytr);
    const double test_err = mean_error(xte, yte);
    report.metrics["train_error"] = train_err;
    report.metrics["test_error"] = test_err;
    report.metrics["gram_min_eigenvalue"] = min_eig;
    report.metrics["singular"] = min_eig <= 1e-10 ? 1.0 : 0.0;
    report.pass = std::isfinite(train_err) && std::isfinite(test_err);
    report.wall_ms = watch.ms();
    return report;
}

/// Right-translation equivariance of a group net, exhaustively over the
/// group; over nonabelian groups a right-action net serves as the power
/// check (its error must be large).
inline ExperimentReport run_equivariance(const GroupTable& group, int layers, int trials,
                                         uint64_t seed) {
    if (layers < 1 || layers > kMaxDepth) throw InvalidArgument("layers out of range");
    if (trials < 1 || trials > kMaxSamples) throw InvalidArgument("trials out of range");
    detail::Stopwatch watch;
    ExperimentReport report;
    report.id = "equivariance";
    report.seed = seed;
    report.parameters["group_order"] = group.order();
    report.parameters["layers"] = layers;
    report.parameters["trials"] = trials;

    auto desc = AlgebraDescriptor::group_algebra(group);
    Rng rng(seed);
    std::vector<int> widths(static_cast<size_t>(layers) + 1, 2);
    net::CStarNet good =
        net::random_equivariant_net(desc, widths, {net::Activation::Relu}, rng);
    const double err = net::equivariance_error(good, trials, seed + 1);
    report.metrics["max_equivariance_error"] = err;
    report.pass = err <= 1e-10;

    if (!group.is_abelian()) {
        net::CStarNet wrong = net::random_equivariant_net(
            desc, widths, {net::Activation::Identity}, rng, net::WeightAction::Right);
        const double adversarial = net::equivariance_error(wrong, trials, seed + 2);
        report.metrics["adversarial_error"] = adversarial;
        report.pass = report.pass && adversarial > 1e-2;
    }
    report.wall_ms = watch.ms();
    return report;
}

}  // namespace cstar::experiments
