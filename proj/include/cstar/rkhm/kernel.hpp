#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "cstar/algebra/serialize.hpp"
#include "cstar/algebra/spectral.hpp"
#include "cstar/util/parallel.hpp"

namespace cstar::rkhm {

using Eigen::VectorXd;

enum class BaseKernel { Gaussian, Linear };

inline std::string to_string(BaseKernel b) {
    return b == BaseKernel::Gaussian ? "gaussian" : "linear";
}

inline double base_kernel_eval(BaseKernel base, double gamma, const VectorXd& x,
                               const VectorXd& y) {
    switch (base) {
        case BaseKernel::Gaussian: return std::exp(-gamma * (x - y).squaredNorm());
        case BaseKernel::Linear: return x.dot(y);
    }
    return 0.0;
}

/// One summand a_r * kappa_r(x,y) of an algebra-valued kernel.
struct KernelTerm {
    BaseKernel base;
    double gamma;  // Gaussian width parameter; ignored for linear
    AlgebraElement coefficient;
};

/// A-valued positive definite kernel k(x,y) = sum_r a_r kappa_r(x,y), built
/// from scalar positive definite bases and positive algebra coefficients.
/// Positivity of every a_r makes condition 2 of the definition hold: the
/// flattened Gram matrix is a sum of Kronecker products K_r (x) R(a_r) of
/// PSD factors.  This family is one representative construction of
/// operator-valued kernels, chosen because positivity is provable from the
/// Kronecker structure; circulant coefficients mix coordinates through the
/// algebra product, a step beyond plain convolution.
class AKernel {
public:
    AKernel(int input_dim, std::vector<KernelTerm> terms, bool validate_positivity = true)
        : input_dim_(input_dim), terms_(std::move(terms)) {
        if (input_dim_ < 1) throw InvalidArgument("kernel input dimension must be >= 1");
        if (terms_.empty()) throw InvalidArgument("kernel needs >= 1 term");
        for (const auto& t : terms_) {
            require_same_descriptor(descriptor(), t.coefficient.descriptor(), "kernel term");
            if (t.base == BaseKernel::Gaussian && !(t.gamma > 0.0))
                throw InvalidArgument("Gaussian kernel needs gamma > 0");
            if (validate_positivity && !is_positive(t.coefficient, kPositivityTol))
                throw InvalidArgument("kernel coefficient is not positive");
        }
    }

    const DescriptorPtr& descriptor() const { return terms_.front().coefficient.descriptor(); }
    int input_dim() const { return input_dim_; }
    const std::vector<KernelTerm>& terms() const { return terms_; }

    AlgebraElement eval(const VectorXd& x, const VectorXd& y) const {
        if (x.size() != input_dim_ || y.size() != input_dim_)
            throw DescriptorMismatch("kernel_eval: input dimension mismatch");
        AlgebraElement acc = AlgebraElement::zero(descriptor());
        for (const auto& t : terms_)
            acc = add(acc, scale(base_kernel_eval(t.base, t.gamma, x, y), t.coefficient));
        return acc;
    }

    /// Convenience: single Gaussian term with the identity coefficient.
    static AKernel gaussian(const DescriptorPtr& desc, int input_dim, double gamma) {
        return AKernel(input_dim,
                       {KernelTerm{BaseKernel::Gaussian, gamma,
                                   AlgebraElement::identity(desc)}});
    }

private:
    int input_dim_;
    std::vector<KernelTerm> terms_;
};

inline AlgebraElement kernel_eval(const AKernel& k, const VectorXd& x, const VectorXd& y) {
    return k.eval(x, y);
}

/// The n x n grid of kernel values over a sample set, with block-flattening
/// into an (nD) x (nD) complex matrix via the faithful representation.
class GramBlock {
public:
    GramBlock(std::vector<VectorXd> points, std::vector<AlgebraElement> blocks)
        : points_(std::move(points)), blocks_(std::move(blocks)) {
        n_ = static_cast<int>(points_.size());
        if (n_ < 1 || blocks_.size() != static_cast<size_t>(n_) * n_)
            throw InvalidArgument("gram block needs n >= 1 and n^2 entries");
    }

    int size() const { return n_; }
    const DescriptorPtr& descriptor() const { return blocks_.front().descriptor(); }
    const std::vector<VectorXd>& points() const { return points_; }
    const AlgebraElement& at(int i, int j) const {
        return blocks_[static_cast<size_t>(i) * n_ + j];
    }

    Eigen::MatrixXcd flatten() const {
        const int D = descriptor()->rep_dim();
        Eigen::MatrixXcd m(n_ * D, n_ * D);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                m.block(i * D, j * D, D, D) = regular_representation(at(i, j));
        return m;
    }

    double min_eigenvalue() const {
        Eigen::MatrixXcd m = flatten();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericalError("gram eigendecomposition failed");
        return es.eigenvalues().minCoeff();
    }

private:
    std::vector<VectorXd> points_;
    std::vector<AlgebraElement> blocks_;
    int n_ = 0;
};

/// Assembles G_ij = k(x_i, x_j).  Entries are independent, so assembly is
/// data-parallel over (i,j); the result does not depend on thread count.
inline GramBlock gram(const AKernel& k, const std::vector<VectorXd>& points, int threads = 1) {
    const int n = static_cast<int>(points.size());
    if (n < 1) throw InvalidArgument("gram needs >= 1 point");
    std::vector<AlgebraElement> blocks(static_cast<size_t>(n) * n,
                                       AlgebraElement::zero(k.descriptor()));
    parallel_for(n * n, threads, [&](int idx) {
        const int i = idx / n, j = idx % n;
        blocks[static_cast<size_t>(idx)] = k.eval(points[static_cast<size_t>(i)],
                                                  points[static_cast<size_t>(j)]);
    });
    return GramBlock(points, std::move(blocks));
}

/// Positive definiteness of the flattened Gram matrix: Hermitian within tol
/// and minimum eigenvalue >= -tol.  Equivalent to sum_ij c_i* G_ij c_j >= 0
/// for all coefficient tuples c.
inline bool check_pd(const GramBlock& g, double tol = kPositivityTol) {
    if (tol < 0) throw InvalidArgument("check_pd: tol must be >= 0");
    Eigen::MatrixXcd m = g.flatten();
    if (detail::hermitian_deviation(m) > tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
        return false;
    return detail::min_eigenvalue_hermitized(m) >= -tol;
}

inline Json to_json(const AKernel& k) {
    Json j;
    j["descriptor"] = cstar::to_json(*k.descriptor());
    j["input_dim"] = k.input_dim();
    Json terms = Json::array();
    for (const auto& t : k.terms()) {
        Json tj;
        tj["base"] = to_string(t.base);
        if (t.base == BaseKernel::Gaussian) tj["gamma"] = t.gamma;
        tj["coefficient"] = cstar::to_json(t.coefficient);
        terms.push_back(tj);
    }
    j["terms"] = terms;
    return j;
}

inline AKernel kernel_from_json(const Json& j) {
    DescriptorPtr desc = descriptor_from_json(j.at("descriptor"));
    std::vector<KernelTerm> terms;
    for (const auto& tj : j.at("terms")) {
        const std::string base = tj.at("base").get<std::string>();
        KernelTerm t{base == "gaussian" ? BaseKernel::Gaussian : BaseKernel::Linear,
                     tj.value("gamma", 1.0), element_from_json(desc, tj.at("coefficient"))};
        if (base != "gaussian" && base != "linear")
            throw IoError("unknown base kernel \"" + base + "\"");
        terms.push_back(std::move(t));
    }
    return AKernel(j.at("input_dim").get<int>(), std::move(terms));
}

}  // namespace cstar::rkhm
