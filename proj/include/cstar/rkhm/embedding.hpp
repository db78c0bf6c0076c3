#pragma once

#include "cstar/rkhm/kernel.hpp"

namespace cstar::rkhm {

/// A finitely supported A-valued measure: mu = sum_i mu_i delta_{x_i}.
/// Positive operator-valued measures are the special case of positive
/// weights.
struct DiscreteAMeasure {
    std::vector<VectorXd> points;
    std::vector<AlgebraElement> weights;

    DiscreteAMeasure(std::vector<VectorXd> pts, std::vector<AlgebraElement> w)
        : points(std::move(pts)), weights(std::move(w)) {
        if (points.empty() || points.size() != weights.size())
            throw InvalidArgument("measure needs matching nonempty points/weights");
        for (const auto& e : weights)
            require_same_descriptor(weights.front().descriptor(), e.descriptor(), "measure");
    }

    const DescriptorPtr& descriptor() const { return weights.front().descriptor(); }
};

/// A finite kernel expansion v = sum_i phi(x_i) c_i in the RKHM.
class RkhmExpansion {
public:
    RkhmExpansion(AKernel kernel, std::vector<VectorXd> points,
                  std::vector<AlgebraElement> coefficients)
        : kernel_(std::move(kernel)),
          points_(std::move(points)),
          coefficients_(std::move(coefficients)) {
        if (points_.empty() || points_.size() != coefficients_.size())
            throw InvalidArgument("expansion needs matching nonempty points/coefficients");
    }

    /// v(x) = <phi(x), v> = sum_i k(x, x_i) c_i  (the reproducing property).
    AlgebraElement evaluate(const VectorXd& x) const {
        AlgebraElement acc = AlgebraElement::zero(kernel_.descriptor());
        for (size_t i = 0; i < points_.size(); ++i)
            acc = add(acc, mul(kernel_.eval(x, points_[i]), coefficients_[i]));
        return acc;
    }

    const AKernel& kernel() const { return kernel_; }
    const std::vector<VectorXd>& points() const { return points_; }
    const std::vector<AlgebraElement>& coefficients() const { return coefficients_; }

private:
    AKernel kernel_;
    std::vector<VectorXd> points_;
    std::vector<AlgebraElement> coefficients_;
};

/// <u, v> = sum_ij c_i* k(x_i, y_j) d_j.
inline AlgebraElement inner(const RkhmExpansion& u, const RkhmExpansion& v) {
    require_same_descriptor(u.kernel().descriptor(), v.kernel().descriptor(),
                            "expansion inner");
    AlgebraElement acc = AlgebraElement::zero(u.kernel().descriptor());
    for (size_t i = 0; i < u.points().size(); ++i)
        for (size_t j = 0; j < v.points().size(); ++j)
            acc = add(acc, mul(star(u.coefficients()[i]),
                               mul(u.kernel().eval(u.points()[i], v.points()[j]),
                                   v.coefficients()[j])));
    return acc;
}

/// Concatenation of expansions (the sum u + v in the module).
inline RkhmExpansion add(const RkhmExpansion& u, const RkhmExpansion& v) {
    std::vector<VectorXd> pts = u.points();
    std::vector<AlgebraElement> coefs = u.coefficients();
    pts.insert(pts.end(), v.points().begin(), v.points().end());
    coefs.insert(coefs.end(), v.coefficients().begin(), v.coefficients().end());
    return RkhmExpansion(u.kernel(), std::move(pts), std::move(coefs));
}

inline RkhmExpansion negate(const RkhmExpansion& u) {
    std::vector<AlgebraElement> coefs;
    coefs.reserve(u.coefficients().size());
    for (const auto& c : u.coefficients()) coefs.push_back(neg(c));
    return RkhmExpansion(u.kernel(), u.points(), std::move(coefs));
}

/// Kernel mean embedding of an A-valued measure: Phi(mu) = sum_i phi(x_i) mu_i.
inline RkhmExpansion embed(const DiscreteAMeasure& mu, const AKernel& k) {
    require_same_descriptor(mu.descriptor(), k.descriptor(), "embed");
    return RkhmExpansion(k, mu.points, mu.weights);
}

struct MmdResult {
    AlgebraElement squared;  // <Phi(mu)-Phi(nu), Phi(mu)-Phi(nu)>, positive in A
    double value;            // its C*-norm
};

/// Squared maximum mean discrepancy between two A-valued measures under k.
inline MmdResult mmd(const AKernel& k, const DiscreteAMeasure& mu,
                     const DiscreteAMeasure& nu) {
    require_same_descriptor(mu.descriptor(), nu.descriptor(), "mmd");
    RkhmExpansion diff = add(embed(mu, k), negate(embed(nu, k)));
    AlgebraElement sq = inner(diff, diff);
    return MmdResult{sq, norm(sq)};
}

}  // namespace cstar::rkhm
