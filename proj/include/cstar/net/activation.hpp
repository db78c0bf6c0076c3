#pragma once

#include <cmath>
#include <string>

#include "cstar/algebra/element.hpp"

namespace cstar::net {

enum class Activation { Identity, Linear, Relu, Tanh };

/// Activations act coordinatewise on the concrete coordinates of an element,
/// separately on real and imaginary parts.  On real-valued grid slices this
/// is the ordinary scalar activation; on noncommutative kinds it is a
/// modeling choice that keeps gradients elementary and commutes with
/// coordinate permutations.
struct ActivationSpec {
    Activation type = Activation::Identity;
    double slope = 1.0;  // Linear: sigma(t) = slope * t

    double apply_real(double t) const {
        switch (type) {
            case Activation::Identity: return t;
            case Activation::Linear: return slope * t;
            case Activation::Relu: return t > 0.0 ? t : 0.0;
            case Activation::Tanh: return std::tanh(t);
        }
        return t;
    }

    double derivative_real(double t) const {
        switch (type) {
            case Activation::Identity: return 1.0;
            case Activation::Linear: return slope;
            case Activation::Relu: return t > 0.0 ? 1.0 : 0.0;
            case Activation::Tanh: {
                const double th = std::tanh(t);
                return 1.0 - th * th;
            }
        }
        return 1.0;
    }

    Complex apply(Complex z) const { return {apply_real(z.real()), apply_real(z.imag())}; }

    /// Chain rule through the activation for packed gradients
    /// g = dL/d(re) + i dL/d(im).
    Complex backprop(Complex pre, Complex g) const {
        return {derivative_real(pre.real()) * g.real(),
                derivative_real(pre.imag()) * g.imag()};
    }

    /// sigma(sum_i c_i u_i + b) = sum_i sigma(c_i) u_i + sigma(b); holds for
    /// Identity and Linear.
    bool is_linear() const {
        return type == Activation::Identity || type == Activation::Linear;
    }

    bool is_smooth() const { return type != Activation::Relu; }
};

inline std::string to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Linear: return "linear";
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
    }
    return "?";
}

inline Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "linear") return Activation::Linear;
    if (name == "relu") return Activation::Relu;
    if (name == "tanh") return Activation::Tanh;
    throw InvalidArgument("unknown activation \"" + name + "\"");
}

}  // namespace cstar::net
