#pragma once

#include <vector>

#include "cstar/algebra/serialize.hpp"
#include "cstar/algebra/spectral.hpp"

namespace cstar {

/// A vector in the Hilbert C*-module A^d: an ordered tuple of d elements of
/// one algebra, with right A-multiplication and the A-valued inner product
/// <u,v> = sum_i u_i* v_i.
class ModuleVector {
public:
    explicit ModuleVector(std::vector<AlgebraElement> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw InvalidArgument("module vector needs >= 1 entry");
        for (const auto& e : entries_)
            require_same_descriptor(entries_.front().descriptor(), e.descriptor(),
                                    "module vector");
    }

    static ModuleVector zero(const DescriptorPtr& desc, int d) {
        if (d < 1) throw InvalidArgument("module dimension must be >= 1");
        return ModuleVector(std::vector<AlgebraElement>(
            static_cast<size_t>(d), AlgebraElement::zero(desc)));
    }

    int dim() const { return static_cast<int>(entries_.size()); }
    const DescriptorPtr& descriptor() const { return entries_.front().descriptor(); }
    const AlgebraElement& operator[](int i) const { return entries_[static_cast<size_t>(i)]; }
    AlgebraElement& operator[](int i) { return entries_[static_cast<size_t>(i)]; }
    const std::vector<AlgebraElement>& entries() const { return entries_; }

private:
    std::vector<AlgebraElement> entries_;
};

inline ModuleVector add(const ModuleVector& u, const ModuleVector& v) {
    if (u.dim() != v.dim()) throw DescriptorMismatch("module add: length mismatch");
    std::vector<AlgebraElement> r;
    r.reserve(static_cast<size_t>(u.dim()));
    for (int i = 0; i < u.dim(); ++i) r.push_back(add(u[i], v[i]));
    return ModuleVector(std::move(r));
}

inline ModuleVector sub(const ModuleVector& u, const ModuleVector& v) {
    if (u.dim() != v.dim()) throw DescriptorMismatch("module sub: length mismatch");
    std::vector<AlgebraElement> r;
    r.reserve(static_cast<size_t>(u.dim()));
    for (int i = 0; i < u.dim(); ++i) r.push_back(sub(u[i], v[i]));
    return ModuleVector(std::move(r));
}

inline ModuleVector scale(Complex alpha, const ModuleVector& u) {
    std::vector<AlgebraElement> r;
    r.reserve(static_cast<size_t>(u.dim()));
    for (int i = 0; i < u.dim(); ++i) r.push_back(scale(alpha, u[i]));
    return ModuleVector(std::move(r));
}

/// Entrywise right multiplication u . c.
inline ModuleVector right_mul(const ModuleVector& u, const AlgebraElement& c) {
    require_same_descriptor(u.descriptor(), c.descriptor(), "right_mul");
    std::vector<AlgebraElement> r;
    r.reserve(static_cast<size_t>(u.dim()));
    for (int i = 0; i < u.dim(); ++i) r.push_back(mul(u[i], c));
    return ModuleVector(std::move(r));
}

/// A-valued inner product <u,v> = sum_i star(u_i) v_i, C-linear in v.
inline AlgebraElement inner(const ModuleVector& u, const ModuleVector& v) {
    require_same_descriptor(u.descriptor(), v.descriptor(), "inner");
    if (u.dim() != v.dim()) throw DescriptorMismatch("inner: length mismatch");
    AlgebraElement acc = AlgebraElement::zero(u.descriptor());
    for (int i = 0; i < u.dim(); ++i) acc = add(acc, mul(star(u[i]), v[i]));
    return acc;
}

/// A-valued absolute value |u| = sqrt(<u,u>).
inline AlgebraElement abs_vec(const ModuleVector& u) {
    return sqrt_positive(inner(u, u));
}

/// Real-valued module norm ||u|| = || |u| ||_A.
inline double norm_vec(const ModuleVector& u) {
    return norm(abs_vec(u));
}

inline Json to_json(const ModuleVector& u) {
    Json j;
    j["descriptor"] = to_json(*u.descriptor());
    Json entries = Json::array();
    for (int i = 0; i < u.dim(); ++i) entries.push_back(to_json(u[i]));
    j["entries"] = entries;
    return j;
}

inline ModuleVector module_vector_from_json(const Json& j) {
    DescriptorPtr desc = descriptor_from_json(j.at("descriptor"));
    std::vector<AlgebraElement> entries;
    for (const auto& e : j.at("entries")) entries.push_back(element_from_json(desc, e));
    return ModuleVector(std::move(entries));
}

}  // namespace cstar
