#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "test_support.hpp"

using namespace cstar;
using cstar::testing::all_kinds;
using cstar::testing::random_module_vector;

TEST(RightMul, IdentityAndZero) {
    Rng rng(21);
    for (const auto& desc : all_kinds()) {
        ModuleVector u = random_module_vector(desc, 3, rng);
        ModuleVector ui = right_mul(u, AlgebraElement::identity(desc));
        for (int i = 0; i < 3; ++i) EXPECT_LE(max_coord_dist(ui[i], u[i]), 1e-14);

        ModuleVector z = right_mul(ModuleVector::zero(desc, 3), random_element(desc, rng));
        for (int i = 0; i < 3; ++i) EXPECT_TRUE(z[i].is_zero());
    }
}

TEST(RightMul, Associativity) {
    Rng rng(22);
    for (const auto& desc : all_kinds()) {
        ModuleVector u = random_module_vector(desc, 3, rng);
        AlgebraElement c = random_element(desc, rng);
        AlgebraElement d = random_element(desc, rng);
        ModuleVector lhs = right_mul(right_mul(u, c), d);
        ModuleVector rhs = right_mul(u, mul(c, d));
        for (int i = 0; i < 3; ++i) EXPECT_LE(max_coord_dist(lhs[i], rhs[i]), 1e-12);
    }
}

TEST(Inner, UnitVector) {
    for (const auto& desc : all_kinds()) {
        AlgebraElement one = AlgebraElement::identity(desc);
        AlgebraElement zero = AlgebraElement::zero(desc);
        ModuleVector e1(std::vector<AlgebraElement>{one, zero});
        EXPECT_LE(max_coord_dist(inner(e1, e1), one), 1e-14);
    }
}

TEST(Inner, ModuleLinearityAndSymmetry) {
    Rng rng(23);
    for (const auto& desc : all_kinds()) {
        ModuleVector u = random_module_vector(desc, 3, rng);
        ModuleVector v = random_module_vector(desc, 3, rng);
        ModuleVector w = random_module_vector(desc, 3, rng);
        AlgebraElement c = random_element(desc, rng);
        AlgebraElement d = random_element(desc, rng);

        // <u, v c> = <u,v> c (property 1 with one term).
        EXPECT_LE(max_coord_dist(inner(u, right_mul(v, c)), mul(inner(u, v), c)), 1e-12);

        // <u, v c + w d> = <u,v> c + <u,w> d.
        ModuleVector vcwd = add(right_mul(v, c), right_mul(w, d));
        AlgebraElement rhs = add(mul(inner(u, v), c), mul(inner(u, w), d));
        EXPECT_LE(max_coord_dist(inner(u, vcwd), rhs), 1e-12);

        // <v,u> = <u,v>*.
        EXPECT_LE(max_coord_dist(inner(v, u), star(inner(u, v))), 1e-12);
    }
}

TEST(Inner, PositivityAndDefiniteness) {
    Rng rng(24);
    for (const auto& desc : all_kinds()) {
        ModuleVector u = random_module_vector(desc, 4, rng);
        AlgebraElement g = inner(u, u);
        EXPECT_TRUE(is_positive(g, 1e-8)) << to_string(desc->kind());
        EXPECT_GT(norm(g), 1e-6);  // random u is nonzero

        ModuleVector z = ModuleVector::zero(desc, 4);
        EXPECT_TRUE(inner(z, z).is_zero(1e-10));
    }
}

TEST(Inner, ScalarDescriptorReducesToComplexInnerProduct) {
    auto desc = AlgebraDescriptor::scalar();
    Rng rng(25);
    ModuleVector u = random_module_vector(desc, 5, rng);
    ModuleVector v = random_module_vector(desc, 5, rng);
    Complex expected = 0.0;
    for (int i = 0; i < 5; ++i)
        expected += std::conj(u[i].coords()[0]) * v[i].coords()[0];
    EXPECT_NEAR(std::abs(inner(u, v).coords()[0] - expected), 0.0, 1e-13);
}

TEST(AbsVec, BasicsAndIdentity) {
    Rng rng(26);
    for (const auto& desc : all_kinds()) {
        EXPECT_TRUE(abs_vec(ModuleVector::zero(desc, 3)).is_zero(1e-12));

        ModuleVector e1(std::vector<AlgebraElement>{AlgebraElement::identity(desc),
                                                    AlgebraElement::zero(desc),
                                                    AlgebraElement::zero(desc)});
        EXPECT_LE(max_coord_dist(abs_vec(e1), AlgebraElement::identity(desc)), 1e-10);

        ModuleVector u = random_module_vector(desc, 3, rng);
        AlgebraElement a = abs_vec(u);
        EXPECT_LE(norm(sub(mul(a, a), inner(u, u))), 1e-10) << to_string(desc->kind());
    }
}

TEST(NormVec, ZeroAndUnit) {
    for (const auto& desc : all_kinds()) {
        EXPECT_NEAR(norm_vec(ModuleVector::zero(desc, 2)), 0.0, 1e-12);
        ModuleVector e(std::vector<AlgebraElement>{AlgebraElement::identity(desc)});
        EXPECT_NEAR(norm_vec(e), 1.0, 1e-10);
    }
}

// Oracle: ||u|| equals the largest singular value of the stacked
// representation matrix [R(u_1); R(u_2); R(u_3)].
TEST(NormVec, MatchesStackedRepresentationSingularValue) {
    Rng rng(27);
    for (const auto& desc : all_kinds()) {
        ModuleVector u = random_module_vector(desc, 3, rng);
        const int D = desc->rep_dim();
        Eigen::MatrixXcd stacked(3 * D, D);
        for (int i = 0; i < 3; ++i)
            stacked.block(i * D, 0, D, D) = regular_representation(u[i]);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
        EXPECT_NEAR(norm_vec(u), svd.singularValues()[0], 1e-10) << to_string(desc->kind());
    }
}

TEST(ModuleVector, JsonRoundTrip) {
    Rng rng(28);
    for (const auto& desc : all_kinds()) {
        ModuleVector u = random_module_vector(desc, 2, rng);
        ModuleVector back = module_vector_from_json(to_json(u));
        EXPECT_TRUE(same_descriptor(back.descriptor(), u.descriptor()));
        for (int i = 0; i < 2; ++i) EXPECT_LE(max_coord_dist(back[i], u[i]), 0.0);
    }
}

TEST(ModuleVector, LengthMismatchThrows) {
    Rng rng(29);
    auto desc = AlgebraDescriptor::grid_function(3);
    ModuleVector u = random_module_vector(desc, 2, rng);
    ModuleVector v = random_module_vector(desc, 3, rng);
    EXPECT_THROW(inner(u, v), DescriptorMismatch);
}
