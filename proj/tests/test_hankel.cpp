#include <gtest/gtest.h>

#include "framelet/conv.hpp"
#include "framelet/hankel.hpp"
#include "oracles.hpp"

using namespace framelet;

namespace
{

VectorXd vec(std::initializer_list<double> v)
{
    VectorXd x(static_cast<Index>(v.size()));
    Index i = 0;
    for (double a : v)
        x(i++) = a;
    return x;
}

} // namespace

TEST(Lift, FourPointExample)
{
    MatrixXd expect(4, 2);
    expect << 1, 2, 2, 3, 3, 4, 4, 1;
    EXPECT_EQ(lift(vec({1, 2, 3, 4}), 2), expect);
}

TEST(Lift, SingleSample)
{
    const MatrixXd H = lift(vec({5}), 1);
    ASSERT_EQ(H.rows(), 1);
    EXPECT_EQ(H(0, 0), 5.0);
}

TEST(Lift, DeltaMatchesIndexOracle)
{
    const VectorXd f = vec({1, 0, 0, 0});
    MatrixXd expect(4, 3);
    expect << 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0;
    EXPECT_EQ(lift(f, 3), expect);
    EXPECT_EQ(lift(f, 3), oracle::hankel(f, 3));
}

TEST(Lift, RandomMatchesIndexOracle)
{
    std::mt19937_64 rng(11);
    for (Index n = 1; n <= 12; ++n)
        for (Index d = 1; d <= n; ++d)
        {
            const VectorXd f = oracle::randv(n, rng);
            EXPECT_EQ(lift(f, d), oracle::hankel(f, d));
        }
}

TEST(Lift, RejectsFilterLongerThanSignal)
{
    EXPECT_THROW(lift(vec({1, 2}), 3), ParameterError);
    EXPECT_THROW(lift(vec({1, 2}), 0), ParameterError);
}

TEST(Lift, DenseLimitAndView)
{
    const VectorXd f = VectorXd::LinSpaced(64, 0, 63);
    EXPECT_THROW(lift(f, 8, 100), ParameterError);
    const MatrixXd V = hankel_view(f, 8);
    EXPECT_EQ(V, lift(f, 8));
}

TEST(Lift, ViewOutlivesArgument)
{
    auto make = [] {
        VectorXd f = VectorXd::LinSpaced(6, 1, 6);
        return hankel_view(f, 3);
    };
    const auto v     = make();
    const MatrixXd V = v;
    EXPECT_EQ(V, lift(VectorXd::LinSpaced(6, 1, 6), 3));
}

TEST(LiftExtended, SingleChannelIsLift)
{
    const VectorXd f = vec({3, 1, 4, 1, 5});
    EXPECT_EQ(lift_extended(MatrixXd(f), 3), lift(f, 3));
}

TEST(LiftExtended, TwoChannelHandExample)
{
    MatrixXd Z(2, 2);
    Z << 1, 2, 3, 4;
    MatrixXd expect(2, 4);
    expect << 1, 3, 2, 4, 3, 1, 4, 2;
    EXPECT_EQ(lift_extended(Z, 2), expect);
}

TEST(LiftExtended, EightByThreeStructure)
{
    // channel j, sample k carries the value 10*(j+1) + k so every entry is traceable
    MatrixXd Z(8, 3);
    for (Index j = 0; j < 3; ++j)
        for (Index k = 0; k < 8; ++k)
            Z(k, j) = 10.0 * double(j + 1) + double(k);
    const MatrixXd H = lift_extended(Z, 2);
    ASSERT_EQ(H.rows(), 8);
    ASSERT_EQ(H.cols(), 6);
    for (Index j = 0; j < 3; ++j)
        for (Index i = 0; i < 8; ++i)
        {
            EXPECT_EQ(H(i, 2 * j), Z(i, j));
            EXPECT_EQ(H(i, 2 * j + 1), Z((i + 1) % 8, j));
        }
}

TEST(LiftBlock2d, UnitPatchIsVectorization)
{
    MatrixXd X(3, 2);
    X << 1, 2, 3, 4, 5, 6;
    const MatrixXd H = lift_block_2d(X, 1, 1);
    EXPECT_EQ(H, Eigen::Map<const MatrixXd>(X.data(), 6, 1));
}

TEST(LiftBlock2d, PatchEnumerationOracle)
{
    MatrixXd X(2, 2);
    X << 1, 2, 3, 4;
    EXPECT_EQ(lift_block_2d(X, 2, 2), oracle::patches(X, 2, 2));
    std::mt19937_64 rng(3);
    const MatrixXd Y = oracle::randn(5, 4, rng);
    EXPECT_EQ(lift_block_2d(Y, 3, 2), oracle::patches(Y, 3, 2));
}

TEST(LiftBlock2d, ConstantImageHasEqualRows)
{
    const MatrixXd H = lift_block_2d(MatrixXd::Constant(4, 4, 7.0), 2, 3);
    for (Index i = 1; i < H.rows(); ++i)
        EXPECT_EQ(H.row(i), H.row(0));
}

TEST(LiftBlock2d, RejectsOversizedPatch)
{
    EXPECT_THROW(lift_block_2d(MatrixXd::Zero(2, 3), 3, 1), ParameterError);
}

TEST(Unlift, LeftInverseOnIntegers)
{
    const VectorXd f = vec({1, 2, 3, 4});
    EXPECT_EQ(unlift(lift(f, 2)), f);
}

TEST(Unlift, SingleEntryHandExample)
{
    MatrixXd B = MatrixXd::Zero(4, 2);
    B(0, 0)    = 1.0;
    EXPECT_EQ(unlift(B), vec({0.5, 0, 0, 0}));
}

TEST(Unlift, OnesToOnes)
{
    EXPECT_EQ(unlift(MatrixXd::Ones(5, 3)), VectorXd::Ones(5));
}

TEST(Unlift, ArbitraryMatrixMatchesInnerProductOracle)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t)
    {
        const MatrixXd B = oracle::randn(7, 1 + t % 7, rng);
        EXPECT_LT(oracle::rel_err(unlift(B), oracle::unlift(B)), 1e-13);
    }
}

TEST(UnliftExtended, RoundTripAndReduction)
{
    std::mt19937_64 rng(6);
    const MatrixXd Z = oracle::randn(6, 3, rng);
    EXPECT_LT(oracle::rel_err(unlift_extended(lift_extended(Z, 2), 3), Z), 1e-15);
    const MatrixXd B = oracle::randn(6, 4, rng);
    EXPECT_EQ(unlift_extended(B, 1).col(0), unlift(B));
}

TEST(UnliftExtended, BlockOracle)
{
    std::mt19937_64 rng(8);
    const MatrixXd B = oracle::randn(5, 6, rng);
    const MatrixXd Z = unlift_extended(B, 3);
    for (Index c = 0; c < 3; ++c)
        EXPECT_LT(oracle::rel_err(Z.col(c), oracle::unlift(B.middleCols(2 * c, 2))), 1e-14);
}

TEST(UnliftExtended, RejectsIndivisibleColumns)
{
    EXPECT_THROW(unlift_extended(MatrixXd::Zero(4, 5), 2), ParameterError);
}

TEST(UnliftBlock2d, RoundTrip)
{
    std::mt19937_64 rng(9);
    const MatrixXd X = oracle::randn(6, 4, rng);
    EXPECT_LT(oracle::rel_err(unlift_block_2d(lift_block_2d(X, 2, 3), 6, 4, 2, 3), X), 1e-15);
}

TEST(Circulant, Examples)
{
    MatrixXd e1 = circulant(vec({1}), 3, 4);
    MatrixXd expect1 = MatrixXd::Zero(4, 3);
    expect1.topRows(3) = MatrixXd::Identity(3, 3);
    EXPECT_EQ(e1, expect1);

    MatrixXd expect2(5, 2);
    expect2 << 1, 0, 2, 1, 0, 2, 0, 0, 0, 0;
    EXPECT_EQ(circulant(vec({1, 2}), 2, 5), expect2);

    EXPECT_THROW(circulant(vec({1, 2, 3}), 1, 2), ParameterError);
}

TEST(Circulant, FactorizesFilteredLift)
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t)
    {
        const Index n = 4 + t % 9;
        const Index m = 1 + t % n;
        const Index d = 1 + (t * 7) % n;
        const VectorXd f = oracle::randv(n, rng);
        const VectorXd h = oracle::randv(m, rng);
        const VectorXd y = oracle::correlate(f, [&] {
            VectorXd g = VectorXd::Zero(n);
            g.head(m)  = h;
            return g;
        }());
        EXPECT_LT(oracle::rel_err(lift(y, d), lift(f, n) * circulant(h, d, n)), 1e-12);
    }
}

// Properties over random inputs

TEST(HankelProperties, LeftInverseFloating)
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t)
    {
        const Index n = 1 + t % 17;
        const Index d = 1 + (t * 5) % n;
        const VectorXd f = oracle::randv(n, rng);
        EXPECT_LE(oracle::rel_err(unlift(lift(f, d)), f), 1e-12);
    }
}

TEST(HankelProperties, Linearity)
{
    std::mt19937_64 rng(22);
    const VectorXd f = oracle::randv(9, rng), g = oracle::randv(9, rng);
    const double a = 1.5, b = -0.25;
    EXPECT_LT(oracle::rel_err(lift(VectorXd(a * f + b * g), 4), a * lift(f, 4) + b * lift(g, 4)), 1e-15);
}

TEST(HankelProperties, LiftedUnitVectorsAreOrthonormal)
{
    for (Index n : {3, 5, 8})
        for (Index d = 1; d <= n; ++d)
        {
            MatrixXd G(n, n);
            std::vector<MatrixXd> E;
            for (Index k = 0; k < n; ++k)
                E.push_back(lift(VectorXd::Unit(n, k), d) / std::sqrt(double(d)));
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j)
                    G(i, j) = (E[i].array() * E[j].array()).sum();
            EXPECT_LT((G - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-14);
        }
}

TEST(HankelProperties, InnerProductIdentity)
{
    // <lift(f, d), u v^T> == <f, u (*) v>, with (*) literal circular convolution
    std::mt19937_64 rng(23);
    for (int t = 0; t < 50; ++t)
    {
        const Index n = 3 + t % 10;
        const Index d = 1 + t % n;
        const VectorXd f = oracle::randv(n, rng), u = oracle::randv(n, rng), v = oracle::randv(d, rng);
        const double lhs = (lift(f, d).array() * (u * v.transpose()).array()).sum();
        VectorXd vp      = VectorXd::Zero(n);
        vp.head(d)       = v;
        const double rhs = f.dot(oracle::convolve(u, vp));
        EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST(HankelProperties, ExtendedFactorization)
{
    std::mt19937_64 rng(24);
    const Index n = 10, d = 3, p = 3;
    const VectorXd f = oracle::randv(n, rng);
    MatrixXd Z(n, p), C(n, p * d);
    for (Index i = 0; i < p; ++i)
    {
        const VectorXd h = oracle::randv(2 + i, rng);
        Z.col(i)         = conv_circular(f, h);
        C.middleCols(i * d, d) = circulant(h, d, n);
    }
    EXPECT_LT(oracle::rel_err(lift_extended(Z, d), lift(f, n) * C), 1e-12);
}
