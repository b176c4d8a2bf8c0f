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

VectorXd pad(const VectorXd& h, Index n)
{
    VectorXd g = VectorXd::Zero(n);
    g.head(h.size()) = h;
    return g;
}

} // namespace

TEST(ConvCircular, HandExamples)
{
    const VectorXd f = vec({1, 2, 3, 4});
    EXPECT_EQ(conv_circular(f, vec({1, 0})), f);
    EXPECT_EQ(conv_circular(f, vec({0, 1})), vec({2, 3, 4, 1}));
    EXPECT_EQ(conv_circular(f, vec({1, 1})), vec({3, 5, 7, 5}));
}

TEST(ConvCircular, RejectsLongFilter)
{
    EXPECT_THROW(conv_circular(vec({1, 2}), vec({1, 2, 3})), ParameterError);
}

TEST(ConvCircular, MatchesDftOracle)
{
    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t)
    {
        const Index n = 2 + t % 11, d = 1 + t % n;
        const VectorXd f = oracle::randv(n, rng), g = oracle::randv(d, rng);
        EXPECT_LT(oracle::rel_err(conv_circular(f, g), oracle::correlate(f, pad(g, n))), 1e-12);
    }
}

TEST(Convolve, FlipRelatesTheTwoConventions)
{
    // convolve(f, flip(g))[k] == conv_circular(f, g)[k - d + 1]
    std::mt19937_64 rng(2);
    const Index n = 9, d = 4;
    const VectorXd f = oracle::randv(n, rng), g = oracle::randv(d, rng);
    const VectorXd a = convolve(f, flip(g));
    const VectorXd b = conv_circular(f, g);
    for (Index k = 0; k < n; ++k)
        EXPECT_NEAR(a(k), b(detail::wrap(k - d + 1, n)), 1e-13);
    EXPECT_LT(oracle::rel_err(convolve(f, g), oracle::convolve(f, pad(g, n))), 1e-12);
}

TEST(ConvSimo, IdentityKernelGivesShifts)
{
    const VectorXd f = vec({1, 2, 3, 4, 5});
    const MatrixXd Y = conv_simo(f, MatrixXd::Identity(3, 3));
    for (Index i = 0; i < 3; ++i)
        for (Index k = 0; k < 5; ++k)
            EXPECT_EQ(Y(k, i), f((k + i) % 5));
}

TEST(ConvSimo, EqualsHankelProduct)
{
    std::mt19937_64 rng(3);
    const VectorXd f = oracle::randv(12, rng);
    const MatrixXd Psi = oracle::randn(4, 5, rng);
    EXPECT_LT(oracle::rel_err(conv_simo(f, Psi), lift(f, 4) * Psi), 1e-12);
    EXPECT_EQ(conv_simo(f, Psi.col(0)).col(0), conv_circular(f, Psi.col(0)));
}

TEST(ConvMimo, ReducesToSiso)
{
    const VectorXd f = vec({4, 3, 2, 1});
    EXPECT_EQ(conv_mimo(MatrixXd(f), MatrixXd(vec({1, -1}))).col(0), conv_circular(f, vec({1, -1})));
}

TEST(ConvMimo, EqualsExtendedHankelProduct)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t)
    {
        const Index n = 6 + t % 5, p = 1 + t % 3, d = 1 + t % 4, q = 1 + t % 5;
        const MatrixXd Z = oracle::randn(n, p, rng), Psi = oracle::randn(p * d, q, rng);
        EXPECT_LE(oracle::rel_err(conv_mimo(Z, Psi), lift_extended(Z, d) * Psi), 1e-12);
    }
}

TEST(ConvMimo, FirstBlockIdentityShiftsFirstChannel)
{
    std::mt19937_64 rng(5);
    const MatrixXd Z = oracle::randn(7, 3, rng);
    MatrixXd Psi     = MatrixXd::Zero(6, 2);
    Psi.topRows(2)   = MatrixXd::Identity(2, 2);
    const MatrixXd Y = conv_mimo(Z, Psi);
    for (Index k = 0; k < 7; ++k)
    {
        EXPECT_EQ(Y(k, 0), Z(k, 0));
        EXPECT_EQ(Y(k, 1), Z((k + 1) % 7, 0));
    }
}

TEST(ConvMimo, RejectsMismatchedKernel)
{
    EXPECT_THROW(conv_mimo(MatrixXd::Zero(5, 2), MatrixXd::Zero(3, 1)), ParameterError);
}

TEST(ConvMiso, Examples)
{
    std::mt19937_64 rng(6);
    const MatrixXd Z = oracle::randn(8, 2, rng);
    VectorXd delta   = VectorXd::Zero(4);
    delta(0)         = 1;
    delta(2)         = 1;
    EXPECT_LT(oracle::rel_err(conv_miso(Z, delta), Z.col(0) + Z.col(1)), 1e-15);
    const VectorXd psi = oracle::randv(6, rng);
    EXPECT_LT(oracle::rel_err(conv_miso(Z, psi), lift_extended(Z, 3) * psi), 1e-12);
    EXPECT_TRUE(conv_miso(Z, VectorXd::Zero(6)).isZero(0));
}

TEST(ConvCnnWeighted, Examples)
{
    std::mt19937_64 rng(7);
    const MatrixXd Z = oracle::randn(9, 3, rng), Psi = oracle::randn(6, 4, rng);
    EXPECT_LT(oracle::rel_err(conv_cnn_weighted(Z, Psi, VectorXd::Ones(3)), conv_mimo(Z, Psi)), 1e-14);

    const MatrixXd Y1 = conv_cnn_weighted(Z, Psi, VectorXd::Unit(3, 0));
    MatrixXd Z2       = Z;
    Z2.rightCols(2)   = oracle::randn(9, 2, rng);
    EXPECT_EQ(Y1, conv_cnn_weighted(Z2, Psi, VectorXd::Unit(3, 0)));

    const VectorXd w = oracle::randv(3, rng);
    MatrixXd Pw      = Psi;
    for (Index c = 0; c < 3; ++c)
        Pw.middleRows(2 * c, 2) *= w(c);
    EXPECT_LT(oracle::rel_err(conv_cnn_weighted(Z, Psi, w), conv_mimo(Z, Pw)), 1e-12);
    EXPECT_THROW(conv_cnn_weighted(Z, Psi, VectorXd::Ones(2)), ParameterError);
}

TEST(ConvMimo2d, Examples)
{
    std::mt19937_64 rng(8);
    std::vector<MatrixXd> imgs = {oracle::randn(4, 4, rng), oracle::randn(4, 4, rng)};
    // delta kernel: output i copies input i
    MatrixXd K = MatrixXd::Zero(8, 2);
    K(0, 0) = 1;
    K(4, 1) = 1;
    auto out = conv_mimo_2d(imgs, K, 2, 2);
    EXPECT_EQ(out[0], imgs[0]);
    EXPECT_EQ(out[1], imgs[1]);

    const MatrixXd R = oracle::randn(8, 3, rng);
    out              = conv_mimo_2d(imgs, R, 2, 2);
    MatrixXd H(16, 8);
    H << lift_block_2d(imgs[0], 2, 2), lift_block_2d(imgs[1], 2, 2);
    for (Index i = 0; i < 3; ++i)
    {
        const MatrixXd viaLift = Eigen::Map<const MatrixXd>(VectorXd(H * R.col(i)).data(), 4, 4);
        EXPECT_LT(oracle::rel_err(out[i], viaLift), 1e-12);
        MatrixXd naive = MatrixXd::Zero(4, 4);
        for (Index c = 0; c < 2; ++c)
            naive += oracle::correlate_2d(imgs[c], Eigen::Map<const MatrixXd>(R.col(i).data() + 4 * c, 2, 2));
        EXPECT_LT(oracle::rel_err(out[i], naive), 1e-12);
    }

    for (const auto& Y : conv_mimo_2d(imgs, MatrixXd::Zero(8, 2), 2, 2))
        EXPECT_TRUE(Y.isZero(0));
}

TEST(ConvProperties, ShiftCommutes)
{
    std::mt19937_64 rng(9);
    const Index n = 10;
    const VectorXd f = oracle::randv(n, rng), g = oracle::randv(3, rng);
    VectorXd fs(n);
    for (Index k = 0; k < n; ++k)
        fs(k) = f((k + 3) % n);
    const VectorXd y = conv_circular(f, g), ys = conv_circular(fs, g);
    for (Index k = 0; k < n; ++k)
        EXPECT_NEAR(ys(k), y((k + 3) % n), 1e-13);
}

TEST(ConvProperties, Bilinear)
{
    std::mt19937_64 rng(10);
    const VectorXd f = oracle::randv(8, rng), f2 = oracle::randv(8, rng);
    const VectorXd g = oracle::randv(3, rng), g2 = oracle::randv(3, rng);
    EXPECT_LT(oracle::rel_err(conv_circular(VectorXd(2 * f - f2), g),
                              2 * conv_circular(f, g) - conv_circular(f2, g)), 1e-13);
    EXPECT_LT(oracle::rel_err(conv_circular(f, VectorXd(g + 3 * g2)),
                              conv_circular(f, g) + 3 * conv_circular(f, g2)), 1e-13);
}
