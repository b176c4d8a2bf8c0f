#include <gtest/gtest.h>

#include "framelet/lowrank.hpp"
#include "framelet/pr_analysis.hpp"
#include "oracles.hpp"

using namespace framelet;
using cplx = std::complex<double>;

namespace
{

VectorXd cosine(Index n, double cycles, double phase = 0.0, double amp = 1.0)
{
    VectorXd f(n);
    for (Index k = 0; k < n; ++k)
        f(k) = amp * std::cos(2 * oracle::pi * cycles * double(k) / double(n) + phase);
    return f;
}

// Real periodic signal with exactly r on-grid exponentials: an optional DC
// term plus conjugate pairs at distinct harmonics.
FriSpec harmonic_spec(Index n, Index r, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> amp(0.5, 2.0), ph(0.0, 2 * oracle::pi);
    FriSpec s;
    s.n = n;
    if (r % 2 == 1)
        s.terms.push_back({cplx(amp(rng), 0.0), cplx(1.0, 0.0), 0});
    for (Index j = 0; j < r / 2; ++j)
    {
        const cplx c     = std::polar(amp(rng), ph(rng));
        const double w   = 2 * oracle::pi * double(j + 1) / double(n);
        s.terms.push_back({c, std::polar(1.0, w), 0});
        s.terms.push_back({std::conj(c), std::polar(1.0, -w), 0});
    }
    return s;
}

} // namespace

TEST(FriGenerate, Examples)
{
    FriSpec c{{{cplx(1, 0), cplx(1, 0), 0}}, 6};
    EXPECT_EQ(fri_generate(c), VectorXd::Ones(6));

    const double w = 2 * oracle::pi / 8;
    FriSpec cs{{{cplx(0.5, 0), std::polar(1.0, w), 0}, {cplx(0.5, 0), std::polar(1.0, -w), 0}}, 8};
    EXPECT_LT((fri_generate(cs) - cosine(8, 1)).cwiseAbs().maxCoeff(), 1e-14);

    FriSpec ramp{{{cplx(1, 0), cplx(1, 0), 1}}, 5};
    EXPECT_EQ(fri_generate(ramp), VectorXd::LinSpaced(5, 0, 4));
    EXPECT_EQ(ramp.rank(), 2);
}

TEST(FriGenerate, Rejections)
{
    EXPECT_THROW(fri_generate(FriSpec{{{cplx(1, 0), cplx(1.1, 0), 0}}, 4}), ParameterError);
    EXPECT_THROW(fri_generate(FriSpec{{{cplx(1, 0), cplx(0, 1), 0}}, 4}), ParameterError);
}

TEST(HankelSvd, CosineConstantAndTwoCosines)
{
    const auto s1 = hankel_svd(cosine(16, 1), 4);
    EXPECT_EQ(s1.rank, 2);
    EXPECT_LT((s1.U.transpose() * s1.U - MatrixXd::Identity(16, 16)).norm(), 1e-10);
    EXPECT_LT((s1.V.transpose() * s1.V - MatrixXd::Identity(4, 4)).norm(), 1e-10);
    for (Index i = 1; i < s1.sigma.size(); ++i)
        EXPECT_GE(s1.sigma(i - 1), s1.sigma(i));

    EXPECT_EQ(hankel_svd(MatrixXd(VectorXd::Constant(10, 3.0)), 4).rank, 1);
    EXPECT_EQ(hankel_svd(MatrixXd(cosine(32, 2) + cosine(32, 5, 0.4)), 6).rank, 4);
}

TEST(MinAnnihilator, QuarterWaveCosine)
{
    VectorXd f(8);
    for (Index k = 0; k < 8; ++k)
        f(k) = std::cos(oracle::pi * double(k) / 2);
    const VectorXd h = min_annihilator(f, 5);
    ASSERT_EQ(h.size(), 3);
    EXPECT_NEAR(h(0), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(h(1), 0.0, 1e-12);
    EXPECT_NEAR(h(2), 1 / std::sqrt(2.0), 1e-12);
    // f[k] + f[k - 2] = 0
    for (Index k = 0; k < 8; ++k)
        EXPECT_NEAR(f(k) + f((k + 6) % 8), 0.0, 1e-15);
    EXPECT_LT(convolve(f, h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MinAnnihilator, ConstantGivesFirstDifference)
{
    const VectorXd h = min_annihilator(VectorXd::Constant(7, 2.5), 3);
    ASSERT_EQ(h.size(), 2);
    EXPECT_NEAR(h(0), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(h(1), -1 / std::sqrt(2.0), 1e-12);
}

TEST(MinAnnihilator, NoiseHasNone)
{
    std::mt19937_64 rng(81);
    EXPECT_THROW(min_annihilator(oracle::randv(16, rng), 2), NoAnnihilatorError);
}

TEST(SvdBases, DiagonalCoefficients)
{
    const VectorXd f = cosine(16, 2, 0.3) + cosine(16, 5, 1.1, 0.5);
    const auto svd   = hankel_svd(MatrixXd(f), 6);
    ASSERT_EQ(svd.rank, 4);
    const auto [basis, bank] = svd_bases(svd);
    const MatrixXd C = encode(MatrixXd(f), basis, bank);
    MatrixXd expect  = MatrixXd::Zero(16, 4);
    expect.topRows(4) = svd.sigma_r().asDiagonal();
    EXPECT_LT((C - expect).cwiseAbs().maxCoeff(), 1e-12 * svd.sigma(0));
    // the relaxed frame conditions still reconstruct f
    EXPECT_LT(oracle::rel_err(decode(C, basis, bank), f), 1e-12);
}

TEST(SvdBases, FullRankIsOrthonormal)
{
    std::mt19937_64 rng(82);
    const auto svd = hankel_svd(MatrixXd(oracle::randv(10, rng)), 4);
    ASSERT_EQ(svd.rank, 4);
    const auto [basis, bank] = svd_bases(svd);
    EXPECT_TRUE(check_frame_local(bank.psi, bank.psi_dual).satisfied);
    EXPECT_TRUE(check_frame_nonlocal(basis.phi, basis.phi_dual).satisfied);
}

TEST(SvdBases, RankOneHasOneCoefficient)
{
    const VectorXd f = VectorXd::Constant(8, -2.0);
    const auto svd   = hankel_svd(MatrixXd(f), 3);
    ASSERT_EQ(svd.rank, 1);
    const auto [basis, bank] = svd_bases(svd);
    const MatrixXd C = encode(MatrixXd(f), basis, bank);
    EXPECT_NEAR(std::abs(C(0, 0)), svd.sigma(0), 1e-12);
    EXPECT_LT(C.bottomRows(7).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LowrankShrink, Examples)
{
    const VectorXd c = cosine(20, 3, 0.2);
    EXPECT_LT(oracle::rel_err(lowrank_shrink(MatrixXd(c), 5, 2), c), 1e-12);
    EXPECT_TRUE(lowrank_shrink(MatrixXd(c), 5, 0).isZero(0));

    std::mt19937_64 rng(83);
    const Index n = 64;
    const VectorXd clean = cosine(n, 4, 0.7);
    // 20 dB: noise power is one hundredth of the signal power
    const double sigma = std::sqrt(clean.squaredNorm() / double(n) / 100.0);
    const VectorXd noisy = clean + sigma * oracle::randv(n, rng);
    const VectorXd den   = lowrank_shrink(MatrixXd(noisy), 16, 2);
    EXPECT_LE((den - clean).norm(), 0.5 * (noisy - clean).norm());
}

TEST(LowrankProperties, RankLawOverHarmonicGrid)
{
    std::mt19937_64 rng(84);
    for (Index r = 1; r <= 6; ++r)
        for (Index n : {16, 32, 64})
            for (Index d = r + 1; d <= 8; ++d)
            {
                const auto spec  = harmonic_spec(n, r, rng);
                ASSERT_EQ(spec.rank(), r);
                const VectorXd f = fri_generate(spec);
                EXPECT_EQ(hankel_svd(MatrixXd(f), d).rank, r) << "r=" << r << " n=" << n << " d=" << d;
                const VectorXd h = min_annihilator(f, d);
                EXPECT_EQ(h.size(), r + 1);
                EXPECT_LE(convolve(f, h).cwiseAbs().maxCoeff(), 1e-8 * f.cwiseAbs().maxCoeff());
            }
}

TEST(LowrankProperties, EckartYoung)
{
    std::mt19937_64 rng(85);
    for (int t = 0; t < 10; ++t)
    {
        const MatrixXd Z = oracle::randn(12, 2, rng);
        const Index d = 3, r = 1 + t % 5;
        const MatrixXd H = lift_extended(Z, d);
        Eigen::JacobiSVD<MatrixXd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const MatrixXd Hr = svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() *
                            svd.matrixV().leftCols(r).transpose();
        const double tail = svd.singularValues().tail(6 - r).norm();
        EXPECT_NEAR((H - Hr).norm(), tail, 1e-10);
        // shrinkage output is the unlift of exactly this truncation
        EXPECT_LT(oracle::rel_err(lowrank_shrink(Z, d, r), unlift_extended(Hr, 2)), 1e-12);
    }
}

TEST(LowrankProperties, ExtendedRankBound)
{
    std::mt19937_64 rng(86);
    const Index n = 24;
    const VectorXd f = cosine(n, 2, 0.1) + cosine(n, 7, 0.9) + VectorXd::Constant(n, 0.3);
    const Index r    = 5;
    for (Index p : {1, 2, 4})
        for (Index d : {1, 2, 3, 6})
        {
            MatrixXd Z(n, p);
            for (Index i = 0; i < p; ++i)
                Z.col(i) = conv_circular(f, oracle::randv(3, rng));
            EXPECT_LE(oracle::rank(lift_extended(Z, d)), std::min(r, p * d));
        }
}
