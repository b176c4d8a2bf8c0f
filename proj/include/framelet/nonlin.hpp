///
/// \file nonlin.hpp
///
/// ReLU-aware building blocks: opposite-phase filter pairs, residual blocks
/// and bypass connections.
///
#ifndef FRAMELET_NONLIN_HPP
#define FRAMELET_NONLIN_HPP

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "framelet/core.hpp"
#include "framelet/framelet.hpp"
#include "framelet/hankel.hpp"
#include "framelet/pr_analysis.hpp"

namespace framelet
{

///
/// Opposite-phase bank: encoder filters `[Psi_plus, -Psi_plus]`, decoder
/// filters `[Psi_dual_plus, -Psi_dual_plus]`, encoder bias
/// `[b_plus; -b_plus]`.
///
template <typename Scalar>
struct CreluBank
{
    Matrix<Scalar> psi_plus;
    Matrix<Scalar> psi_dual_plus;
    Vector<Scalar> b_plus;
    Index p = 1;

    Index d() const
    {
        return psi_plus.rows() / p;
    }
    Index m() const
    {
        return psi_plus.cols();
    }

    /// Decoder bias that cancels `b_plus` after the ReLU pair recombines.
    Vector<Scalar> matched_decoder_bias() const
    {
        const Vector<Scalar> v = psi_dual_plus * b_plus;
        Vector<Scalar> b(p);
        for (Index i = 0; i < p; ++i)
        {
            b(i) = -v.segment(i * d(), d()).sum() / Scalar(d());
        }
        return b;
    }

    /// The doubled bank with the matched decoder bias filled in.
    FilterBank<Scalar> bank() const
    {
        const Index m2 = 2 * m();
        Matrix<Scalar> psi(psi_plus.rows(), m2), dual(psi_plus.rows(), m2);
        psi << psi_plus, -psi_plus;
        dual << psi_dual_plus, -psi_dual_plus;
        FilterBank<Scalar> b = make_bank(psi, dual, p);
        b.b_enc << b_plus, -b_plus;
        b.b_dec = matched_decoder_bias();
        return b;
    }
};

/// Builds a `CreluBank` after checking `Psi_plus Psi_dual_plus^T = I`.
template <typename DA, typename DB, typename DC>
CreluBank<typename DA::Scalar> crelu_extend(const Eigen::MatrixBase<DA>& psi_plus,
                                            const Eigen::MatrixBase<DB>& psi_dual_plus,
                                            const Eigen::MatrixBase<DC>& b_plus, Index p = 1,
                                            double tol = 1e-10)
{
    detail::require(p >= 1 && psi_plus.rows() % p == 0, "filter rows not divisible by p");
    detail::require(b_plus.size() == psi_plus.cols(), "bias length differs from filter count");
    const PrReport r = check_frame_local(psi_plus, psi_dual_plus, tol);
    if (!r.satisfied)
    {
        throw FrameError("opposite-phase bank needs Psi_plus Psi_dual_plus^T = I", r.deviation);
    }
    return {psi_plus, psi_dual_plus, b_plus, p};
}

///
/// `relu(F - relu(F Psi) Psi_dual^T)`. `F` must be entrywise nonnegative.
///
template <typename DF, typename DA, typename DB>
Matrix<typename DF::Scalar> residual_block(const Eigen::MatrixBase<DF>& F,
                                           const Eigen::MatrixBase<DA>& psi,
                                           const Eigen::MatrixBase<DB>& psi_dual)
{
    using Scalar = typename DF::Scalar;
    detail::require(psi.rows() == F.cols() && psi_dual.rows() == F.cols() &&
                        psi.cols() == psi_dual.cols(),
                    "residual block filter shapes do not match the input width");
    if (F.size() > 0 && F.minCoeff() < Scalar(0))
    {
        throw PreconditionError("residual block input must be nonnegative (min " +
                                std::to_string(double(F.minCoeff())) + ")");
    }
    const Matrix<Scalar> inner = relu(F * psi);
    return relu(F - inner * psi_dual.transpose());
}

///
/// \brief Opposite-phase bank of width `2m` that reproduces `X` through
/// ReLU using only the leading `m` right singular vectors of
/// `lift_extended(X, d)`.
///
/// Throws `InfeasibleError` when `m` is below the numerical rank.
///
template <typename Derived>
CreluBank<typename Derived::Scalar> insufficient_channel_bases(const Eigen::MatrixBase<Derived>& X,
                                                               Index d, Index m,
                                                               double tol = kDefaultRankTol)
{
    using Scalar       = typename Derived::Scalar;
    const Index p      = X.cols();
    const Matrix<Scalar> H = lift_extended(X, d);
    Eigen::JacobiSVD<Matrix<Scalar>> svd(H, Eigen::ComputeFullV);
    const Index r = numerical_rank(svd.singularValues(), Scalar(tol));
    if (m < r)
    {
        throw InfeasibleError("channel budget m=" + std::to_string(m) + " below the Hankel rank",
                              r);
    }
    detail::require(m <= p * d, "channel budget exceeds p*d");
    const Matrix<Scalar> V = svd.matrixV().leftCols(m);
    return {V, V, Vector<Scalar>::Zero(m), p};
}

/// `f + net(f)`, with no nonlinearity after the sum.
template <typename Net, typename Derived>
Vector<typename Derived::Scalar> bypass_wrap(Net&& net, const Eigen::MatrixBase<Derived>& f)
{
    const Vector<typename Derived::Scalar> x = f;
    return x + net(x);
}

} // namespace framelet

#endif /* FRAMELET_NONLIN_HPP */
