///
/// \file lowrank.hpp
///
/// Spectral tools for lifted signals: FRI signal synthesis, Hankel SVDs,
/// annihilating filters, SVD-derived bases and rank truncation.
///
#ifndef FRAMELET_LOWRANK_HPP
#define FRAMELET_LOWRANK_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "framelet/bases.hpp"
#include "framelet/core.hpp"
#include "framelet/framelet.hpp"
#include "framelet/hankel.hpp"

namespace framelet
{

/// One term `c * k^degree * lambda^k` of a finite-rate-of-innovation signal.
struct FriTerm
{
    std::complex<double> c{1.0, 0.0};
    std::complex<double> lambda{1.0, 0.0};
    int degree = 0;
};

struct FriSpec
{
    std::vector<FriTerm> terms;
    Index n = 0;

    /// Sum of multiplicities `degree + 1`.
    Index rank() const
    {
        Index r = 0;
        for (const auto& t : terms)
        {
            r += t.degree + 1;
        }
        return r;
    }
};

///
/// \brief Samples `f[k] = sum c k^degree lambda^k` for `k = 0..n-1`.
///
/// The terms must combine to a real signal (e.g. conjugate pairs). Throws
/// `ParameterError` for `|lambda| > 1`, negative degrees, or a non-negligible
/// imaginary part.
///
template <typename Scalar = double>
Vector<Scalar> fri_generate(const FriSpec& spec)
{
    detail::require(spec.n >= 1, "FRI signal length must be positive");
    for (const auto& t : spec.terms)
    {
        detail::require(std::abs(t.lambda) <= 1.0 + 1e-12, "FRI base with |lambda| > 1");
        detail::require(t.degree >= 0, "FRI polynomial degree must be nonnegative");
    }
    Vector<Scalar> f(spec.n);
    double imag_max = 0.0;
    double real_max = 0.0;
    for (Index k = 0; k < spec.n; ++k)
    {
        std::complex<double> acc(0.0, 0.0);
        for (const auto& t : spec.terms)
        {
            acc += t.c * std::pow(double(k), t.degree) * std::pow(t.lambda, double(k));
        }
        f(k)     = Scalar(acc.real());
        imag_max = std::max(imag_max, std::abs(acc.imag()));
        real_max = std::max(real_max, std::abs(acc.real()));
    }
    detail::require(imag_max <= 1e-9 * std::max(1.0, real_max),
                    "FRI terms do not combine to a real signal");
    return f;
}

///
/// Full SVD of a lifted (possibly multi-channel) signal together with its
/// numerical rank.
///
template <typename Scalar>
struct HankelSvd
{
    Matrix<Scalar> U;     ///< n x n
    Vector<Scalar> sigma; ///< min(n, pd) values, descending
    Matrix<Scalar> V;     ///< pd x pd
    Index rank = 0;
    Index p    = 1;
    Index d    = 1;

    auto U_r() const
    {
        return U.leftCols(rank);
    }
    auto V_r() const
    {
        return V.leftCols(rank);
    }
    auto sigma_r() const
    {
        return sigma.head(rank);
    }
};

template <typename Derived>
HankelSvd<typename Derived::Scalar> hankel_svd(const Eigen::MatrixBase<Derived>& Z, Index d,
                                               double tol = kDefaultRankTol)
{
    using Scalar = typename Derived::Scalar;
    Eigen::JacobiSVD<Matrix<Scalar>> svd(lift_extended(Z, d),
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
    HankelSvd<Scalar> out;
    out.U     = svd.matrixU();
    out.sigma = svd.singularValues();
    out.V     = svd.matrixV();
    out.rank  = numerical_rank(out.sigma, Scalar(tol));
    out.p     = Z.cols();
    out.d     = d;
    return out;
}

///
/// \brief Shortest annihilating filter `h` with `convolve(f, h) ~ 0`.
///
/// With `r` the numerical rank of `lift(f, d)`, `h` has length `r + 1`: it is
/// the flipped smallest right singular vector of `lift(f, r + 1)`, scaled to
/// unit norm with its earliest largest-magnitude tap positive. Throws
/// `NoAnnihilatorError` when `lift(f, d)` has full column rank.
///
template <typename Derived>
Vector<typename Derived::Scalar> min_annihilator(const Eigen::MatrixBase<Derived>& f, Index d,
                                                 double tol = kDefaultRankTol)
{
    using Scalar = typename Derived::Scalar;
    Eigen::JacobiSVD<Matrix<Scalar>> full(lift(f, d));
    const Index r = numerical_rank(full.singularValues(), Scalar(tol));
    if (r >= d)
    {
        throw NoAnnihilatorError("lift(f, " + std::to_string(d) +
                                 ") has full column rank; no annihilating filter of that length");
    }
    Eigen::JacobiSVD<Matrix<Scalar>> svd(lift(f, r + 1), Eigen::ComputeFullV);
    Vector<Scalar> h = svd.matrixV().col(r).reverse();
    h.normalize();
    // sign: the earliest tap among the (near-)largest in magnitude is positive
    const Scalar hmax = h.cwiseAbs().maxCoeff();
    Index imax        = 0;
    while (std::abs(h(imax)) < hmax * Scalar(1 - 1e-9))
    {
        ++imax;
    }
    if (h(imax) < Scalar(0))
    {
        h = -h;
    }
    return h;
}

///
/// \brief Non-local basis from the left singular vectors and a local bank
/// from the leading right singular vectors.
///
/// `Phi` is the full orthonormal `U`; `Psi = Psi_dual = V_r`, so the local
/// frame condition relaxes to the projector onto the row space.
///
template <typename Scalar>
std::pair<BasisPair<Scalar>, FilterBank<Scalar>> svd_bases(const HankelSvd<Scalar>& svd)
{
    detail::require(svd.rank >= 1, "SVD bases need rank >= 1");
    BasisPair<Scalar> basis{svd.U, svd.U, BasisKind::svd};
    const Matrix<Scalar> V = svd.V_r();
    return {basis, make_bank(V, V, svd.p)};
}

///
/// \brief Rank-`r` truncation of the lifted signal, mapped back by `unlift`.
///
/// `r = 0` returns zeros. Works channelwise for `n x p` input.
///
template <typename Derived>
Matrix<typename Derived::Scalar> lowrank_shrink(const Eigen::MatrixBase<Derived>& Z, Index d,
                                                Index r)
{
    using Scalar = typename Derived::Scalar;
    detail::require(r >= 0, "rank must be nonnegative");
    const Matrix<Scalar> H = lift_extended(Z, d);
    if (r == 0)
    {
        return Matrix<Scalar>::Zero(Z.rows(), Z.cols());
    }
    Eigen::JacobiSVD<Matrix<Scalar>> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index k = std::min<Index>(r, svd.singularValues().size());
    const Matrix<Scalar> Hr = svd.matrixU().leftCols(k) *
                              svd.singularValues().head(k).asDiagonal() *
                              svd.matrixV().leftCols(k).transpose();
    return unlift_extended(Hr, Z.cols());
}

} // namespace framelet

#endif /* FRAMELET_LOWRANK_HPP */
