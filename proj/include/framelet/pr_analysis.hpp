///
/// \file pr_analysis.hpp
///
/// Checks for perfect-reconstruction conditions of non-local and local bases.
///
#ifndef FRAMELET_PR_ANALYSIS_HPP
#define FRAMELET_PR_ANALYSIS_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "framelet/bases.hpp"
#include "framelet/core.hpp"
#include "framelet/framelet.hpp"
#include "framelet/hankel.hpp"
#include "framelet/network.hpp"

namespace framelet
{

struct PrReport
{
    std::string condition;
    bool satisfied   = false;
    double deviation = 0.0;
    double tolerance = 0.0;
    std::optional<VectorXd> witness;

    /// `condition<TAB>pass|fail<TAB>deviation`
    std::string to_line() const
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", deviation);
        return condition + "\t" + (satisfied ? "pass" : "fail") + "\t" + buf;
    }
};

inline PrReport make_report(std::string condition, double deviation, double tol)
{
    PrReport r;
    r.condition = std::move(condition);
    r.deviation = deviation;
    r.tolerance = tol;
    r.satisfied = deviation <= tol;
    return r;
}

/// Deviation `max |Phi_dual Phi^T - I|`.
template <typename DA, typename DB>
PrReport check_frame_nonlocal(const Eigen::MatrixBase<DA>& phi, const Eigen::MatrixBase<DB>& phi_dual,
                              double tol = 1e-10)
{
    detail::require(phi.rows() == phi_dual.rows() && phi.cols() == phi_dual.cols(),
                    "basis and dual differ in shape");
    const auto n = phi.rows();
    const double dev =
        double((phi_dual * phi.transpose() - DA::PlainObject::Identity(n, n)).cwiseAbs().maxCoeff());
    return make_report("frame_nonlocal", dev, tol);
}

/// Deviation `max |Psi Psi_dual^T - I|`.
template <typename DA, typename DB>
PrReport check_frame_local(const Eigen::MatrixBase<DA>& psi, const Eigen::MatrixBase<DB>& psi_dual,
                           double tol = 1e-10)
{
    detail::require(psi.rows() == psi_dual.rows() && psi.cols() == psi_dual.cols(),
                    "filters and dual filters differ in shape");
    const auto m = psi.rows();
    const double dev =
        double((psi * psi_dual.transpose() - DA::PlainObject::Identity(m, m)).cwiseAbs().maxCoeff());
    return make_report("frame_local", dev, tol);
}

///
/// \brief Frequency-domain PR check of a `pd x q` bank on a `grid`-point DFT.
///
/// At each frequency `w` the `p x p` matrix
/// `M(w)[j][k] = (1/d) sum_i conj(psi_hat_i^j(w)) psi_dual_hat_i^k(w)` must
/// equal the identity. The deviation is the largest entrywise modulus of
/// `M(w) - I` over the grid. The witness is a unit cosine at the worst
/// frequency.
///
template <typename DA, typename DB>
PrReport check_pr_fourier(const Eigen::MatrixBase<DA>& psi, const Eigen::MatrixBase<DB>& psi_dual,
                          Index p, Index grid, double tol = 1e-10)
{
    using C = std::complex<double>;
    detail::require(psi.rows() == psi_dual.rows() && psi.cols() == psi_dual.cols(),
                    "filters and dual filters differ in shape");
    detail::require(p >= 1 && psi.rows() % p == 0, "filter rows not divisible by p");
    const Index d = psi.rows() / p;
    const Index q = psi.cols();
    detail::require(grid >= d, "grid of " + std::to_string(grid) +
                                   " points is shorter than the filter length " +
                                   std::to_string(d));
    const double pi = 3.14159265358979323846;
    double worst    = 0.0;
    Index worst_k   = 0;
    Eigen::MatrixXcd A(q, p), B(q, p);
    for (Index k = 0; k < grid; ++k)
    {
        const double w = 2.0 * pi * double(k) / double(grid);
        for (Index j = 0; j < p; ++j)
        {
            for (Index i = 0; i < q; ++i)
            {
                C a(0.0), b(0.0);
                for (Index t = 0; t < d; ++t)
                {
                    const C e = std::polar(1.0, -w * double(t));
                    a += double(psi(j * d + t, i)) * e;
                    b += double(psi_dual(j * d + t, i)) * e;
                }
                A(i, j) = a;
                B(i, j) = b;
            }
        }
        Eigen::MatrixXcd M = A.adjoint() * B / double(d);
        M -= Eigen::MatrixXcd::Identity(p, p);
        const double dev = M.cwiseAbs().maxCoeff();
        if (dev > worst)
        {
            worst   = dev;
            worst_k = k;
        }
    }
    PrReport r = make_report("fourier", worst, tol);
    VectorXd wit(grid);
    for (Index t = 0; t < grid; ++t)
    {
        wit(t) = std::cos(2.0 * pi * double(worst_k) * double(t) / double(grid));
    }
    r.witness = wit;
    return r;
}

/// Minimal channel counts `q_l = d_1 * ... * d_l` for full-rank PR.
inline std::vector<Index> min_channels(const std::vector<Index>& d)
{
    std::vector<Index> q;
    Index acc = 1;
    for (Index dl : d)
    {
        detail::require(dl >= 1, "filter lengths must be positive");
        acc *= dl;
        q.push_back(acc);
    }
    return q;
}

struct RankBoundLayer
{
    Index layer  = 0;
    Index rank   = 0; ///< numerical rank of the extended lift of the layer input
    Index rank_f = 0; ///< numerical rank of lift(f, n)
    Index cap    = 0; ///< d_l * p_l
    bool satisfied = false;

    Index bound() const
    {
        return std::min(rank_f, cap);
    }

    PrReport report() const
    {
        PrReport r = make_report("rankbound_layer" + std::to_string(layer),
                                 double(std::max<Index>(0, rank - bound())), 0.0);
        return r;
    }
};

///
/// Numerical rank of each layer's extended lift against
/// `min(rank lift(f, n), d_l p_l)`. Only linear networks with identity
/// non-local bases and zero biases are accepted.
///
template <typename Derived, typename Scalar>
std::vector<RankBoundLayer> rank_bound_check(const Eigen::MatrixBase<Derived>& f,
                                             const NetworkSpec& net,
                                             const std::vector<FilterBank<Scalar>>& banks,
                                             double tol = kDefaultRankTol)
{
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L = net.layers[static_cast<std::size_t>(l)];
        const auto& B = banks.at(static_cast<std::size_t>(l));
        if (L.nonlocal != BasisKind::identity)
        {
            throw PreconditionError("rank bound needs identity non-local bases (layer " +
                                    std::to_string(l + 1) + ")");
        }
        if (L.relu || !B.b_enc.isZero(0) || !B.b_dec.isZero(0))
        {
            throw PreconditionError("rank bound needs a linear, bias-free layer (layer " +
                                    std::to_string(l + 1) + ")");
        }
    }
    const auto st = multi_layer_encode(f, net, banks);
    Eigen::JacobiSVD<Matrix<Scalar>> sf(lift(f, f.size()));
    const Index rank_f = numerical_rank(sf.singularValues(), Scalar(tol));
    std::vector<RankBoundLayer> out;
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L  = net.layers[static_cast<std::size_t>(l)];
        const auto& X  = st.levels[static_cast<std::size_t>(l)];
        RankBoundLayer r;
        r.layer  = l + 1;
        r.rank_f = rank_f;
        r.cap    = L.d * X.cols();
        Eigen::JacobiSVD<Matrix<Scalar>> s(lift_extended(X, L.d));
        r.rank      = numerical_rank(s.singularValues(), Scalar(tol));
        r.satisfied = r.rank <= r.bound();
        out.push_back(r);
    }
    return out;
}

template <typename Scalar>
struct UnetResult
{
    Vector<Scalar> fhat;
    Vector<Scalar> residual;
};

///
/// \brief One-level U-Net with an average-pooling branch and a bypass branch.
///
/// The bypass branch decodes the full-resolution filtered signal with
/// `psi_dual1`; the pooled branch projects onto the pooling range and
/// decodes with `psi_dual2`. The two outputs are summed.
///
template <typename DF, typename DA, typename DB, typename DC>
UnetResult<typename DF::Scalar> unet_round_trip(const Eigen::MatrixBase<DF>& f,
                                                const Eigen::MatrixBase<DA>& psi,
                                                const Eigen::MatrixBase<DB>& psi_dual1,
                                                const Eigen::MatrixBase<DC>& psi_dual2)
{
    using Scalar  = typename DF::Scalar;
    const Index n = f.size();
    detail::require(n % 2 == 0, "U-Net pooling needs an even length, got " + std::to_string(n));
    const auto pool  = avgpool_basis<Scalar>(n);
    const auto ident = identity_basis<Scalar>(n);
    const auto b1    = make_bank(psi, psi_dual1);
    const auto b2    = make_bank(psi, psi_dual2);
    const Matrix<Scalar> F = f;
    UnetResult<Scalar> r;
    r.fhat     = decode(encode(F, ident, b1), ident, b1).col(0) +
                 decode(encode(F, pool, b2), pool, b2).col(0);
    r.residual = r.fhat - f;
    return r;
}

} // namespace framelet

#endif /* FRAMELET_PR_ANALYSIS_HPP */
