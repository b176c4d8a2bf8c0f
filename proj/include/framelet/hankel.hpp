///
/// \file hankel.hpp
///
/// Wrap-around Hankel lifting and its generalized inverse.
///
/// All indices are 0-based and wrap modulo the signal length, so for a signal
/// `f` of length `n` the lift has entries `H(i, j) = f[(i + j) mod n]`.
///
#ifndef FRAMELET_HANKEL_HPP
#define FRAMELET_HANKEL_HPP

#include <string>

#include "framelet/core.hpp"

namespace framelet
{

/// Largest number of entries `lift` will materialize by default.
inline constexpr Index kDenseLiftLimit = Index(1) << 24;

namespace detail
{

inline void check_filter_length(Index d, Index n)
{
    require(n >= 1, "empty signal");
    require(d >= 1 && d <= n, "filter length d=" + std::to_string(d) +
                                  " out of range [1, " + std::to_string(n) + "]");
}

template <typename Vec>
struct HankelFunctor
{
    using Scalar = typename Vec::Scalar;

    Vec f;

    Scalar operator()(Index i, Index j) const
    {
        const Index n = f.size();
        Index k = i + j;
        if (k >= n)
        {
            k -= n;
        }
        return f.coeffRef(k);
    }
};

} // namespace detail

///
/// \brief Index-computed Hankel view; never allocates an `n x d` buffer.
///
/// The returned expression owns a copy of `f`, so it stays valid after the
/// argument goes out of scope.
///
template <typename Derived>
auto hankel_view(const Eigen::MatrixBase<Derived>& f, Index d)
{
    using Scalar = typename Derived::Scalar;
    using Vec    = Vector<Scalar>;
    detail::check_filter_length(d, f.size());
    using Functor = detail::HankelFunctor<Vec>;
    return Matrix<Scalar>::NullaryExpr(f.size(), d, Functor{Vec(f)});
}

///
/// \brief Dense wrap-around Hankel matrix `H_d(f)` of shape `n x d`.
///
/// Throws `ParameterError` when `d` is outside `[1, n]` or when `n * d`
/// exceeds `dense_limit`; use `hankel_view` for larger problems.
///
template <typename Derived>
Matrix<typename Derived::Scalar> lift(const Eigen::MatrixBase<Derived>& f, Index d,
                                      Index dense_limit = kDenseLiftLimit)
{
    using Scalar  = typename Derived::Scalar;
    const Index n = f.size();
    detail::check_filter_length(d, n);
    detail::require(n * d <= dense_limit,
                    "lift of " + std::to_string(n) + "x" + std::to_string(d) +
                        " exceeds the dense limit; use hankel_view");
    Matrix<Scalar> H(n, d);
    for (Index j = 0; j < d; ++j)
    {
        for (Index i = 0; i < n; ++i)
        {
            const Index k = i + j;
            H(i, j)       = f(k < n ? k : k - n);
        }
    }
    return H;
}

///
/// \brief Extended Hankel matrix `[H_d(z_1) ... H_d(z_p)]` of shape `n x pd`.
///
template <typename Derived>
Matrix<typename Derived::Scalar> lift_extended(const Eigen::MatrixBase<Derived>& Z, Index d,
                                               Index dense_limit = kDenseLiftLimit)
{
    using Scalar  = typename Derived::Scalar;
    const Index n = Z.rows();
    const Index p = Z.cols();
    detail::require(p >= 1, "multi-channel signal needs at least one channel");
    detail::check_filter_length(d, n);
    detail::require(n * p * d <= dense_limit, "extended lift exceeds the dense limit");
    Matrix<Scalar> H(n, p * d);
    for (Index c = 0; c < p; ++c)
    {
        H.middleCols(c * d, d) = lift(Z.col(c), d, dense_limit);
    }
    return H;
}

///
/// \brief 2-D block Hankel matrix of an `n1 x n2` image for a `d1 x d2` patch.
///
/// Row `i*n1 + r`, column `j*d1 + c` holds `X((r + c) mod n1, (i + j) mod n2)`.
/// Each row is therefore the column-major vectorization of one wrapped patch.
///
template <typename Derived>
Matrix<typename Derived::Scalar> lift_block_2d(const Eigen::MatrixBase<Derived>& X, Index d1,
                                               Index d2, Index dense_limit = kDenseLiftLimit)
{
    using Scalar   = typename Derived::Scalar;
    const Index n1 = X.rows();
    const Index n2 = X.cols();
    detail::check_filter_length(d1, n1);
    detail::check_filter_length(d2, n2);
    detail::require(n1 * n2 * d1 * d2 <= dense_limit, "block lift exceeds the dense limit");
    Matrix<Scalar> H(n1 * n2, d1 * d2);
    for (Index j = 0; j < d2; ++j)
    {
        for (Index c = 0; c < d1; ++c)
        {
            for (Index i = 0; i < n2; ++i)
            {
                const Index col = (i + j) % n2;
                for (Index r = 0; r < n1; ++r)
                {
                    H(i * n1 + r, j * d1 + c) = X((r + c) % n1, col);
                }
            }
        }
    }
    return H;
}

///
/// \brief Generalized inverse of `lift`: the mean over each wrapped
/// anti-diagonal of `B`.
///
/// For Hankel input this recovers the lifted signal exactly; for arbitrary
/// input it is the orthogonal projection onto the Hankel space followed by
/// inversion.
///
template <typename Derived>
Vector<typename Derived::Scalar> unlift(const Eigen::MatrixBase<Derived>& B)
{
    using Scalar  = typename Derived::Scalar;
    const Index n = B.rows();
    const Index d = B.cols();
    detail::check_filter_length(d, n);
    Vector<Scalar> f = Vector<Scalar>::Zero(n);
    for (Index j = 0; j < d; ++j)
    {
        for (Index i = 0; i < n; ++i)
        {
            const Index k = i + j;
            f(k < n ? k : k - n) += B(i, j);
        }
    }
    f /= Scalar(d);
    return f;
}

///
/// \brief Block-wise `unlift` of an `n x pd` matrix into `n x p` channels.
///
template <typename Derived>
Matrix<typename Derived::Scalar> unlift_extended(const Eigen::MatrixBase<Derived>& B, Index p)
{
    using Scalar = typename Derived::Scalar;
    detail::require(p >= 1 && B.cols() % p == 0,
                    "column count " + std::to_string(B.cols()) + " not divisible by p=" +
                        std::to_string(p));
    const Index d = B.cols() / p;
    Matrix<Scalar> Z(B.rows(), p);
    for (Index c = 0; c < p; ++c)
    {
        Z.col(c) = unlift(B.middleCols(c * d, d));
    }
    return Z;
}

///
/// \brief Generalized inverse of `lift_block_2d`.
///
/// Every pixel is the mean of the `d1 * d2` entries that `lift_block_2d`
/// copies it into.
///
template <typename Derived>
Matrix<typename Derived::Scalar> unlift_block_2d(const Eigen::MatrixBase<Derived>& B, Index n1,
                                                 Index n2, Index d1, Index d2)
{
    using Scalar = typename Derived::Scalar;
    detail::check_filter_length(d1, n1);
    detail::check_filter_length(d2, n2);
    detail::require(B.rows() == n1 * n2 && B.cols() == d1 * d2, "block Hankel shape mismatch");
    Matrix<Scalar> X = Matrix<Scalar>::Zero(n1, n2);
    for (Index j = 0; j < d2; ++j)
    {
        for (Index c = 0; c < d1; ++c)
        {
            for (Index i = 0; i < n2; ++i)
            {
                const Index col = (i + j) % n2;
                for (Index r = 0; r < n1; ++r)
                {
                    X((r + c) % n1, col) += B(i * n1 + r, j * d1 + c);
                }
            }
        }
    }
    X /= Scalar(d1 * d2);
    return X;
}

///
/// \brief `n x d` matrix whose column `j` is `h` moved down by `j` rows.
///
/// Rows past `n` wrap, which only happens when `m + d - 1 > n`. With this
/// convention `lift(conv_circular(f, h), d) == lift(f, n) * circulant(h, d, n)`.
///
template <typename Derived>
Matrix<typename Derived::Scalar> circulant(const Eigen::MatrixBase<Derived>& h, Index d, Index n)
{
    using Scalar  = typename Derived::Scalar;
    const Index m = h.size();
    detail::require(m >= 1 && m <= n, "filter length " + std::to_string(m) +
                                          " exceeds signal length " + std::to_string(n));
    detail::check_filter_length(d, n);
    Matrix<Scalar> C = Matrix<Scalar>::Zero(n, d);
    for (Index j = 0; j < d; ++j)
    {
        for (Index t = 0; t < m; ++t)
        {
            C((t + j) % n, j) += h(t);
        }
    }
    return C;
}

} // namespace framelet

#endif /* FRAMELET_HANKEL_HPP */
