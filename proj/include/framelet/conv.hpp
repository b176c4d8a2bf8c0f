///
/// \file conv.hpp
///
/// Direct-summation circular convolutions.
///
/// The `conv_*` family takes the filter in the orientation that matches the
/// Hankel product, i.e. `conv_circular(f, g) == lift(f, g.size()) * g`, which
/// is a circular correlation with `g`. Use `flip` to pass a filter written
/// in textbook convolution order. `convolve` is the literal circular
/// convolution `y[k] = sum_j u[k - j] v[j]` and is what decoders use.
///
#ifndef FRAMELET_CONV_HPP
#define FRAMELET_CONV_HPP

#include <string>
#include <vector>

#include "framelet/core.hpp"
#include "framelet/parallel.hpp"

namespace framelet
{

/// Reverses the order of the taps.
template <typename Derived>
Vector<typename Derived::Scalar> flip(const Eigen::MatrixBase<Derived>& v)
{
    return v.reverse();
}

/// `y[k] = sum_j f[(k + j) mod n] g[j]`.
template <typename DerivedF, typename DerivedG>
Vector<typename DerivedF::Scalar> conv_circular(const Eigen::MatrixBase<DerivedF>& f,
                                                const Eigen::MatrixBase<DerivedG>& g)
{
    using Scalar  = typename DerivedF::Scalar;
    const Index n = f.size();
    const Index d = g.size();
    detail::require(n >= 1, "empty signal");
    detail::require(d >= 1 && d <= n, "filter of length " + std::to_string(d) +
                                          " longer than signal of length " +
                                          std::to_string(n));
    const Vector<Scalar> fv = f;
    const Vector<Scalar> gv = g;
    Vector<Scalar> y(n);
    for (Index k = 0; k < n; ++k)
    {
        Scalar acc(0);
        for (Index j = 0; j < d; ++j)
        {
            acc += fv((k + j) % n) * gv(j);
        }
        y(k) = acc;
    }
    return y;
}

/// Literal circular convolution `y[k] = sum_j u[(k - j) mod n] v[j]`.
template <typename DerivedU, typename DerivedV>
Vector<typename DerivedU::Scalar> convolve(const Eigen::MatrixBase<DerivedU>& u,
                                           const Eigen::MatrixBase<DerivedV>& v)
{
    using Scalar  = typename DerivedU::Scalar;
    const Index n = u.size();
    const Index d = v.size();
    detail::require(n >= 1, "empty signal");
    detail::require(d >= 1 && d <= n, "filter longer than signal");
    const Vector<Scalar> uv = u;
    const Vector<Scalar> vv = v;
    Vector<Scalar> y(n);
    for (Index k = 0; k < n; ++k)
    {
        Scalar acc(0);
        for (Index j = 0; j < d; ++j)
        {
            acc += uv(detail::wrap(k - j, n)) * vv(j);
        }
        y(k) = acc;
    }
    return y;
}

/// Single input, `q` outputs: column `i` is `conv_circular(f, Psi.col(i))`.
template <typename DerivedF, typename DerivedK>
Matrix<typename DerivedF::Scalar> conv_simo(const Eigen::MatrixBase<DerivedF>& f,
                                            const Eigen::MatrixBase<DerivedK>& Psi)
{
    using Scalar = typename DerivedF::Scalar;
    detail::require(Psi.rows() >= 1 && Psi.rows() <= f.size(), "kernel/signal shape mismatch");
    Matrix<Scalar> Y(f.size(), Psi.cols());
    for (Index i = 0; i < Psi.cols(); ++i)
    {
        Y.col(i) = conv_circular(f, Psi.col(i));
    }
    return Y;
}

///
/// \brief Multi-input multi-output convolution.
///
/// `Psi` is `pd x q` with rows `[c*d, (c+1)*d)` holding the filters applied
/// to input channel `c`; `p` is taken from `Z.cols()`.
///
template <typename DerivedZ, typename DerivedK>
Matrix<typename DerivedZ::Scalar> conv_mimo(const Eigen::MatrixBase<DerivedZ>& Z,
                                            const Eigen::MatrixBase<DerivedK>& Psi)
{
    using Scalar  = typename DerivedZ::Scalar;
    const Index n = Z.rows();
    const Index p = Z.cols();
    detail::require(p >= 1 && Psi.rows() % p == 0,
                    "kernel rows " + std::to_string(Psi.rows()) +
                        " not a multiple of channel count " + std::to_string(p));
    const Index d = Psi.rows() / p;
    const Index q = Psi.cols();
    detail::require(d >= 1 && d <= n, "kernel block length exceeds signal length");
    Matrix<Scalar> Y = Matrix<Scalar>::Zero(n, q);
    parallel_for(q, [&](Index i) {
        for (Index c = 0; c < p; ++c)
        {
            Y.col(i) += conv_circular(Z.col(c), Psi.col(i).segment(c * d, d));
        }
    });
    return Y;
}

/// MIMO specialization with a single output channel.
template <typename DerivedZ, typename DerivedK>
Vector<typename DerivedZ::Scalar> conv_miso(const Eigen::MatrixBase<DerivedZ>& Z,
                                            const Eigen::MatrixBase<DerivedK>& psi)
{
    detail::require(psi.cols() == 1, "MISO kernel must be a single column");
    return conv_mimo(Z, psi).col(0);
}

///
/// \brief MIMO convolution with a scalar weight per input channel.
///
/// Equivalent to `conv_mimo` with block `c` of the kernel scaled by `w[c]`.
///
template <typename DerivedZ, typename DerivedK, typename DerivedW>
Matrix<typename DerivedZ::Scalar> conv_cnn_weighted(const Eigen::MatrixBase<DerivedZ>& Z,
                                                    const Eigen::MatrixBase<DerivedK>& Psi,
                                                    const Eigen::MatrixBase<DerivedW>& w)
{
    using Scalar  = typename DerivedZ::Scalar;
    const Index p = Z.cols();
    detail::require(w.size() == p, "weight count " + std::to_string(w.size()) +
                                       " differs from channel count " + std::to_string(p));
    detail::require(p >= 1 && Psi.rows() % p == 0, "kernel/channel shape mismatch");
    const Index d = Psi.rows() / p;
    detail::require(d >= 1 && d <= Z.rows(), "kernel block length exceeds signal length");
    Matrix<Scalar> Y = Matrix<Scalar>::Zero(Z.rows(), Psi.cols());
    for (Index i = 0; i < Psi.cols(); ++i)
    {
        for (Index c = 0; c < p; ++c)
        {
            Y.col(i) += w(c) * conv_circular(Z.col(c), Psi.col(i).segment(c * d, d));
        }
    }
    return Y;
}

///
/// \brief 2-D multi-channel convolution of `p` images into `q` images.
///
/// Column `i` of `K` stacks, per input image, the column-major vectorized
/// `d1 x d2` patch weights: entry `c*d1*d2 + b*d1 + a` multiplies pixel
/// offset `(a, b)`.
///
template <typename Scalar, typename DerivedK>
std::vector<Matrix<Scalar>> conv_mimo_2d(const std::vector<Matrix<Scalar>>& images,
                                         const Eigen::MatrixBase<DerivedK>& K, Index d1, Index d2)
{
    detail::require(!images.empty(), "no input images");
    const Index n1 = images.front().rows();
    const Index n2 = images.front().cols();
    const Index p  = static_cast<Index>(images.size());
    for (const auto& X : images)
    {
        detail::require(X.rows() == n1 && X.cols() == n2, "input images differ in shape");
    }
    detail::require(d1 >= 1 && d1 <= n1 && d2 >= 1 && d2 <= n2, "patch extents out of range");
    detail::require(K.rows() == p * d1 * d2, "kernel rows do not match p*d1*d2");
    const Index q = K.cols();
    std::vector<Matrix<Scalar>> out(static_cast<std::size_t>(q));
    parallel_for(q, [&](Index i) {
        Matrix<Scalar> Y = Matrix<Scalar>::Zero(n1, n2);
        for (Index c = 0; c < p; ++c)
        {
            const auto& X = images[static_cast<std::size_t>(c)];
            for (Index b = 0; b < d2; ++b)
            {
                for (Index a = 0; a < d1; ++a)
                {
                    const Scalar k = K(c * d1 * d2 + b * d1 + a, i);
                    if (k == Scalar(0))
                    {
                        continue;
                    }
                    for (Index col = 0; col < n2; ++col)
                    {
                        for (Index row = 0; row < n1; ++row)
                        {
                            Y(row, col) += k * X((row + a) % n1, (col + b) % n2);
                        }
                    }
                }
            }
        }
        out[static_cast<std::size_t>(i)] = std::move(Y);
    });
    return out;
}

///
/// \brief Multi-channel literal convolution with a `dq x p` kernel.
///
/// Output channel `k` is `sum_j convolve(S.col(j), K.col(k).segment(j*d, d))`.
///
template <typename DerivedS, typename DerivedK>
Matrix<typename DerivedS::Scalar> convolve_mimo(const Eigen::MatrixBase<DerivedS>& S,
                                                const Eigen::MatrixBase<DerivedK>& K)
{
    using Scalar  = typename DerivedS::Scalar;
    const Index q = S.cols();
    detail::require(q >= 1 && K.rows() % q == 0, "decoder kernel/channel shape mismatch");
    const Index d = K.rows() / q;
    detail::require(d >= 1 && d <= S.rows(), "decoder kernel longer than signal");
    Matrix<Scalar> Y = Matrix<Scalar>::Zero(S.rows(), K.cols());
    parallel_for(K.cols(), [&](Index k) {
        for (Index j = 0; j < q; ++j)
        {
            Y.col(k) += convolve(S.col(j), K.col(k).segment(j * d, d));
        }
    });
    return Y;
}

} // namespace framelet

#endif /* FRAMELET_CONV_HPP */
