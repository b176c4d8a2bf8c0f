///
/// \file bases.hpp
///
/// Non-local bases: the matrices that act on the left of a lifted signal.
///
#ifndef FRAMELET_BASES_HPP
#define FRAMELET_BASES_HPP

#include <cmath>
#include <optional>
#include <string>

#include "framelet/core.hpp"

namespace framelet
{

enum class BasisKind
{
    identity,
    haar,
    dct,
    avgpool,
    maxpool,
    svd
};

inline std::string to_string(BasisKind k)
{
    switch (k)
    {
    case BasisKind::identity:
        return "identity";
    case BasisKind::haar:
        return "haar";
    case BasisKind::dct:
        return "dct";
    case BasisKind::avgpool:
        return "avgpool";
    case BasisKind::maxpool:
        return "maxpool";
    case BasisKind::svd:
        return "svd";
    }
    return "unknown";
}

inline std::optional<BasisKind> basis_kind_from_string(const std::string& s)
{
    if (s == "identity")
        return BasisKind::identity;
    if (s == "haar")
        return BasisKind::haar;
    if (s == "dct")
        return BasisKind::dct;
    if (s == "avgpool")
        return BasisKind::avgpool;
    if (s == "maxpool")
        return BasisKind::maxpool;
    if (s == "svd")
        return BasisKind::svd;
    return std::nullopt;
}

/// A non-local basis `phi` (n x m) with its dual.
template <typename Scalar>
struct BasisPair
{
    Matrix<Scalar> phi;
    Matrix<Scalar> phi_dual;
    BasisKind kind = BasisKind::identity;

    Index n() const
    {
        return phi.rows();
    }
    Index m() const
    {
        return phi.cols();
    }
};

/// One-level Haar analysis matrices, each `n x n/2`.
template <typename Scalar>
struct HaarPair
{
    Matrix<Scalar> low;
    Matrix<Scalar> high;
};

template <typename Scalar = double>
HaarPair<Scalar> haar_pair(Index n)
{
    detail::require(n >= 2 && n % 2 == 0, "Haar basis needs an even length, got " +
                                               std::to_string(n));
    const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
    HaarPair<Scalar> h;
    h.low  = Matrix<Scalar>::Zero(n, n / 2);
    h.high = Matrix<Scalar>::Zero(n, n / 2);
    for (Index i = 0; i < n / 2; ++i)
    {
        h.low(2 * i, i)      = s;
        h.low(2 * i + 1, i)  = s;
        h.high(2 * i, i)     = s;
        h.high(2 * i + 1, i) = -s;
    }
    return h;
}

template <typename Scalar = double>
BasisPair<Scalar> identity_basis(Index n)
{
    detail::require(n >= 1, "empty basis");
    Matrix<Scalar> I = Matrix<Scalar>::Identity(n, n);
    return {I, I, BasisKind::identity};
}

/// Orthonormal one-level Haar basis `[low high]`.
template <typename Scalar = double>
BasisPair<Scalar> haar_basis(Index n)
{
    const auto h = haar_pair<Scalar>(n);
    Matrix<Scalar> phi(n, n);
    phi << h.low, h.high;
    return {phi, phi, BasisKind::haar};
}

/// Orthonormal DCT-II basis; column `k` is the `k`-th cosine.
template <typename Scalar = double>
BasisPair<Scalar> dct_basis(Index n)
{
    detail::require(n >= 1, "empty basis");
    const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
    Matrix<Scalar> phi(n, n);
    for (Index k = 0; k < n; ++k)
    {
        const Scalar c = k == 0 ? std::sqrt(Scalar(1) / Scalar(n)) : std::sqrt(Scalar(2) / Scalar(n));
        for (Index i = 0; i < n; ++i)
        {
            phi(i, k) = c * std::cos(pi * (Scalar(i) + Scalar(0.5)) * Scalar(k) / Scalar(n));
        }
    }
    return {phi, phi, BasisKind::dct};
}

/// Average pooling: the low half of the Haar pair used on its own.
template <typename Scalar = double>
BasisPair<Scalar> avgpool_basis(Index n)
{
    const auto h = haar_pair<Scalar>(n);
    return {h.low, h.low, BasisKind::avgpool};
}

///
/// \brief Max pooling selector built from a guide signal.
///
/// Column `i` picks the larger of `guide[2i]` and `guide[2i+1]`; ties go to
/// the lower index.
///
template <typename Derived>
BasisPair<typename Derived::Scalar> maxpool_basis(const Eigen::MatrixBase<Derived>& guide)
{
    using Scalar  = typename Derived::Scalar;
    const Index n = guide.size();
    detail::require(n >= 2 && n % 2 == 0, "max pooling needs an even length");
    Matrix<Scalar> phi = Matrix<Scalar>::Zero(n, n / 2);
    for (Index i = 0; i < n / 2; ++i)
    {
        const Index pick = guide(2 * i + 1) > guide(2 * i) ? 2 * i + 1 : 2 * i;
        phi(pick, i)     = Scalar(1);
    }
    return {phi, phi, BasisKind::maxpool};
}

///
/// Builds a basis of the given kind for signals of length `n`. Max pooling
/// uses the row sums of `guide` (the layer input) to choose its entries.
///
template <typename Scalar>
BasisPair<Scalar> make_basis(BasisKind kind, Index n, const Matrix<Scalar>* guide = nullptr)
{
    switch (kind)
    {
    case BasisKind::identity:
        return identity_basis<Scalar>(n);
    case BasisKind::haar:
        return haar_basis<Scalar>(n);
    case BasisKind::dct:
        return dct_basis<Scalar>(n);
    case BasisKind::avgpool:
        return avgpool_basis<Scalar>(n);
    case BasisKind::maxpool:
        detail::require(guide != nullptr && guide->rows() == n,
                        "max pooling needs the layer input as a guide");
        return maxpool_basis(Vector<Scalar>(guide->rowwise().sum()));
    case BasisKind::svd:
        throw ParameterError("SVD bases are data-derived; build them with svd_bases");
    }
    throw ParameterError("unknown basis kind");
}

/// Output length of a layer whose non-local basis has the given kind.
inline Index basis_output_length(BasisKind kind, Index n)
{
    return (kind == BasisKind::avgpool || kind == BasisKind::maxpool) ? n / 2 : n;
}

} // namespace framelet

#endif /* FRAMELET_BASES_HPP */
