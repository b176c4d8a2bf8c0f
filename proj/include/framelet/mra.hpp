///
/// \file mra.hpp
///
/// Multi-resolution framelet networks built on Haar non-local bases.
///
/// Each layer lifts the previous approximation band, filters it with the
/// local bank and splits the result into a low band (recursed, optionally
/// rectified) and a high band (kept for the decoder).
///
#ifndef FRAMELET_MRA_HPP
#define FRAMELET_MRA_HPP

#include <optional>
#include <string>
#include <vector>

#include "framelet/bases.hpp"
#include "framelet/conv.hpp"
#include "framelet/core.hpp"
#include "framelet/framelet.hpp"
#include "framelet/hankel.hpp"
#include "framelet/network.hpp"

namespace framelet
{

///
/// Local bank of one MRA layer. `high_dual` is the decoder filter applied to
/// the high band; it equals `bank.psi_dual` for linear layers and half of it
/// for opposite-phase layers rectified on the low band only.
///
template <typename Scalar>
struct MraLayer
{
    FilterBank<Scalar> bank;
    Matrix<Scalar> high_dual;
    std::optional<Matrix<Scalar>> highband; ///< optional per-channel high-band filters

    static MraLayer linear(FilterBank<Scalar> b)
    {
        MraLayer L;
        L.high_dual = b.psi_dual;
        L.bank      = std::move(b);
        return L;
    }

    static MraLayer opposite_phase(FilterBank<Scalar> b)
    {
        MraLayer L;
        L.high_dual = b.psi_dual / Scalar(2);
        L.bank      = std::move(b);
        return L;
    }
};

/// `low[0]` is the input; `low[l]` and `high[l-1]` are the bands of layer `l`.
template <typename Scalar>
struct MraState
{
    std::vector<Matrix<Scalar>> low;
    std::vector<Matrix<Scalar>> high;

    Index depth() const
    {
        return static_cast<Index>(high.size());
    }
};

/// Channelwise circular filtering, `conv_circular(C.col(j), H.col(j))`.
template <typename DA, typename DB>
Matrix<typename DA::Scalar> highband_filter(const Eigen::MatrixBase<DA>& C,
                                            const Eigen::MatrixBase<DB>& H)
{
    using Scalar = typename DA::Scalar;
    detail::require(H.cols() == C.cols(), "high-band filter count differs from channel count");
    Matrix<Scalar> out(C.rows(), C.cols());
    for (Index j = 0; j < C.cols(); ++j)
    {
        out.col(j) = conv_circular(C.col(j), H.col(j));
    }
    return out;
}

namespace detail
{

template <typename Scalar>
void check_mra(const NetworkSpec& net, const std::vector<MraLayer<Scalar>>& layers, Index n)
{
    require(static_cast<Index>(layers.size()) == net.depth(), "MRA layer count mismatch");
    Index len = n;
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L = net.layers[static_cast<std::size_t>(l)];
        const auto& B = layers[static_cast<std::size_t>(l)].bank;
        const std::string tag = "MRA layer " + std::to_string(l + 1) + ": ";
        require(L.nonlocal == BasisKind::haar, tag + "non-local basis must be haar");
        require(len % 2 == 0, tag + "length " + std::to_string(len) + " is not divisible by 2");
        require(L.d <= len, tag + "filter longer than the band");
        B.validate();
        require(B.p == net.p(l) && B.d == L.d && B.q == L.q, tag + "bank shape mismatch");
        require(layers[static_cast<std::size_t>(l)].high_dual.rows() == B.psi_dual.rows() &&
                    layers[static_cast<std::size_t>(l)].high_dual.cols() == B.q,
                tag + "high-band dual shape mismatch");
        len /= 2;
    }
}

} // namespace detail

template <typename Derived, typename Scalar>
MraState<Scalar> mra_encode(const Eigen::MatrixBase<Derived>& f, const NetworkSpec& net,
                            const std::vector<MraLayer<Scalar>>& layers)
{
    detail::check_mra(net, layers, f.size());
    MraState<Scalar> st;
    st.low.emplace_back(Matrix<Scalar>(f));
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& B    = layers[static_cast<std::size_t>(l)].bank;
        const auto& prev = st.low.back();
        const auto h     = haar_pair<Scalar>(prev.rows());
        Matrix<Scalar> A = conv_mimo(prev, B.psi);
        A.rowwise() += B.b_enc.transpose();
        Matrix<Scalar> lo = h.low.transpose() * A;
        if (net.layers[static_cast<std::size_t>(l)].relu)
        {
            lo = relu(lo);
        }
        st.high.emplace_back(h.high.transpose() * A);
        st.low.push_back(std::move(lo));
    }
    return st;
}

template <typename Scalar>
Vector<Scalar> mra_decode(const MraState<Scalar>& st, const NetworkSpec& net,
                          const std::vector<MraLayer<Scalar>>& layers)
{
    detail::require(st.depth() == net.depth() && static_cast<Index>(st.low.size()) == net.depth() + 1,
                    "MRA state depth differs from the network");
    detail::require(static_cast<Index>(layers.size()) == net.depth(), "MRA layer count mismatch");
    Matrix<Scalar> lo = st.low.back();
    for (Index l = net.depth() - 1; l >= 0; --l)
    {
        const auto u        = static_cast<std::size_t>(l);
        const auto& layer   = layers[u];
        const auto& B       = layer.bank;
        const auto h        = haar_pair<Scalar>(2 * lo.rows());
        Matrix<Scalar> high = st.high[u];
        if (layer.highband)
        {
            high = highband_filter(high, *layer.highband);
        }
        const Matrix<Scalar> M = h.low * lo * B.psi_dual.transpose() +
                                 h.high * high * layer.high_dual.transpose();
        Matrix<Scalar> Y = unlift_extended(M, B.p);
        Y.rowwise() += B.b_dec.transpose();
        if (l >= 1 && net.layers[u - 1].relu)
        {
            Y = relu(Y);
        }
        lo = std::move(Y);
    }
    detail::require(lo.cols() == 1, "MRA network does not end in a single channel");
    return lo.col(0);
}

///
/// Weighted band energy. For orthonormal square local banks this equals
/// `||f||^2`: each lift multiplies energy by its filter length, so band `l`
/// is divided by `d_1 * ... * d_l`.
///
template <typename Scalar>
Scalar mra_energy(const MraState<Scalar>& st, const NetworkSpec& net)
{
    Scalar total(0);
    Scalar scale(1);
    for (Index l = 0; l < st.depth(); ++l)
    {
        scale *= Scalar(net.layers[static_cast<std::size_t>(l)].d);
        total += st.high[static_cast<std::size_t>(l)].squaredNorm() / scale;
    }
    return total + st.low.back().squaredNorm() / scale;
}

// ---------------------------------------------------------------------------
// 2-D

/// Separable one-level Haar subbands of an image.
template <typename Scalar>
struct Subbands2d
{
    Matrix<Scalar> ll, lh, hl, hh;
};

template <typename Derived>
Subbands2d<typename Derived::Scalar> haar_2d(const Eigen::MatrixBase<Derived>& X)
{
    using Scalar = typename Derived::Scalar;
    const auto r = haar_pair<Scalar>(X.rows());
    const auto c = haar_pair<Scalar>(X.cols());
    const Matrix<Scalar> Lr = r.low.transpose() * X;
    const Matrix<Scalar> Hr = r.high.transpose() * X;
    return {Lr * c.low, Lr * c.high, Hr * c.low, Hr * c.high};
}

template <typename Scalar>
Matrix<Scalar> inverse_haar_2d(const Subbands2d<Scalar>& s)
{
    const auto r = haar_pair<Scalar>(2 * s.ll.rows());
    const auto c = haar_pair<Scalar>(2 * s.ll.cols());
    return r.low * (s.ll * c.low.transpose() + s.lh * c.high.transpose()) +
           r.high * (s.hl * c.low.transpose() + s.hh * c.high.transpose());
}

/// One 2-D layer: square `d x d` patches, bank with `d = d*d` rows per channel.
/// An empty `high_dual` means the high bands are decoded with `bank.psi_dual`.
template <typename Scalar>
struct Mra2dLayer
{
    FilterBank<Scalar> bank;
    Index patch = 1;
    bool relu   = false;
    Matrix<Scalar> high_dual;
};

/// Per-layer bands; each entry holds one image per channel.
template <typename Scalar>
struct Mra2dState
{
    std::vector<std::vector<Matrix<Scalar>>> low;
    std::vector<std::vector<Subbands2d<Scalar>>> high; ///< `ll` unused
};

template <typename Scalar>
class Mra2dNetwork
{
public:
    explicit Mra2dNetwork(std::vector<Mra2dLayer<Scalar>> layers) : m_layers(std::move(layers))
    {
        for (std::size_t l = 0; l < m_layers.size(); ++l)
        {
            const auto& L = m_layers[l];
            L.bank.validate();
            detail::require(L.bank.d == L.patch * L.patch,
                            "2-D bank rows per channel must equal patch^2");
            const Index p = l == 0 ? 1 : m_layers[l - 1].bank.q;
            detail::require(L.bank.p == p, "2-D bank p does not chain with previous q");
            detail::require(L.high_dual.size() == 0 || (L.high_dual.rows() == L.bank.psi_dual.rows() &&
                                                         L.high_dual.cols() == L.bank.q),
                            "2-D high-band dual shape mismatch");
        }
    }

    Index depth() const
    {
        return static_cast<Index>(m_layers.size());
    }

    Mra2dState<Scalar> encode(const Matrix<Scalar>& image) const
    {
        check_dims(image.rows(), image.cols());
        Mra2dState<Scalar> st;
        st.low.push_back({image});
        for (const auto& L : m_layers)
        {
            const auto& in = st.low.back();
            const Index n1 = in.front().rows();
            const Index n2 = in.front().cols();
            const Index k  = L.patch;
            Matrix<Scalar> H(n1 * n2, L.bank.p * k * k);
            for (Index c = 0; c < L.bank.p; ++c)
            {
                H.middleCols(c * k * k, k * k) = lift_block_2d(in[static_cast<std::size_t>(c)], k, k);
            }
            Matrix<Scalar> A = H * L.bank.psi;
            A.rowwise() += L.bank.b_enc.transpose();
            std::vector<Matrix<Scalar>> lows;
            std::vector<Subbands2d<Scalar>> highs;
            for (Index j = 0; j < L.bank.q; ++j)
            {
                const Matrix<Scalar> img = Eigen::Map<const Matrix<Scalar>>(A.col(j).data(), n1, n2);
                auto s                   = haar_2d(img);
                lows.push_back(L.relu ? relu(s.ll) : s.ll);
                s.ll.resize(0, 0);
                highs.push_back(std::move(s));
            }
            st.low.push_back(std::move(lows));
            st.high.push_back(std::move(highs));
        }
        return st;
    }

    Matrix<Scalar> decode(const Mra2dState<Scalar>& st) const
    {
        detail::require(static_cast<Index>(st.high.size()) == depth(), "2-D state depth mismatch");
        std::vector<Matrix<Scalar>> lo = st.low.back();
        for (Index l = depth() - 1; l >= 0; --l)
        {
            const auto u  = static_cast<std::size_t>(l);
            const auto& L = m_layers[u];
            const Index k = L.patch;
            const Index n1 = 2 * lo.front().rows();
            const Index n2 = 2 * lo.front().cols();
            Matrix<Scalar> Alo(n1 * n2, L.bank.q), Ahi(n1 * n2, L.bank.q);
            for (Index j = 0; j < L.bank.q; ++j)
            {
                Subbands2d<Scalar> s = st.high[u][static_cast<std::size_t>(j)];
                s.ll                 = Matrix<Scalar>::Zero(n1 / 2, n2 / 2);
                Matrix<Scalar> img   = inverse_haar_2d(s);
                Ahi.col(j)           = Eigen::Map<const Vector<Scalar>>(img.data(), n1 * n2);
                const auto c         = haar_pair<Scalar>(n2);
                const auto r         = haar_pair<Scalar>(n1);
                img = r.low * lo[static_cast<std::size_t>(j)] * c.low.transpose();
                Alo.col(j) = Eigen::Map<const Vector<Scalar>>(img.data(), n1 * n2);
            }
            const Matrix<Scalar>& hd = L.high_dual.size() ? L.high_dual : L.bank.psi_dual;
            const Matrix<Scalar> M   = Alo * L.bank.psi_dual.transpose() + Ahi * hd.transpose();
            std::vector<Matrix<Scalar>> out;
            for (Index c = 0; c < L.bank.p; ++c)
            {
                Matrix<Scalar> X = unlift_block_2d(M.middleCols(c * k * k, k * k), n1, n2, k, k);
                X.array() += L.bank.b_dec(c);
                if (l >= 1 && m_layers[u - 1].relu)
                {
                    X = relu(X);
                }
                out.push_back(std::move(X));
            }
            lo = std::move(out);
        }
        return lo.front();
    }

    Matrix<Scalar> apply(const Matrix<Scalar>& image) const
    {
        return decode(encode(image));
    }

private:
    void check_dims(Index n1, Index n2) const
    {
        const Index m = Index(1) << depth();
        detail::require(n1 % m == 0 && n2 % m == 0,
                        "image dimensions must be divisible by 2^L = " + std::to_string(m));
        Index a = n1, b = n2;
        for (const auto& L : m_layers)
        {
            detail::require(L.patch <= a && L.patch <= b, "patch larger than the band");
            a /= 2;
            b /= 2;
        }
    }

    std::vector<Mra2dLayer<Scalar>> m_layers;
};

/// Builds a 2-D MRA network from a spec (square patches of side `d`).
/// `high_dual[l]`, when given and non-empty, replaces layer `l`'s high-band decoder.
template <typename Scalar>
Mra2dNetwork<Scalar> build_2d_mra(const NetworkSpec& net, const std::vector<FilterBank<Scalar>>& banks,
                                  const std::vector<Matrix<Scalar>>& high_dual = {})
{
    detail::require(static_cast<Index>(banks.size()) == net.depth(), "2-D bank count mismatch");
    detail::require(high_dual.empty() || high_dual.size() == banks.size(), "2-D high-band decoder count mismatch");
    std::vector<Mra2dLayer<Scalar>> layers;
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L = net.layers[static_cast<std::size_t>(l)];
        detail::require(L.nonlocal == BasisKind::haar, "2-D MRA layers use the Haar basis");
        const auto u = static_cast<std::size_t>(l);
        layers.push_back({banks[u], L.d, L.relu, high_dual.empty() ? Matrix<Scalar>() : high_dual[u]});
    }
    return Mra2dNetwork<Scalar>(std::move(layers));
}

} // namespace framelet

#endif /* FRAMELET_MRA_HPP */
