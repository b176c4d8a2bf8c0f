///
/// \file framelet.hpp
///
/// Encoder/decoder layers of a deep convolutional framelet.
///
/// A layer maps an `n x p` signal `Z` to coefficients
/// `C = Phi^T (conv_mimo(Z, Psi) + 1 b_enc^T)` and back through
/// `Zhat = convolve_mimo(Phi_dual C, nu_kernel(Psi_dual)) + 1 b_dec^T`.
///
#ifndef FRAMELET_FRAMELET_HPP
#define FRAMELET_FRAMELET_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "framelet/bases.hpp"
#include "framelet/conv.hpp"
#include "framelet/core.hpp"
#include "framelet/hankel.hpp"
#include "framelet/network.hpp"

namespace framelet
{

///
/// Local filter bank. `psi` and `psi_dual` are `pd x q`; rows
/// `[c*d, (c+1)*d)` belong to input channel `c`.
///
template <typename Scalar>
struct FilterBank
{
    Matrix<Scalar> psi;
    Matrix<Scalar> psi_dual;
    Vector<Scalar> b_enc;
    Vector<Scalar> b_dec;
    Index p = 1;
    Index d = 1;
    Index q = 1;

    void validate() const
    {
        const std::string shape = "(p=" + std::to_string(p) + ", d=" + std::to_string(d) +
                                  ", q=" + std::to_string(q) + ")";
        detail::require(p >= 1 && d >= 1 && q >= 1, "bad filter bank shape " + shape);
        detail::require(psi.rows() == p * d && psi.cols() == q, "psi does not match " + shape);
        detail::require(psi_dual.rows() == p * d && psi_dual.cols() == q,
                        "psi_dual does not match " + shape);
        detail::require(b_enc.size() == q, "encoder bias length differs from q");
        detail::require(b_dec.size() == p, "decoder bias length differs from p");
    }
};

/// Bank with zero biases. `p` defaults to 1.
template <typename DerivedA, typename DerivedB>
FilterBank<typename DerivedA::Scalar> make_bank(const Eigen::MatrixBase<DerivedA>& psi,
                                                const Eigen::MatrixBase<DerivedB>& psi_dual,
                                                Index p = 1)
{
    using Scalar = typename DerivedA::Scalar;
    detail::require(p >= 1 && psi.rows() % p == 0, "filter rows not divisible by p");
    FilterBank<Scalar> b;
    b.psi      = psi;
    b.psi_dual = psi_dual;
    b.p        = p;
    b.d        = psi.rows() / p;
    b.q        = psi.cols();
    b.b_enc    = Vector<Scalar>::Zero(b.q);
    b.b_dec    = Vector<Scalar>::Zero(p);
    b.validate();
    return b;
}

///
/// \brief Rearranges decoder filters into the `dq x p` kernel used with
/// `convolve_mimo`, including the `1/d` normalization.
///
/// Block `(j, k)` (rows `[j*d, (j+1)*d)`, column `k`) is the filter of
/// channel `j` for output `k`, divided by `d`.
///
template <typename Derived>
Matrix<typename Derived::Scalar> nu_kernel(const Eigen::MatrixBase<Derived>& psi_dual, Index p)
{
    using Scalar = typename Derived::Scalar;
    detail::require(p >= 1 && psi_dual.rows() % p == 0, "decoder filter rows not divisible by p");
    const Index d = psi_dual.rows() / p;
    const Index q = psi_dual.cols();
    Matrix<Scalar> nu(d * q, p);
    for (Index j = 0; j < q; ++j)
    {
        for (Index k = 0; k < p; ++k)
        {
            nu.block(j * d, k, d, 1) = psi_dual.block(k * d, j, d, 1) / Scalar(d);
        }
    }
    return nu;
}

template <typename DerivedZ, typename Scalar>
Matrix<Scalar> encode(const Eigen::MatrixBase<DerivedZ>& Z, const BasisPair<Scalar>& basis,
                      const FilterBank<Scalar>& bank)
{
    bank.validate();
    detail::require(Z.cols() == bank.p, "signal has " + std::to_string(Z.cols()) +
                                            " channels, bank expects " + std::to_string(bank.p));
    detail::require(basis.phi.rows() == Z.rows(), "non-local basis length differs from signal");
    Matrix<Scalar> A = conv_mimo(Z, bank.psi);
    A.rowwise() += bank.b_enc.transpose();
    return basis.phi.transpose() * A;
}

template <typename DerivedC, typename Scalar>
Matrix<Scalar> decode(const Eigen::MatrixBase<DerivedC>& C, const BasisPair<Scalar>& basis,
                      const FilterBank<Scalar>& bank)
{
    bank.validate();
    detail::require(C.cols() == bank.q, "coefficient width differs from bank q");
    detail::require(basis.phi_dual.cols() == C.rows(), "dual basis width differs from coefficients");
    const Matrix<Scalar> S = basis.phi_dual * C;
    Matrix<Scalar> Z       = convolve_mimo(S, nu_kernel(bank.psi_dual, bank.p));
    Z.rowwise() += bank.b_dec.transpose();
    return Z;
}

///
/// \brief Decoder bias that cancels the encoder bias:
/// `b_dec[i] = -(1/d) * 1^T Psi_dual_i b_enc`, with `Psi_dual_i` the `i`-th
/// row block.
///
template <typename Scalar>
Vector<Scalar> matched_bias(const FilterBank<Scalar>& bank)
{
    bank.validate();
    const Vector<Scalar> v = bank.psi_dual * bank.b_enc;
    Vector<Scalar> b(bank.p);
    for (Index i = 0; i < bank.p; ++i)
    {
        b(i) = -v.segment(i * bank.d, bank.d).sum() / Scalar(bank.d);
    }
    return b;
}

///
/// \brief Canonical dual of a local basis.
///
/// For `q >= pd` this is `(Psi Psi^T)^{-1} Psi`, which gives
/// `Psi Psi_dual^T = I`. For `q < pd` it is `Psi (Psi^T Psi)^{-1}`, which
/// gives the projector onto the range of `Psi`. Throws when the Gram matrix
/// has condition number above `max_cond`.
///
template <typename Derived>
Matrix<typename Derived::Scalar> canonical_dual(const Eigen::MatrixBase<Derived>& psi,
                                                double max_cond = 1e8)
{
    using Scalar   = typename Derived::Scalar;
    const bool wide = psi.cols() >= psi.rows();
    const Matrix<Scalar> G =
        wide ? Matrix<Scalar>(psi * psi.transpose()) : Matrix<Scalar>(psi.transpose() * psi);
    Eigen::JacobiSVD<Matrix<Scalar>> svd(G);
    const auto& s = svd.singularValues();
    const Scalar smin = s(s.size() - 1);
    if (!(smin > Scalar(0)) || double(s(0) / smin) > max_cond)
    {
        throw PreconditionError("local basis is ill-conditioned; no stable dual");
    }
    const Matrix<Scalar> Ginv = G.ldlt().solve(Matrix<Scalar>::Identity(G.rows(), G.cols()));
    return wide ? Matrix<Scalar>(Ginv * psi) : Matrix<Scalar>(psi * Ginv);
}

template <typename Derived>
Matrix<typename Derived::Scalar> relu(const Eigen::MatrixBase<Derived>& X)
{
    return X.cwiseMax(typename Derived::Scalar(0));
}

/// Per-level signals of a multi-layer encoder: `levels[0]` is the input and
/// `levels[l]` the output of layer `l`. `bases[l-1]` is the basis used there.
template <typename Scalar>
struct CoefficientStack
{
    std::vector<Matrix<Scalar>> levels;
    std::vector<BasisPair<Scalar>> bases;
};

template <typename Scalar>
void check_chain(const NetworkSpec& net, const std::vector<FilterBank<Scalar>>& banks, Index n)
{
    validate(net, n);
    detail::require(static_cast<Index>(banks.size()) == net.depth(),
                    "got " + std::to_string(banks.size()) + " banks for " +
                        std::to_string(net.depth()) + " layers");
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L = net.layers[static_cast<std::size_t>(l)];
        const auto& B = banks[static_cast<std::size_t>(l)];
        B.validate();
        const std::string tag = "layer " + std::to_string(l + 1) + ": ";
        detail::require(B.p == net.p(l), tag + "bank p does not chain with previous q");
        detail::require(B.d == L.d, tag + "bank d differs from the network spec");
        detail::require(B.q == L.q, tag + "bank q differs from the network spec");
    }
}

template <typename Derived, typename Scalar>
CoefficientStack<Scalar> multi_layer_encode(const Eigen::MatrixBase<Derived>& f,
                                            const NetworkSpec& net,
                                            const std::vector<FilterBank<Scalar>>& banks)
{
    check_chain(net, banks, f.size());
    CoefficientStack<Scalar> st;
    st.levels.emplace_back(Matrix<Scalar>(f));
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L    = net.layers[static_cast<std::size_t>(l)];
        const auto& prev = st.levels.back();
        auto basis       = make_basis<Scalar>(L.nonlocal, prev.rows(), &prev);
        Matrix<Scalar> C = encode(prev, basis, banks[static_cast<std::size_t>(l)]);
        if (L.relu)
        {
            C = relu(C);
        }
        st.bases.push_back(std::move(basis));
        st.levels.push_back(std::move(C));
    }
    return st;
}

///
/// Decodes from the deepest level of `st`. Layer `l` adds its own input back
/// when its bypass flag is set, and the result is passed through ReLU when
/// the layer that produced that level had ReLU enabled.
///
template <typename Scalar>
Vector<Scalar> multi_layer_decode(const CoefficientStack<Scalar>& st, const NetworkSpec& net,
                                  const std::vector<FilterBank<Scalar>>& banks)
{
    detail::require(static_cast<Index>(st.levels.size()) == net.depth() + 1 &&
                        static_cast<Index>(st.bases.size()) == net.depth(),
                    "coefficient stack depth differs from the network");
    detail::require(static_cast<Index>(banks.size()) == net.depth(), "bank count mismatch");
    Matrix<Scalar> X = st.levels.back();
    for (Index l = net.depth() - 1; l >= 0; --l)
    {
        const auto u       = static_cast<std::size_t>(l);
        Matrix<Scalar> Y   = decode(X, st.bases[u], banks[u]);
        if (net.layers[u].bypass)
        {
            Y += st.levels[u];
        }
        if (l >= 1 && net.layers[u - 1].relu)
        {
            Y = relu(Y);
        }
        X = std::move(Y);
    }
    detail::require(X.cols() == 1, "network does not end in a single channel");
    return X.col(0);
}

/// `multi_layer_decode(multi_layer_encode(f))`.
template <typename Derived, typename Scalar>
Vector<Scalar> network_apply(const Eigen::MatrixBase<Derived>& f, const NetworkSpec& net,
                             const std::vector<FilterBank<Scalar>>& banks)
{
    return multi_layer_decode(multi_layer_encode(f, net, banks), net, banks);
}

} // namespace framelet

#endif /* FRAMELET_FRAMELET_HPP */
