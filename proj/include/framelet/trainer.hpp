///
/// \file trainer.hpp
///
/// Full-batch gradient descent on local filter banks.
///
/// The network is the multi-layer encoder/decoder of `framelet.hpp` with
/// fixed non-local bases. Parameters are the banks' filters and biases.
///
#ifndef FRAMELET_TRAINER_HPP
#define FRAMELET_TRAINER_HPP

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "framelet/bases.hpp"
#include "framelet/core.hpp"
#include "framelet/framelet.hpp"
#include "framelet/hankel.hpp"
#include "framelet/network.hpp"
#include "framelet/parallel.hpp"

namespace framelet
{

template <typename Scalar>
struct TrainingSet
{
    std::vector<Vector<Scalar>> inputs;
    std::vector<Vector<Scalar>> targets;

    Index size() const
    {
        return static_cast<Index>(inputs.size());
    }

    void validate() const
    {
        detail::require(!inputs.empty(), "training set is empty");
        detail::require(inputs.size() == targets.size(), "input and target counts differ");
        for (std::size_t i = 0; i < inputs.size(); ++i)
        {
            detail::require(inputs[i].size() == targets[i].size(),
                            "pair " + std::to_string(i) + " has mismatched lengths");
        }
    }
};

template <typename Scalar>
using Params = std::vector<FilterBank<Scalar>>;

/// Random banks for `net`, entries uniform in `[-1/sqrt(pd), 1/sqrt(pd)]`, zero biases.
template <typename Scalar = double>
Params<Scalar> init_params(const NetworkSpec& net, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Params<Scalar> out;
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L  = net.layers[static_cast<std::size_t>(l)];
        const Index p  = net.p(l);
        const double a = 1.0 / std::sqrt(double(p * L.d));
        std::uniform_real_distribution<double> U(-a, a);
        Matrix<Scalar> psi(p * L.d, L.q), dual(p * L.d, L.q);
        for (Index j = 0; j < L.q; ++j)
            for (Index i = 0; i < p * L.d; ++i)
                psi(i, j) = Scalar(U(rng));
        for (Index j = 0; j < L.q; ++j)
            for (Index i = 0; i < p * L.d; ++i)
                dual(i, j) = Scalar(U(rng));
        out.push_back(make_bank(psi, dual, p));
    }
    return out;
}

namespace detail
{

template <typename Scalar>
struct Tape
{
    std::vector<Matrix<Scalar>> X;    // encoder levels, X[0] = input
    std::vector<Matrix<Scalar>> Cpre; // pre-activation encoder outputs
    std::vector<BasisPair<Scalar>> basis;
    std::vector<Matrix<Scalar>> S;    // decoder inputs after the dual basis
    std::vector<Matrix<Scalar>> Y;    // decoder outputs before activation
    Vector<Scalar> out;
};

template <typename Scalar>
Tape<Scalar> forward(const Vector<Scalar>& f, const NetworkSpec& net, const Params<Scalar>& P)
{
    const auto L = static_cast<std::size_t>(net.depth());
    Tape<Scalar> t;
    t.X.push_back(Matrix<Scalar>(f));
    for (std::size_t l = 0; l < L; ++l)
    {
        const auto& B = P[l];
        t.basis.push_back(make_basis<Scalar>(net.layers[l].nonlocal, t.X[l].rows(), &t.X[l]));
        Matrix<Scalar> A = lift_extended(t.X[l], B.d) * B.psi;
        A.rowwise() += B.b_enc.transpose();
        t.Cpre.push_back(t.basis[l].phi.transpose() * A);
        t.X.push_back(net.layers[l].relu ? relu(t.Cpre[l]) : t.Cpre[l]);
    }
    t.S.resize(L);
    t.Y.resize(L);
    Matrix<Scalar> D = t.X[L];
    for (std::size_t k = L; k-- > 0;)
    {
        const auto& B = P[k];
        t.S[k]        = t.basis[k].phi_dual * D;
        Matrix<Scalar> Y = unlift_extended(t.S[k] * B.psi_dual.transpose(), B.p);
        Y.rowwise() += B.b_dec.transpose();
        if (net.layers[k].bypass)
        {
            Y += t.X[k];
        }
        t.Y[k] = Y;
        D      = (k >= 1 && net.layers[k - 1].relu) ? relu(Y) : Y;
    }
    detail::require(D.cols() == 1, "network does not end in a single channel");
    t.out = D.col(0);
    return t;
}

template <typename Scalar>
Matrix<Scalar> relu_mask(const Matrix<Scalar>& G, const Matrix<Scalar>& pre)
{
    return G.cwiseProduct((pre.array() > Scalar(0)).template cast<Scalar>().matrix());
}

template <typename Scalar>
Params<Scalar> zero_like(const Params<Scalar>& P)
{
    Params<Scalar> g = P;
    for (auto& b : g)
    {
        b.psi.setZero();
        b.psi_dual.setZero();
        b.b_enc.setZero();
        b.b_dec.setZero();
    }
    return g;
}

/// Adds the gradient of `||out - target||^2` for one sample into `G`.
template <typename Scalar>
Scalar backward(const Vector<Scalar>& f, const Vector<Scalar>& target, const NetworkSpec& net,
                const Params<Scalar>& P, Params<Scalar>& G)
{
    const auto L = static_cast<std::size_t>(net.depth());
    const Tape<Scalar> t = forward(f, net, P);
    const Vector<Scalar> r = t.out - target;

    std::vector<Matrix<Scalar>> gX(L + 1);
    for (std::size_t l = 0; l <= L; ++l)
    {
        gX[l] = Matrix<Scalar>::Zero(t.X[l].rows(), t.X[l].cols());
    }

    // decoder, from the output inwards
    Matrix<Scalar> gD = Scalar(2) * r;
    for (std::size_t k = 0; k < L; ++k)
    {
        const auto& B = P[k];
        auto& gB      = G[k];
        const Matrix<Scalar> gY = (k >= 1 && net.layers[k - 1].relu) ? relu_mask(gD, t.Y[k]) : gD;
        if (net.layers[k].bypass)
        {
            gX[k] += gY;
        }
        gB.b_dec += gY.colwise().sum().transpose();
        const Matrix<Scalar> gM = lift_extended(gY, B.d) / Scalar(B.d);
        gB.psi_dual += gM.transpose() * t.S[k];
        const Matrix<Scalar> gS = gM * B.psi_dual;
        gD = t.basis[k].phi_dual.transpose() * gS;
    }
    gX[L] += gD;

    // encoder, from the deepest layer outwards
    for (std::size_t k = L; k-- > 0;)
    {
        const auto& B = P[k];
        auto& gB      = G[k];
        const Matrix<Scalar> gC = net.layers[k].relu ? relu_mask(gX[k + 1], t.Cpre[k]) : gX[k + 1];
        const Matrix<Scalar> gA = t.basis[k].phi * gC;
        gB.b_enc += gA.colwise().sum().transpose();
        gB.psi += lift_extended(t.X[k], B.d).transpose() * gA;
        gX[k] += Scalar(B.d) * unlift_extended(gA * B.psi.transpose(), B.p);
    }
    return r.squaredNorm();
}

} // namespace detail

/// Network output for one input.
template <typename Scalar>
Vector<Scalar> predict(const Vector<Scalar>& f, const NetworkSpec& net, const Params<Scalar>& P)
{
    check_chain(net, P, f.size());
    return detail::forward(f, net, P).out;
}

/// `sum_i ||target_i - net(input_i)||^2`.
template <typename Scalar>
Scalar loss(const Params<Scalar>& P, const TrainingSet<Scalar>& data, const NetworkSpec& net)
{
    data.validate();
    check_chain(net, P, data.inputs.front().size());
    std::vector<Scalar> parts(static_cast<std::size_t>(data.size()));
    parallel_for(data.size(), [&](Index i) {
        const auto u = static_cast<std::size_t>(i);
        parts[u]     = (detail::forward(data.inputs[u], net, P).out - data.targets[u]).squaredNorm();
    });
    Scalar s(0);
    for (const auto& v : parts)
    {
        s += v;
    }
    return s;
}

///
/// \brief Gradient of `loss` with respect to every bank entry.
///
/// The ReLU derivative at zero is taken as zero. Non-local bases are held
/// fixed (max pooling is piecewise constant in the input).
///
template <typename Scalar>
Params<Scalar> grad(const Params<Scalar>& P, const TrainingSet<Scalar>& data, const NetworkSpec& net,
                    Scalar* loss_out = nullptr)
{
    data.validate();
    check_chain(net, P, data.inputs.front().size());
    const auto N = static_cast<std::size_t>(data.size());
    std::vector<Params<Scalar>> parts(N, detail::zero_like(P));
    std::vector<Scalar> losses(N);
    parallel_for(data.size(), [&](Index i) {
        const auto u = static_cast<std::size_t>(i);
        losses[u]    = detail::backward(data.inputs[u], data.targets[u], net, P, parts[u]);
    });
    Params<Scalar> G = detail::zero_like(P);
    Scalar total(0);
    for (std::size_t i = 0; i < N; ++i)
    {
        total += losses[i];
        for (std::size_t l = 0; l < G.size(); ++l)
        {
            G[l].psi += parts[i][l].psi;
            G[l].psi_dual += parts[i][l].psi_dual;
            G[l].b_enc += parts[i][l].b_enc;
            G[l].b_dec += parts[i][l].b_dec;
        }
    }
    if (loss_out)
    {
        *loss_out = total;
    }
    return G;
}

/// Flattens all parameters: per layer `psi`, `psi_dual`, `b_enc`, `b_dec`.
template <typename Scalar>
Vector<Scalar> flatten(const Params<Scalar>& P)
{
    Index n = 0;
    for (const auto& b : P)
    {
        n += b.psi.size() + b.psi_dual.size() + b.b_enc.size() + b.b_dec.size();
    }
    Vector<Scalar> v(n);
    Index o = 0;
    auto put = [&](const auto& m) {
        for (Index j = 0; j < m.cols(); ++j)
            for (Index i = 0; i < m.rows(); ++i)
                v(o++) = m(i, j);
    };
    for (const auto& b : P)
    {
        put(b.psi);
        put(b.psi_dual);
        put(b.b_enc);
        put(b.b_dec);
    }
    return v;
}

/// Inverse of `flatten`; `shape` supplies the layout.
template <typename Scalar, typename Derived>
Params<Scalar> unflatten(const Eigen::MatrixBase<Derived>& v, const Params<Scalar>& shape)
{
    Params<Scalar> P = shape;
    Index o          = 0;
    auto get = [&](auto& m) {
        for (Index j = 0; j < m.cols(); ++j)
            for (Index i = 0; i < m.rows(); ++i)
                m(i, j) = v(o++);
    };
    for (auto& b : P)
    {
        get(b.psi);
        get(b.psi_dual);
        get(b.b_enc);
        get(b.b_dec);
    }
    detail::require(o == v.size(), "parameter vector length mismatch");
    return P;
}

struct TrainConfig
{
    double step          = 1e-2;
    Index iterations     = 2000;
    std::uint64_t seed   = 1;
    int max_halvings     = 30;
    double loss_tol      = 1e-24; ///< stop once the loss is this small
    bool train_biases    = true;
};

template <typename Scalar>
struct FitResult
{
    Params<Scalar> params;
    std::vector<Scalar> loss_trace; ///< loss before the first step, then after each step
    Index steps  = 0;
    bool aborted = false; ///< a non-finite loss or gradient was hit
    bool stalled = false; ///< every halving failed to decrease the loss
};

///
/// \brief Gradient descent with step halving.
///
/// Each step starts from `config.step` and halves it until the loss does not
/// increase (at most `max_halvings` times). Starts from `init` when given,
/// otherwise from `init_params(net, config.seed)`.
///
template <typename Scalar>
FitResult<Scalar> fit(const TrainingSet<Scalar>& data, const NetworkSpec& net,
                      const TrainConfig& config, std::optional<Params<Scalar>> init = std::nullopt)
{
    detail::require(config.step > 0.0, "step size must be positive");
    detail::require(config.iterations >= 0, "iteration budget must be nonnegative");
    FitResult<Scalar> res;
    res.params = init ? *init : init_params<Scalar>(net, config.seed);
    Scalar cur(0);
    Params<Scalar> G = grad(res.params, data, net, &cur);
    res.loss_trace.push_back(cur);
    if (!std::isfinite(double(cur)))
    {
        res.aborted = true;
        return res;
    }
    for (Index it = 0; it < config.iterations && double(cur) > config.loss_tol; ++it)
    {
        if (!config.train_biases)
        {
            for (auto& b : G)
            {
                b.b_enc.setZero();
                b.b_dec.setZero();
            }
        }
        const Vector<Scalar> x = flatten(res.params);
        const Vector<Scalar> g = flatten(G);
        if (!g.allFinite())
        {
            res.aborted = true;
            break;
        }
        Scalar eta(config.step);
        bool accepted = false;
        Params<Scalar> trial;
        Scalar trial_loss(0);
        for (int h = 0; h <= config.max_halvings; ++h, eta /= Scalar(2))
        {
            trial      = unflatten(Vector<Scalar>(x - eta * g), res.params);
            trial_loss = loss(trial, data, net);
            if (std::isfinite(double(trial_loss)) && trial_loss <= cur)
            {
                accepted = true;
                break;
            }
        }
        if (!accepted)
        {
            res.stalled = true;
            break;
        }
        res.params = std::move(trial);
        G          = grad(res.params, data, net, &cur);
        res.loss_trace.push_back(cur);
        res.steps = it + 1;
    }
    return res;
}

} // namespace framelet

#endif /* FRAMELET_TRAINER_HPP */
