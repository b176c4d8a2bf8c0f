///
/// \file restoration.hpp
///
/// One-shot denoising and relaxed fixed-point inpainting around a pluggable
/// restoration operator.
///
#ifndef FRAMELET_RESTORATION_HPP
#define FRAMELET_RESTORATION_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "framelet/core.hpp"
#include "framelet/framelet.hpp"
#include "framelet/lowrank.hpp"
#include "framelet/mra.hpp"

namespace framelet
{

template <typename Scalar>
using RestorationOperator = std::function<Vector<Scalar>(const Vector<Scalar>&)>;

template <typename Scalar = double>
RestorationOperator<Scalar> identity_operator()
{
    return [](const Vector<Scalar>& f) { return f; };
}

/// Rank-`r` Hankel truncation with filter length `d`.
template <typename Scalar = double>
RestorationOperator<Scalar> rank_shrink_operator(Index d, Index r)
{
    return [d, r](const Vector<Scalar>& f) -> Vector<Scalar> { return lowrank_shrink(f, d, r).col(0); };
}

template <typename Scalar>
RestorationOperator<Scalar> network_operator(NetworkSpec net, std::vector<FilterBank<Scalar>> banks)
{
    return [net = std::move(net), banks = std::move(banks)](const Vector<Scalar>& f) {
        return network_apply(f, net, banks);
    };
}

template <typename Scalar>
RestorationOperator<Scalar> mra_operator(NetworkSpec net, std::vector<MraLayer<Scalar>> layers)
{
    return [net = std::move(net), layers = std::move(layers)](const Vector<Scalar>& f) {
        return mra_decode(mra_encode(f, net, layers), net, layers);
    };
}

template <typename Scalar>
Vector<Scalar> denoise(const Vector<Scalar>& g, const RestorationOperator<Scalar>& Q)
{
    return Q(g);
}

///
/// `mu * P g + (I - mu * P) Q(f)`, where `P` keeps the entries with
/// `mask[i] != 0`.
///
template <typename Scalar>
Vector<Scalar> masked_update(const Vector<Scalar>& f, const Vector<Scalar>& g,
                             const Vector<Scalar>& mask, Scalar mu,
                             const RestorationOperator<Scalar>& Q)
{
    detail::require(f.size() == g.size() && g.size() == mask.size(),
                    "signal, observation and mask lengths differ");
    const Vector<Scalar> q = Q(f);
    detail::require(q.size() == f.size(), "restoration operator changed the signal length");
    Vector<Scalar> out(f.size());
    for (Index i = 0; i < f.size(); ++i)
    {
        out(i) = mask(i) != Scalar(0) ? mu * g(i) + (Scalar(1) - mu) * q(i) : q(i);
    }
    return out;
}

template <typename Scalar>
struct InpaintProblem
{
    Vector<Scalar> g;
    Vector<Scalar> mask; ///< 1 on observed samples, 0 on missing ones
    Scalar mu     = Scalar(0.99);
    Scalar lambda = Scalar(0.5);
    std::function<Scalar(Index)> schedule; ///< overrides `lambda` when set
    Index max_iter = 200;
    Scalar tol     = Scalar(1e-8);
    std::optional<Vector<Scalar>> truth;

    Scalar relaxation(Index it) const
    {
        return schedule ? schedule(it) : lambda;
    }
};

struct TraceEntry
{
    Index iteration = 0;
    double residual = 0.0;
    double error    = std::numeric_limits<double>::quiet_NaN();
};

template <typename Scalar>
struct InpaintResult
{
    Vector<Scalar> f;
    std::vector<TraceEntry> trace;
    bool converged   = false;
    Index iterations = 0;
};

/// Writes `iteration,residual,error` rows; the error column is empty when
/// no ground truth was supplied.
inline void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace)
{
    os << "iteration,residual,error\n";
    char buf[96];
    for (const auto& t : trace)
    {
        if (std::isnan(t.error))
        {
            std::snprintf(buf, sizeof(buf), "%ld,%.17g,\n", long(t.iteration), t.residual);
        }
        else
        {
            std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g\n", long(t.iteration), t.residual,
                          t.error);
        }
        os << buf;
    }
}

///
/// \brief Krasnoselskii-Mann inpainting.
///
/// Starts from `f_0 = P g` and repeats
/// `f_{k+1} = f_k + lambda_k (mu P g + (I - mu P) Q(f_k) - f_k)` until the
/// relative change drops to `tol` or `max_iter` is reached. Non-convergence
/// is reported through `converged`, never thrown.
///
template <typename Scalar>
InpaintResult<Scalar> inpaint(const InpaintProblem<Scalar>& pb, const RestorationOperator<Scalar>& Q)
{
    const Index n = pb.g.size();
    detail::require(n >= 1 && pb.mask.size() == n, "observation and mask lengths differ");
    detail::require(!pb.mask.isZero(0), "mask has no observed samples");
    detail::require(pb.mu >= Scalar(0) && pb.mu <= Scalar(1), "mu must lie in [0, 1]");
    detail::require(pb.max_iter >= 0, "iteration budget must be nonnegative");
    if (pb.truth)
    {
        detail::require(pb.truth->size() == n, "ground truth length differs");
    }

    InpaintResult<Scalar> res;
    res.f = pb.g.cwiseProduct(pb.mask.unaryExpr([](Scalar m) { return m != Scalar(0) ? Scalar(1) : Scalar(0); }));
    if ((pb.mask.array() != Scalar(0)).all())
    {
        res.f         = pb.g;
        res.converged = true;
        return res;
    }
    for (Index it = 0; it < pb.max_iter; ++it)
    {
        const Scalar lam = pb.relaxation(it);
        detail::require(lam > Scalar(0) && lam <= Scalar(1), "relaxation must lie in (0, 1]");
        const Vector<Scalar> fbar = masked_update(res.f, pb.g, pb.mask, pb.mu, Q);
        Vector<Scalar> next;
        if (lam == Scalar(1))
        {
            next = fbar;
        }
        else
        {
            next = res.f + lam * (fbar - res.f);
        }
        const Scalar step = (next - res.f).norm();
        const Scalar base = res.f.norm();
        TraceEntry t;
        t.iteration = it + 1;
        t.residual  = double(base > Scalar(0) ? step / base : step);
        if (pb.truth)
        {
            t.error = double((next - *pb.truth).norm());
        }
        res.trace.push_back(t);
        res.f          = std::move(next);
        res.iterations = it + 1;
        if (!std::isfinite(t.residual))
        {
            break;
        }
        if (t.residual <= double(pb.tol))
        {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace framelet

#endif /* FRAMELET_RESTORATION_HPP */
