///
/// \file core.hpp
///
/// Dense type aliases and the error hierarchy shared by every module.
///
#ifndef FRAMELET_CORE_HPP
#define FRAMELET_CORE_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace framelet
{

using Index = Eigen::Index;

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

///
/// Base class of all errors raised by the library.
///
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range or inconsistent arguments (filter length, channel counts, shapes).
class ParameterError : public Error
{
public:
    using Error::Error;
};

/// A mathematical hypothesis required by an operation does not hold.
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// A frame / perfect-reconstruction condition is violated.
class FrameError : public Error
{
public:
    FrameError(const std::string& what, double deviation)
        : Error(what + " (deviation " + std::to_string(deviation) + ")"),
          m_deviation(deviation)
    {
    }

    double deviation() const noexcept
    {
        return m_deviation;
    }

private:
    double m_deviation;
};

/// The lifted matrix has full column rank, so no annihilating filter exists.
class NoAnnihilatorError : public Error
{
public:
    using Error::Error;
};

/// Requested channel budget is below the numerical rank.
class InfeasibleError : public Error
{
public:
    InfeasibleError(const std::string& what, Index rank)
        : Error(what + " (rank " + std::to_string(rank) + ")"), m_rank(rank)
    {
    }

    Index rank() const noexcept
    {
        return m_rank;
    }

private:
    Index m_rank;
};

namespace detail
{

inline void require(bool cond, const std::string& msg)
{
    if (!cond)
    {
        throw ParameterError(msg);
    }
}

inline Index wrap(Index i, Index n)
{
    const Index r = i % n;
    return r < 0 ? r + n : r;
}

} // namespace detail

///
/// Numerical rank: the number of singular values strictly above
/// `tol * sigma_max`. Zero for an all-zero spectrum.
///
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& singular_values,
                     typename Derived::RealScalar tol)
{
    using Real = typename Derived::RealScalar;
    if (singular_values.size() == 0)
    {
        return 0;
    }
    const Real smax = singular_values.cwiseAbs().maxCoeff();
    if (!(smax > Real(0)))
    {
        return 0;
    }
    Index r = 0;
    for (Index i = 0; i < singular_values.size(); ++i)
    {
        if (std::abs(singular_values(i)) > tol * smax)
        {
            ++r;
        }
    }
    return r;
}

/// Default relative tolerance used for numerical rank decisions.
inline constexpr double kDefaultRankTol = 1e-8;

} // namespace framelet

#endif /* FRAMELET_CORE_HPP */
