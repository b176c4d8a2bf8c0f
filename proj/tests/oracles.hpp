// Independent reference implementations used only by tests. They follow the
// textbook definitions (1-based index arithmetic, naive DFTs, explicit
// patch enumeration) rather than the library code paths.
#ifndef FRAMELET_TESTS_ORACLES_HPP
#define FRAMELET_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle
{

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

inline MatrixXd randn(Index r, Index c, std::mt19937_64& rng)
{
    std::normal_distribution<double> N(0.0, 1.0);
    MatrixXd M(r, c);
    for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i)
            M(i, j) = N(rng);
    return M;
}

inline VectorXd randv(Index n, std::mt19937_64& rng)
{
    return randn(n, 1, rng).col(0);
}

/// Random orthogonal matrix from a QR factorization.
inline MatrixXd rand_orthogonal(Index n, std::mt19937_64& rng)
{
    Eigen::HouseholderQR<MatrixXd> qr(randn(n, n, rng));
    MatrixXd Q = qr.householderQ();
    return Q;
}

inline double rel_err(const MatrixXd& a, const MatrixXd& b)
{
    const double den = std::max(b.norm(), 1e-300);
    return (a - b).norm() / den;
}

/// 1-based definition: H(i,j) = f[((i + j - 2) mod n) + 1].
inline MatrixXd hankel(const VectorXd& f, Index d)
{
    const Index n = f.size();
    MatrixXd H(n, d);
    for (Index i = 1; i <= n; ++i)
        for (Index j = 1; j <= d; ++j)
            H(i - 1, j - 1) = f(((i + j - 2) % n + 1) - 1);
    return H;
}

/// Generalized inverse through trace inner products with lifted unit vectors.
inline VectorXd unlift(const MatrixXd& B)
{
    const Index n = B.rows(), d = B.cols();
    VectorXd f(n);
    for (Index k = 0; k < n; ++k)
    {
        VectorXd e = VectorXd::Zero(n);
        e(k)       = 1.0;
        f(k)       = (hankel(e, d).array() * B.array()).sum() / double(d);
    }
    return f;
}

inline Eigen::VectorXcd dft(const VectorXd& x, Index N)
{
    Eigen::VectorXcd X(N);
    for (Index k = 0; k < N; ++k)
    {
        cplx acc(0.0);
        for (Index t = 0; t < x.size(); ++t)
            acc += x(t) * std::polar(1.0, -2.0 * pi * double(k * t) / double(N));
        X(k) = acc;
    }
    return X;
}

inline VectorXd idft_real(const Eigen::VectorXcd& X)
{
    const Index N = X.size();
    VectorXd x(N);
    for (Index t = 0; t < N; ++t)
    {
        cplx acc(0.0);
        for (Index k = 0; k < N; ++k)
            acc += X(k) * std::polar(1.0, 2.0 * pi * double(k * t) / double(N));
        x(t) = acc.real() / double(N);
    }
    return x;
}

/// Circular correlation y[k] = sum_j f[k + j] g[j] through the DFT.
inline VectorXd correlate(const VectorXd& f, const VectorXd& g)
{
    const Index n = f.size();
    return idft_real(dft(f, n).cwiseProduct(dft(g, n).conjugate()));
}

/// Circular convolution y[k] = sum_j u[k - j] v[j] through the DFT.
inline VectorXd convolve(const VectorXd& u, const VectorXd& v)
{
    const Index n = u.size();
    return idft_real(dft(u, n).cwiseProduct(dft(v, n)));
}

/// Rows enumerate wrapped d1 x d2 patches of X, pixel-major by (column, row)
/// of the top-left corner; each row is the patch in column-major order.
inline MatrixXd patches(const MatrixXd& X, Index d1, Index d2)
{
    const Index n1 = X.rows(), n2 = X.cols();
    MatrixXd P(n1 * n2, d1 * d2);
    Index row = 0;
    for (Index c0 = 0; c0 < n2; ++c0)
        for (Index r0 = 0; r0 < n1; ++r0, ++row)
        {
            Index col = 0;
            for (Index b = 0; b < d2; ++b)
                for (Index a = 0; a < d1; ++a)
                    P(row, col++) = X((r0 + a) % n1, (c0 + b) % n2);
        }
    return P;
}

/// Naive 2-D circular correlation of one image with one d1 x d2 kernel.
inline MatrixXd correlate_2d(const MatrixXd& X, const MatrixXd& K)
{
    const Index n1 = X.rows(), n2 = X.cols();
    MatrixXd Y = MatrixXd::Zero(n1, n2);
    for (Index r = 0; r < n1; ++r)
        for (Index c = 0; c < n2; ++c)
            for (Index a = 0; a < K.rows(); ++a)
                for (Index b = 0; b < K.cols(); ++b)
                    Y(r, c) += X((r + a) % n1, (c + b) % n2) * K(a, b);
    return Y;
}

/// Numerical rank from Eigen's own SVD with a relative threshold.
inline Index rank(const MatrixXd& A, double tol = 1e-8)
{
    Eigen::JacobiSVD<MatrixXd> s(A);
    const auto& sv = s.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        return 0;
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0))
            ++r;
    return r;
}

} // namespace oracle

#endif
