#ifndef FRAMELET_CORPUS_HPP
#define FRAMELET_CORPUS_HPP

#include <cmath>
#include <random>

#include "framelet/core.hpp"
#include "framelet/trainer.hpp"

namespace framelet
{

/// Adds white Gaussian noise at the given SNR (dB, relative to the signal RMS).
inline VectorXd add_noise(const VectorXd& clean, double snr_db, std::mt19937_64& rng)
{
    const double rms   = std::sqrt(clean.squaredNorm() / double(clean.size()));
    const double sigma = rms / std::pow(10.0, snr_db / 20.0);
    std::normal_distribution<double> N(0.0, sigma);
    VectorXd g = clean;
    for (Index i = 0; i < g.size(); ++i)
    {
        g(i) += N(rng);
    }
    return g;
}

///
/// Noisy cosines at a fixed frequency `k0` with random amplitude and phase;
/// targets are the clean cosines.
///
inline TrainingSet<double> cosine_corpus(Index n, Index count, std::uint64_t seed,
                                         double snr_db = 10.0, Index k0 = 2)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 1.5), phase(0.0, 2.0 * 3.14159265358979323846);
    TrainingSet<double> ts;
    for (Index s = 0; s < count; ++s)
    {
        const double a = amp(rng), ph = phase(rng);
        VectorXd clean(n);
        for (Index k = 0; k < n; ++k)
        {
            clean(k) = a * std::cos(2.0 * 3.14159265358979323846 * double(k0 * k) / double(n) + ph);
        }
        ts.inputs.push_back(add_noise(clean, snr_db, rng));
        ts.targets.push_back(clean);
    }
    return ts;
}

///
/// Constant signals of random level plus one spike of random sign and
/// position. The target is the constant; a bypassed network has to cancel
/// the spike, which it can do without seeing the constant level.
///
inline TrainingSet<double> spike_corpus(Index n, Index count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> level(-2.0, 2.0), height(0.5, 1.5);
    std::uniform_int_distribution<Index> where(0, n - 1);
    std::bernoulli_distribution sign(0.5);
    TrainingSet<double> ts;
    for (Index s = 0; s < count; ++s)
    {
        const double c = level(rng);
        VectorXd g     = VectorXd::Constant(n, c);
        const Index k  = where(rng);
        const double h = sign(rng) ? height(rng) : -height(rng);
        g(k) += h;
        ts.inputs.push_back(g);
        ts.targets.push_back(VectorXd::Constant(n, c));
    }
    return ts;
}

} // namespace framelet

#endif /* FRAMELET_CORPUS_HPP */
