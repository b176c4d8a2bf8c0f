#ifndef FRAMELET_NETWORK_HPP
#define FRAMELET_NETWORK_HPP

#include <string>
#include <vector>

#include "framelet/bases.hpp"
#include "framelet/core.hpp"

namespace framelet
{

/// One encoder-decoder stage. The input channel count is implied by the
/// previous layer (1 for the first).
struct LayerSpec
{
    Index d            = 1;
    Index q            = 1;
    BasisKind nonlocal = BasisKind::identity;
    bool relu          = false;
    bool bypass        = false;
};

struct NetworkSpec
{
    std::vector<LayerSpec> layers;

    Index depth() const
    {
        return static_cast<Index>(layers.size());
    }

    /// Input channel count of layer `l` (0-based).
    Index p(Index l) const
    {
        return l == 0 ? 1 : layers[static_cast<std::size_t>(l - 1)].q;
    }
};

/// Checks filter lengths, channel counts and signal lengths through the net.
inline void validate(const NetworkSpec& net, Index n)
{
    Index len = n;
    for (Index l = 0; l < net.depth(); ++l)
    {
        const auto& L = net.layers[static_cast<std::size_t>(l)];
        const std::string tag = "layer " + std::to_string(l + 1) + ": ";
        detail::require(L.d >= 1, tag + "filter length must be positive");
        detail::require(L.q >= 1, tag + "channel count must be positive");
        detail::require(L.d <= len, tag + "filter length exceeds signal length " +
                                        std::to_string(len));
        if (L.nonlocal == BasisKind::avgpool || L.nonlocal == BasisKind::maxpool ||
            L.nonlocal == BasisKind::haar)
        {
            detail::require(len % 2 == 0, tag + "pooling needs an even signal length");
        }
        len = basis_output_length(L.nonlocal, len);
    }
}

} // namespace framelet

#endif /* FRAMELET_NETWORK_HPP */
