#ifndef FRAMELET_PARALLEL_HPP
#define FRAMELET_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "framelet/core.hpp"

namespace framelet
{

namespace detail
{
inline std::atomic<int>& thread_setting()
{
    static std::atomic<int> n{1};
    return n;
}
} // namespace detail

/// Number of worker threads used by parallel sections (at least 1).
inline int num_threads()
{
    return std::max(1, detail::thread_setting().load());
}

inline void set_num_threads(int n)
{
    detail::thread_setting().store(std::max(1, n));
}

///
/// Runs `fn(i)` for `i` in `[0, count)` on up to `num_threads()` threads.
/// Each index is processed exactly once; callers write results into
/// per-index slots so the outcome does not depend on scheduling.
///
template <typename Fn>
void parallel_for(Index count, Fn&& fn)
{
    const Index workers = std::min<Index>(num_threads(), count);
    if (workers <= 1)
    {
        for (Index i = 0; i < count; ++i)
        {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    pool.reserve(static_cast<std::size_t>(workers));
    const std::function<void(Index)> job = [&](Index w) {
        try
        {
            for (Index i = w; i < count; i += workers)
            {
                fn(i);
            }
        }
        catch (...)
        {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
    };
    for (Index w = 0; w < workers; ++w)
    {
        pool.emplace_back(job, w);
    }
    for (auto& t : pool)
    {
        t.join();
    }
    for (auto& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
}

} // namespace framelet

#endif /* FRAMELET_PARALLEL_HPP */
