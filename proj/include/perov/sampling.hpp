#pragma once

// Deterministic sampled-check driver. Every sample index gets its own engine
// seeded from (seed, index), so a report depends only on the seed and the
// sample count, never on how the loop was scheduled.

#include "perov/ordered_algebra.hpp"

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace perov {

using Rng = std::mt19937_64;

/// Draws one point of R^n.
using PointSampler = std::function<ModuleVector(Rng&)>;

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'2011'0b1e'c7edULL;

enum class Execution { serial, parallel };

/// Components uniform in [lo, hi].
PointSampler uniform_sampler(std::size_t n, double lo = -10.0, double hi = 10.0);

/// Cone points: components uniform in [0, hi], with roughly one draw in eight
/// pinned to zero so the boundary of the orthant is exercised too.
PointSampler cone_sampler(std::size_t n, double hi = 10.0);

/// splitmix64 finaliser over (seed, index).
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) noexcept;

namespace detail {

template <typename Result, typename Fn>
void run_serial(std::vector<std::optional<Result>>& slots, std::uint64_t seed, Fn& fn)
{
    for (std::size_t i = 0; i < slots.size(); ++i) {
        Rng rng(sample_seed(seed, i));
        slots[i] = fn(i, rng);
    }
}

template <typename Result, typename Fn>
void run_parallel(std::vector<std::optional<Result>>& slots, std::uint64_t seed, Fn& fn)
{
#ifdef _OPENMP
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto count = static_cast<std::int64_t>(slots.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            Rng rng(sample_seed(seed, static_cast<std::uint64_t>(i)));
            slots[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i), rng);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
#else
    run_serial(slots, seed, fn);
#endif
}

} // namespace detail

/// Runs fn(index, rng) -> std::optional<Result> for every index in [0, count)
/// and returns the engaged results in index order. The serial path is the
/// reference; the parallel path must produce the identical vector.
template <typename Result, typename Fn>
std::vector<Result> collect_samples(std::size_t count, std::uint64_t seed, Execution exec, Fn fn)
{
    std::vector<std::optional<Result>> slots(count);
    if (exec == Execution::parallel)
        detail::run_parallel(slots, seed, fn);
    else
        detail::run_serial(slots, seed, fn);

    std::vector<Result> out;
    for (auto& s : slots)
        if (s) out.push_back(std::move(*s));
    return out;
}

} // namespace perov
