#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scatter/params.hpp"

namespace scatter::kernels {

/// Serial kernels are the reference implementation; parallel ones must agree
/// with them (bitwise for permutations, to rounding for reductions).
enum class Exec { serial, parallel };

/// Number of OpenMP workers used by parallel kernels (1 without OpenMP).
int worker_threads() noexcept;
void set_worker_threads(int n) noexcept;
/// Applies SCATTER_THREADS when it holds a positive integer; returns the thread count.
int configure_threads_from_env() noexcept;

struct AdvectionExit {
    cplx right;  // value pushed off the right edge by the right-moving field
    cplx left;   // value pushed off the left edge by the left-moving field
};

/// right[i] <- right[i-1], left[i] <- left[i+1]; vacated edge cells become zero.
AdvectionExit advect_serial(std::span<cplx> right, std::span<cplx> left) noexcept;
/// Same permutation through a scratch buffer (swapped into place).
AdvectionExit advect_parallel(std::vector<cplx>& right, std::vector<cplx>& left, std::vector<cplx>& scratch);

/// sum |a_i|^2, left to right.
double probability_serial(std::span<const cplx> a) noexcept;
/// sum |a_i|^2 over fixed-size blocks; the result does not depend on the thread count.
double probability_parallel(std::span<const cplx> a) noexcept;

inline constexpr std::size_t kReductionBlock = 4096;

inline double probability(std::span<const cplx> a, Exec exec) noexcept {
    return exec == Exec::parallel ? probability_parallel(a) : probability_serial(a);
}

/// f(i) for i in [0, n); each index is written by exactly one worker.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
}

}  // namespace scatter::kernels
