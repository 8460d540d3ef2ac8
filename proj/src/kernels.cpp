#include "scatter/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scatter::kernels {

int worker_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_worker_threads(int n) noexcept {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int configure_threads_from_env() noexcept {
    if (const char* env = std::getenv("SCATTER_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) set_worker_threads(static_cast<int>(n));
    }
    return worker_threads();
}

AdvectionExit advect_serial(std::span<cplx> right, std::span<cplx> left) noexcept {
    AdvectionExit out{};
    if (!right.empty()) {
        out.right = right.back();
        std::shift_right(right.begin(), right.end(), 1);
        right.front() = cplx{};
    }
    if (!left.empty()) {
        out.left = left.front();
        std::shift_left(left.begin(), left.end(), 1);
        left.back() = cplx{};
    }
    return out;
}

AdvectionExit advect_parallel(std::vector<cplx>& right, std::vector<cplx>& left, std::vector<cplx>& scratch) {
    AdvectionExit out{};
    const auto n = static_cast<long long>(right.size());
    scratch.resize(right.size());
    if (n > 0) {
        out.right = right.back();
#pragma omp parallel for schedule(static)
        for (long long i = 1; i < n; ++i) scratch[static_cast<std::size_t>(i)] = right[static_cast<std::size_t>(i - 1)];
        scratch.front() = cplx{};
        std::swap(right, scratch);
    }
    const auto m = static_cast<long long>(left.size());
    scratch.resize(left.size());
    if (m > 0) {
        out.left = left.front();
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < m - 1; ++i) scratch[static_cast<std::size_t>(i)] = left[static_cast<std::size_t>(i + 1)];
        scratch.back() = cplx{};
        std::swap(left, scratch);
    }
    return out;
}

double probability_serial(std::span<const cplx> a) noexcept {
    double acc = 0.0;
    for (const auto& v : a) acc += std::norm(v);
    return acc;
}

double probability_parallel(std::span<const cplx> a) noexcept {
    const std::size_t blocks = (a.size() + kReductionBlock - 1) / kReductionBlock;
    if (blocks <= 1) return probability_serial(a);
    std::vector<double> partial(blocks);
    const auto nb = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(a.size(), lo + kReductionBlock);
        partial[static_cast<std::size_t>(b)] = probability_serial(a.subspan(lo, hi - lo));
    }
    double acc = 0.0;
    for (double p : partial) acc += p;
    return acc;
}

}  // namespace scatter::kernels
