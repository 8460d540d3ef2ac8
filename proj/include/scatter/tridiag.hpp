#pragma once

#include <span>
#include <vector>

#include "scatter/params.hpp"

namespace scatter {

/// Complex tridiagonal system: sub[k] = A(k+1, k), diag[k] = A(k, k), super[k] = A(k, k+1).
struct TridiagonalSystem {
    std::vector<cplx> sub;
    std::vector<cplx> diag;
    std::vector<cplx> super;
    std::vector<cplx> rhs;

    std::size_t size() const noexcept { return diag.size(); }
    /// y = A x
    std::vector<cplx> apply(std::span<const cplx> x) const;
};

/// Gaussian elimination with partial (row) pivoting, LAPACK gtsv style.
/// Throws ScatterError(singular_system) on a zero pivot.
std::vector<cplx> solve_tridiagonal(TridiagonalSystem system);

/// ||A x - b||_inf / ||b||_inf (absolute residual when b == 0).
double relative_residual(const TridiagonalSystem& system, std::span<const cplx> x);

}  // namespace scatter
