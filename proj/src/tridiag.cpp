#include "scatter/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "scatter/error.hpp"

namespace scatter {

std::vector<cplx> TridiagonalSystem::apply(std::span<const cplx> x) const {
    const std::size_t n = diag.size();
    std::vector<cplx> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = diag[i] * x[i];
        if (i > 0) acc += sub[i - 1] * x[i - 1];
        if (i + 1 < n) acc += super[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

std::vector<cplx> solve_tridiagonal(TridiagonalSystem s) {
    const std::size_t n = s.diag.size();
    if (n == 0) return {};
    if (s.rhs.size() != n || s.sub.size() + 1 != n || s.super.size() + 1 != n) {
        throw ScatterError(ErrorKind::invalid_argument, "tridiagonal band sizes are inconsistent");
    }
    auto& dl = s.sub;
    auto& d = s.diag;
    auto& du = s.super;
    auto& b = s.rhs;
    auto singular = [] { throw ScatterError(ErrorKind::singular_system, "zero pivot in tridiagonal solve"); };

    // After elimination dl[k] holds the fill-in on the second superdiagonal.
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const bool last = k + 2 == n;
        if (std::abs(d[k]) >= std::abs(dl[k])) {
            if (d[k] == cplx{}) singular();
            const cplx fact = dl[k] / d[k];
            d[k + 1] -= fact * du[k];
            b[k + 1] -= fact * b[k];
            dl[k] = 0.0;
        } else {
            const cplx fact = d[k] / dl[k];
            d[k] = dl[k];
            const cplx temp = d[k + 1];
            d[k + 1] = du[k] - fact * temp;
            if (!last) {
                dl[k] = du[k + 1];
                du[k + 1] = -fact * dl[k];
            } else {
                dl[k] = 0.0;
            }
            du[k] = temp;
            const cplx bk = b[k];
            b[k] = b[k + 1];
            b[k + 1] = bk - fact * b[k + 1];
        }
    }
    if (d[n - 1] == cplx{}) singular();

    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
        b[k] = (b[k] - du[k] * b[k + 1] - dl[k] * b[k + 2]) / d[k];
    }
    for (const auto& v : b) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) singular();
    }
    return std::move(b);
}

double relative_residual(const TridiagonalSystem& system, std::span<const cplx> x) {
    const auto ax = system.apply(x);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        num = std::max(num, std::abs(ax[i] - system.rhs[i]));
        den = std::max(den, std::abs(system.rhs[i]));
    }
    return den > 0.0 ? num / den : num;
}

}  // namespace scatter
