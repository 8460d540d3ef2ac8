#include "scatter/harmonic_balance.hpp"

#include "scatter/error.hpp"

namespace scatter {

TridiagonalSystem HarmonicBalanceSystem::as_tridiagonal() const {
    TridiagonalSystem sys;
    const std::size_t n = diagonal.size();
    sys.diag = diagonal;
    sys.sub.assign(n - 1, cplx(off_diagonal, 0.0));
    sys.super.assign(n - 1, cplx(off_diagonal, 0.0));
    sys.rhs = rhs;
    return sys;
}

HarmonicBalanceSystem build_harmonic_balance(const EmitterParams& params, double detuning, int order) {
    params.validate();
    if (order < 1) throw ScatterError(ErrorKind::invalid_argument, "harmonic balance order must be >= 1");
    if (params.mod_freq == 0.0 && params.mod_amp != 0.0) {
        throw ScatterError(ErrorKind::static_limit, "harmonic balance needs omega > 0 when f != 0");
    }
    HarmonicBalanceSystem hb;
    hb.order = order;
    const std::size_t size = 2 * static_cast<std::size_t>(order) + 1;
    hb.diagonal.resize(size);
    hb.rhs.assign(size, cplx{});
    const double g = params.gamma();
    for (int n = -order; n <= order; ++n) {
        hb.diagonal[static_cast<std::size_t>(n + order)] = cplx(detuning + n * params.mod_freq, g);
    }
    hb.off_diagonal = -0.5 * params.mod_energy();
    hb.rhs[static_cast<std::size_t>(order)] = params.coupling;
    return hb;
}

ExcitationSpectrum harmonic_balance_solve(const EmitterParams& params, double detuning, int order) {
    const auto hb = build_harmonic_balance(params, detuning, order);
    ExcitationSpectrum spec(params.omega_a + detuning, params.mod_freq, order);
    // decoupled emitter
    if (params.coupling == 0.0) return spec;
    spec.coeffs = solve_tridiagonal(hb.as_tridiagonal());
    return spec;
}

double harmonic_balance_residual(const HarmonicBalanceSystem& system, const ExcitationSpectrum& spectrum) {
    std::vector<cplx> x(system.diagonal.size());
    for (int n = -system.order; n <= system.order; ++n) x[static_cast<std::size_t>(n + system.order)] = spectrum.at(n);
    return relative_residual(system.as_tridiagonal(), x);
}

}  // namespace scatter
