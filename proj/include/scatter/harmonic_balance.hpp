#pragma once

#include "scatter/params.hpp"
#include "scatter/tridiag.hpp"

namespace scatter {

/// Fourier-space form of the reduced emitter equation
///   i de/dt = [Omega (1 + f cos(omega t)) - i gamma] e + V exp(-i omega_0 t),
/// truncated to harmonics |n| <= order with e_{+-(order+1)} = 0:
///   (Delta + n omega + i gamma) e_n - (f Omega / 2)(e_{n-1} + e_{n+1}) = V delta_{n0}.
struct HarmonicBalanceSystem {
    int order = 0;
    std::vector<cplx> diagonal;
    double off_diagonal = 0.0;  // matrix entry, -f Omega / 2
    std::vector<cplx> rhs;

    TridiagonalSystem as_tridiagonal() const;
};

HarmonicBalanceSystem build_harmonic_balance(const EmitterParams& params, double detuning, int order);

/// Throws static_limit for omega == 0 with f != 0, singular_system on a zero pivot.
ExcitationSpectrum harmonic_balance_solve(const EmitterParams& params, double detuning, int order);

/// ||A e - b||_inf / ||b||_inf for a solved spectrum.
double harmonic_balance_residual(const HarmonicBalanceSystem& system, const ExcitationSpectrum& spectrum);

}  // namespace scatter
