#pragma once

#include <vector>

#include "scatter/params.hpp"

namespace scatter {

/// Hard cap on the sideband order explored by automatic truncation.
inline constexpr int kMaxSidebandOrder = 512;

/// u = f * Omega / omega. Throws ScatterError(static_limit) when omega == 0.
double modulation_index(const EmitterParams& params);

/// Reflection amplitudes r_n for n in [-N, N]:
///   r_n = sum_{l=-L}^{L} -i*gamma * J_l(u) J_{n+l}(u) / (Delta - l*omega + i*gamma).
/// Index k of the result holds r_{k-N}. Throws static_limit when omega == 0.
std::vector<cplx> reflection_amplitudes(const EmitterParams& params, const ScatteringQuery& query);

/// t_n = r_n + delta_{n0}, taken from the same sum.
std::vector<cplx> transmission_amplitudes(const EmitterParams& params, const ScatteringQuery& query);

/// Full sideband set for an explicit truncation. Static parameters (f*omega == 0)
/// are routed to static_limit_amplitudes. Throws TruncationFailure when the
/// unitarity defect exceeds query.truncation.unitarity_tol.
SidebandSet scatter_sidebands(const EmitterParams& params, const ScatteringQuery& query);

/// Fourier coefficients of the emitter amplitude, normalised so that
/// r_n = V e_n / (i v_g) holds for every n.
ExcitationSpectrum excitation_coefficients(const EmitterParams& params, const ScatteringQuery& query);

/// T = sum |t_n|^2, R = sum |r_n|^2, defect = |1 - (T + R)|.
Probabilities total_probabilities(const SidebandSet& set) noexcept;

/// Single-sideband scattering off an unmodulated emitter sitting at Omega (f = 0)
/// or frozen at Omega(1 + f) (omega = 0). Throws ScatterError(not_static) otherwise.
SidebandSet static_limit_amplitudes(const EmitterParams& params, double detuning);

/// Starting point N = ceil(u + 8 u^{1/3} + 12), L = N + 8, doubled until the
/// unitarity defect drops below tol. Throws TruncationFailure past kMaxSidebandOrder.
TruncationSpec auto_truncation(const EmitterParams& params, double detuning, double tol);

/// Auto-truncated evaluation; the common entry point for sweeps and oracles.
SidebandSet evaluate_sidebands(const EmitterParams& params, double detuning, double tol = 1e-12);

/// Initial (N, L) guess used by auto_truncation, exposed for sizing other solvers.
TruncationSpec initial_truncation(double modulation_index, double tol);

}  // namespace scatter
