#pragma once

#include <vector>

#include "scatter/params.hpp"

namespace scatter {

/// Sampled emitter amplitude e(t_k), t_k = k * dt, in the laboratory frame.
struct TimeDomainTrace {
    double dt = 0.0;
    double horizon = 0.0;
    double omega_0 = 0.0;
    double omega = 0.0;
    double gamma = 0.0;
    std::vector<cplx> samples;
    double window_start = 0.0;
    double window_end = 0.0;

    double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
};

/// Transients must have decayed by this many 1/gamma before extraction.
inline constexpr double kSettleTimes = 15.0;
/// Extraction window length in modulation periods.
inline constexpr int kWindowPeriods = 20;

/// Largest step allowed by the fixed-step validity condition.
double max_stable_step(const EmitterParams& params, double detuning);

/// Integrates i de/dt = [Omega(1 + f cos(omega t)) - i gamma] e + V exp(-i omega_0 t)
/// from e(0) = 0 with classical RK4 (in the frame rotating at omega_0; samples are
/// rotated back). The extraction window is the final kWindowPeriods periods
/// (or 20/gamma when omega == 0).
/// Throws unstable_step when dt is too large, invalid_argument when the horizon is short.
TimeDomainTrace time_domain_excitation(const EmitterParams& params, double detuning, double horizon, double dt);

/// Step and horizon satisfying the preconditions with a 40/gamma burn-in and a
/// step commensurate with the modulation period.
TimeDomainTrace time_domain_excitation(const EmitterParams& params, double detuning);

/// e_n = (1/T_w) * integral over the window of e(t) exp(+i omega_n t) dt (trapezoidal).
/// Throws bad_window when the window is not commensurate with 2 pi / omega or starts
/// before kSettleTimes / gamma.
ExcitationSpectrum fourier_extract(const TimeDomainTrace& trace, double omega_0, double omega, int order);

/// max |e(t + T) exp(i omega_0 T) - e(t)| / max |e| over the window, T = 2 pi / omega.
double periodicity_defect(const TimeDomainTrace& trace);

}  // namespace scatter
