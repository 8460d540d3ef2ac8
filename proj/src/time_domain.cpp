#include "scatter/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "scatter/error.hpp"

namespace scatter {
namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBurnInTimes = 40.0;

std::size_t index_of(double t, double dt) { return static_cast<std::size_t>(std::llround(t / dt)); }

bool on_grid(double t, double dt) { return std::abs(t / dt - std::round(t / dt)) < 1e-7; }

}  // namespace

double max_stable_step(const EmitterParams& p, double detuning) {
    const double rate = std::max({p.gamma(), std::abs(detuning), p.mod_freq, p.mod_energy()});
    return rate > 0.0 ? 1.0 / (50.0 * rate) : std::numeric_limits<double>::infinity();
}

TimeDomainTrace time_domain_excitation(const EmitterParams& p, double detuning, double horizon, double dt) {
    p.validate();
    if (!(dt > 0.0) || !(horizon > dt)) throw ScatterError(ErrorKind::invalid_argument, "need 0 < dt < horizon");
    if (dt > max_stable_step(p, detuning) * (1.0 + 1e-12)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "dt=%.3e exceeds stable step %.3e", dt, max_stable_step(p, detuning));
        throw ScatterError(ErrorKind::unstable_step, buf);
    }
    const double g = p.gamma();
    const bool modulated = p.mod_freq > 0.0;
    const double period = modulated ? kTwoPi / p.mod_freq : 0.0;
    const double window = modulated ? kWindowPeriods * period : 20.0 / std::max(g, 1e-300);
    if (g > 0.0 && horizon < 20.0 / g + window) {
        throw ScatterError(ErrorKind::invalid_argument, "horizon shorter than settling time plus extraction window");
    }

    TimeDomainTrace tr;
    tr.dt = dt;
    tr.omega_0 = p.omega_a + detuning;
    tr.omega = p.mod_freq;
    tr.gamma = g;
    const std::size_t steps = index_of(horizon, dt);
    tr.horizon = static_cast<double>(steps) * dt;
    tr.samples.assign(steps + 1, cplx{});
    tr.window_end = tr.horizon;
    tr.window_start = g > 0.0 ? tr.horizon - window : 0.0;
    if (p.coupling == 0.0) return tr;

    const double V = p.coupling;
    const double fo = p.mod_energy();
    const double w = p.mod_freq;
    // Rotating frame y = e exp(i omega_0 t):  dy/dt = -i [(-Delta + fO cos(w t) - i g) y + V]
    auto rhs = [&](double t, cplx y) { return -I * (cplx(-detuning + fo * std::cos(w * t), -g) * y + V); };
    cplx y{};
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = tr.time(k);
        const cplx k1 = rhs(t, y);
        const cplx k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
        const cplx k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
        const cplx k4 = rhs(t + dt, y + dt * k3);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tr.samples[k + 1] = y * std::polar(1.0, -tr.omega_0 * tr.time(k + 1));
    }
    return tr;
}

TimeDomainTrace time_domain_excitation(const EmitterParams& p, double detuning) {
    p.validate();
    const double g = p.gamma();
    const double dt_max = max_stable_step(p, detuning);
    if (p.mod_freq > 0.0) {
        const double period = kTwoPi / p.mod_freq;
        const double per_period = std::ceil(period / dt_max);
        const double dt = period / per_period;
        const double burn = g > 0.0 ? std::ceil(kBurnInTimes / g / period) * period : period;
        return time_domain_excitation(p, detuning, burn + kWindowPeriods * period, dt);
    }
    const double dt = std::isfinite(dt_max) ? dt_max : 0.02;
    const double burn = g > 0.0 ? kBurnInTimes / g : 1.0;
    const double window = g > 0.0 ? 20.0 / g : 1.0;
    return time_domain_excitation(p, detuning, std::ceil((burn + window) / dt) * dt, dt);
}

ExcitationSpectrum fourier_extract(const TimeDomainTrace& tr, double omega_0, double omega, int order) {
    if (order < 0) throw ScatterError(ErrorKind::invalid_argument, "order must be >= 0");
    if (!on_grid(tr.window_start, tr.dt) || !on_grid(tr.window_end, tr.dt) || tr.window_end <= tr.window_start) {
        throw ScatterError(ErrorKind::bad_window, "window boundaries are not sample points");
    }
    if (tr.gamma > 0.0 && tr.window_start < kSettleTimes / tr.gamma - 1e-9) {
        throw ScatterError(ErrorKind::bad_window, "window starts before transients have decayed");
    }
    const double length = tr.window_end - tr.window_start;
    if (omega > 0.0) {
        const double periods = length * omega / kTwoPi;
        if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods) || std::round(periods) < 1.0) {
            throw ScatterError(ErrorKind::bad_window, "window is not an integer number of modulation periods");
        }
    } else {
        order = 0;
    }
    const std::size_t a = index_of(tr.window_start, tr.dt);
    const std::size_t b = index_of(tr.window_end, tr.dt);
    if (b >= tr.samples.size()) throw ScatterError(ErrorKind::bad_window, "window extends past the trace");

    ExcitationSpectrum spec(omega_0, omega, order);
    for (int n = -order; n <= order; ++n) {
        const double wn = omega_0 + n * omega;
        cplx acc{};
        for (std::size_t k = a; k <= b; ++k) {
            const double weight = (k == a || k == b) ? 0.5 : 1.0;
            acc += weight * tr.samples[k] * std::polar(1.0, wn * tr.time(k));
        }
        spec[n] = acc * tr.dt / length;
    }
    return spec;
}

double periodicity_defect(const TimeDomainTrace& tr) {
    if (!(tr.omega > 0.0)) return 0.0;
    const double period = kTwoPi / tr.omega;
    const double steps_per_period = period / tr.dt;
    if (std::abs(steps_per_period - std::round(steps_per_period)) > 1e-7) {
        throw ScatterError(ErrorKind::bad_window, "step is not commensurate with the modulation period");
    }
    const std::size_t m = static_cast<std::size_t>(std::llround(steps_per_period));
    const std::size_t a = index_of(tr.window_start, tr.dt);
    const std::size_t b = index_of(tr.window_end, tr.dt);
    const cplx phase = std::polar(1.0, tr.omega_0 * period);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k = a; k <= b; ++k) scale = std::max(scale, std::abs(tr.samples[k]));
    for (std::size_t k = a; k + m <= b; ++k) {
        worst = std::max(worst, std::abs(tr.samples[k + m] * phase - tr.samples[k]));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace scatter
