#pragma once

#include <optional>
#include <span>
#include <vector>

#include "scatter/kernels.hpp"
#include "scatter/params.hpp"

namespace scatter {

/// Right-moving Gaussian packet. bandwidth is the standard deviation of the
/// spectral probability density; the spatial density then has standard
/// deviation v_g / (2 * bandwidth).
struct PacketSpec {
    double center_freq = 1000.0;
    double bandwidth = 0.05;
    double launch_center = 0.0;
    int direction = +1;

    double spatial_width(double group_velocity) const noexcept { return group_velocity / (2.0 * bandwidth); }
};

/// Frequency modulation f*Omega*cos(omega t) gated by an on/off envelope.
struct ModulationSchedule {
    double mod_energy = 0.0;
    double mod_freq = 0.0;
    std::optional<double> switch_on_time;   // envelope rises from 0 here
    std::optional<double> switch_off_time;  // envelope falls to 0 here
    double ramp_duration = 0.0;             // 0 = instantaneous switching

    double envelope(double t) const noexcept;
    /// Instantaneous shift of the transition frequency from its static value.
    double frequency_shift(double t) const noexcept;
};

struct MeasurementWindows {
    double storage_time = 0.0;  // storage efficiency is read here
    double leak_begin = 0.0;    // log-linear leakage fit window
    double leak_end = 0.0;
    double release_end = 0.0;   // right-exit tally is read here when releasing
};

/// Two-emitter trap: the left emitter is modulated (transparent) until
/// switch-off, the right one is static and resonant unless a release
/// schedule switches its modulation on.
struct TrapProtocol {
    EmitterParams emitter;  // Omega, V, v_g for both sites; modulation comes from the schedules
    PacketSpec packet;
    ModulationSchedule left_schedule;
    ModulationSchedule right_schedule;
    double left_position = 0.0;
    double cavity_length = 0.0;
    double dx = 0.025;
    double domain_length = 0.0;
    double end_time = 0.0;
    int sample_every = 40;
    MeasurementWindows windows;

    double right_position() const noexcept { return left_position + cavity_length; }
    double round_trip_time() const noexcept { return 2.0 * cavity_length / emitter.group_velocity; }
    bool has_release() const noexcept { return right_schedule.switch_on_time.has_value(); }

    /// Throws kinematic_violation unless a switch-off happens after the packet's
    /// leading edge (center + 5 widths) passes the left site and before it reaches the right one.
    void validate() const;
};

struct EmitterSite {
    std::size_t cell = 0;
    cplx excitation{};
    cplx carrier_phase{1.0, 0.0};  // exp(i k_c x_site)
    double static_offset = 0.0;    // Omega - carrier frequency
};

/// Field envelopes in the frame rotating at the packet carrier. phi_R, phi_L are
/// densities (probability = |phi|^2 dx); exit_* tally probability that left the domain.
struct GridState {
    double dx = 0.0;
    double group_velocity = 1.0;
    double coupling = 0.0;
    double carrier_freq = 0.0;
    double time = 0.0;
    long steps_taken = 0;
    std::vector<cplx> phi_R;
    std::vector<cplx> phi_L;
    std::vector<EmitterSite> sites;
    double exit_right = 0.0;
    double exit_left = 0.0;
    kernels::Exec exec = kernels::Exec::parallel;
    std::vector<cplx> scratch;

    std::size_t cells() const noexcept { return phi_R.size(); }
    double time_step() const noexcept { return dx / group_velocity; }
};

/// Gaussian packet in phi_R normalised to 1 on the grid, phi_L = 0, emitters unexcited.
/// Throws resolution_error when the packet width spans fewer than 20 cells or a site is off-grid.
GridState init_grid(double domain_length, double dx, const EmitterParams& emitter, const PacketSpec& packet,
                    std::span<const double> site_positions);
GridState init_grid(double domain_length, double dx, const PacketSpec& packet, const TrapProtocol& protocol);

/// Exact exponential of the single-site coupling over dt. a, b are the cell
/// amplitudes scaled by sqrt(dx), g = V / sqrt(dx), phase = exp(i k_c x_site),
/// detuning = instantaneous emitter frequency minus carrier.
void local_coupling_update(cplx& a, cplx& b, cplx& e, double g, cplx phase, double detuning, double dt) noexcept;

/// One split step: exact advection by one cell, then the local update at every site
/// with the emitter frequency evaluated at mid-step. schedules[i] drives sites[i].
/// Throws cfl_violation unless dt == dx / v_g.
void step(GridState& state, std::span<const ModulationSchedule> schedules, double dt);
void step(GridState& state, const TrapProtocol& protocol, double dt);

/// Total probability including exit tallies.
double norm(const GridState& state);
/// Field between the two sites (inward-moving content of the site cells included) plus both excitations.
double cavity_probability(const GridState& state);

struct TrapSample {
    double time = 0.0;
    double cavity = 0.0;
    double exit_left = 0.0;
    double exit_right = 0.0;
    double excitation_left = 0.0;
    double excitation_right = 0.0;
    double norm = 0.0;
};

struct TrapReport {
    std::vector<TrapSample> series;
    double storage_efficiency = 0.0;  // P_cav at windows.storage_time
    double cavity_at_switch_off = 0.0;
    double leakage_rate = 0.0;        // -d ln P_cav / dt over the leakage window
    std::optional<double> release_exit;      // right-exit probability gained after switch-on
    std::optional<double> release_fidelity;  // release_exit / P_cav at switch-on
    double max_norm_defect = 0.0;
    long steps = 0;
};

TrapReport run_protocol(const TrapProtocol& protocol, kernels::Exec exec = kernels::Exec::parallel);

struct TrapPresetOptions {
    double bandwidth = 0.05;                // in units of gamma
    std::optional<double> left_mod_energy;  // default: transmission maximum of the fig3a sweep
    double left_mod_freq = 2.0;
    bool switch_off = true;
    bool release = false;
    double ramp_duration = 0.0;
    double dx = 0.025;
    double omega_a = 1000.0;
    int storage_round_trips = 5;
};

/// Geometry scaled by the packet width w: launch at 6w, left site at 14w,
/// cavity length 12w, switch-off once the trailing edge (center - 5w) has passed
/// the left site plus 2/gamma. gamma = V = v_g = 1.
TrapProtocol make_trap_protocol(const TrapPresetOptions& options);

/// Modulation depth f*Omega/gamma at which the fig3a sweep (Delta = 0) transmits most.
double transmission_maximum_mod_energy(double mod_freq, double omega_a = 1000.0);

struct PacketScatteringResult {
    double transmitted = 0.0;
    double reflected = 0.0;
    double excitation = 0.0;
    double max_norm_defect = 0.0;
    long steps = 0;
};

/// Sends one packet past a single emitter (modulated per `emitter`) and
/// integrates until the envelope and the emitter have decayed.
/// detuning = carrier frequency - Omega.
PacketScatteringResult scatter_packet(const EmitterParams& emitter, double detuning, double bandwidth, double dx,
                                      kernels::Exec exec = kernels::Exec::parallel);

}  // namespace scatter
