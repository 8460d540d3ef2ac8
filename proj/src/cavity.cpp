#include "scatter/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "scatter/error.hpp"
#include "scatter/sweep.hpp"

namespace scatter {
namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kEdgeWidths = 5.0;
const double kSqrt2 = std::numbers::sqrt2;

std::size_t site_cell(double x, double dx, std::size_t cells) {
    const double c = std::round(x / dx);
    if (!(c >= 1.0) || c >= static_cast<double>(cells) - 1.0) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "emitter at x=%.6g is not inside the grid", x);
        throw ScatterError(ErrorKind::resolution_error, buf);
    }
    return static_cast<std::size_t>(c);
}

TrapSample sample(const GridState& s) {
    TrapSample out;
    out.time = s.time;
    out.cavity = cavity_probability(s);
    out.exit_left = s.exit_left;
    out.exit_right = s.exit_right;
    out.excitation_left = s.sites.empty() ? 0.0 : std::norm(s.sites.front().excitation);
    out.excitation_right = s.sites.size() < 2 ? 0.0 : std::norm(s.sites[1].excitation);
    out.norm = norm(s);
    return out;
}

double log_slope(const std::vector<TrapSample>& series, double begin, double end) {
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& smp : series) {
        if (smp.time < begin || smp.time > end || !(smp.cavity > 0.0)) continue;
        const double y = std::log(smp.cavity);
        n += 1.0;
        sx += smp.time;
        sy += y;
        sxx += smp.time * smp.time;
        sxy += smp.time * y;
    }
    const double den = n * sxx - sx * sx;
    if (n < 2.0 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / den;
}

}  // namespace

double ModulationSchedule::envelope(double t) const noexcept {
    double env = 1.0;
    if (switch_on_time) {
        if (t < *switch_on_time) return 0.0;
        if (ramp_duration > 0.0) env = std::min(1.0, (t - *switch_on_time) / ramp_duration);
    }
    if (switch_off_time && t >= *switch_off_time) {
        if (ramp_duration <= 0.0) return 0.0;
        env *= std::max(0.0, 1.0 - (t - *switch_off_time) / ramp_duration);
    }
    return env;
}

double ModulationSchedule::frequency_shift(double t) const noexcept {
    if (mod_energy == 0.0) return 0.0;
    return mod_energy * envelope(t) * std::cos(mod_freq * t);
}

void TrapProtocol::validate() const {
    emitter.validate();
    if (!(cavity_length > 0.0) || !(dx > 0.0) || !(end_time > 0.0)) {
        throw ScatterError(ErrorKind::invalid_argument, "cavity length, dx and end time must be positive");
    }
    if (packet.bandwidth > 0.1 * emitter.gamma() * (1.0 + 1e-12)) {
        throw ScatterError(ErrorKind::invalid_argument, "protocol packets must satisfy bandwidth <= gamma/10");
    }
    if (left_schedule.switch_off_time) {
        const double lead = packet.launch_center + kEdgeWidths * packet.spatial_width(emitter.group_velocity);
        const double arrive_left = (left_position - lead) / emitter.group_velocity;
        const double arrive_right = (right_position() - lead) / emitter.group_velocity;
        const double t = *left_schedule.switch_off_time;
        if (t < arrive_left || t > arrive_right) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "switch-off at t=%.4g outside [%.4g, %.4g] where the packet front is inside",
                          t, arrive_left, arrive_right);
            throw ScatterError(ErrorKind::kinematic_violation, buf);
        }
    }
}

GridState init_grid(double domain_length, double dx, const EmitterParams& emitter, const PacketSpec& packet,
                    std::span<const double> site_positions) {
    emitter.validate();
    if (!(dx > 0.0) || !(domain_length > dx)) throw ScatterError(ErrorKind::invalid_argument, "need 0 < dx < domain");
    if (!(packet.bandwidth > 0.0)) throw ScatterError(ErrorKind::invalid_argument, "packet bandwidth must be > 0");
    if (packet.direction != +1) throw ScatterError(ErrorKind::invalid_argument, "only right-moving packets");
    const double width = packet.spatial_width(emitter.group_velocity);
    if (width / dx < 20.0) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "packet width %.4g spans %.2f cells (< 20)", width, width / dx);
        throw ScatterError(ErrorKind::resolution_error, buf);
    }

    GridState s;
    s.dx = dx;
    s.group_velocity = emitter.group_velocity;
    s.coupling = emitter.coupling;
    s.carrier_freq = packet.center_freq;
    const auto cells = static_cast<std::size_t>(std::llround(domain_length / dx));
    s.phi_R.assign(cells, cplx{});
    s.phi_L.assign(cells, cplx{});
    for (std::size_t j = 0; j < cells; ++j) {
        const double z = (static_cast<double>(j) * dx - packet.launch_center) / width;
        s.phi_R[j] = std::exp(-0.25 * z * z);
    }
    const double p = kernels::probability_serial(s.phi_R) * dx;
    const double scale = 1.0 / std::sqrt(p);
    for (auto& v : s.phi_R) v *= scale;

    const double k_c = packet.center_freq / emitter.group_velocity;
    for (double x : site_positions) {
        EmitterSite site;
        site.cell = site_cell(x, dx, cells);
        const double phase = std::fmod(k_c * static_cast<double>(site.cell) * dx, 2.0 * std::numbers::pi);
        site.carrier_phase = std::polar(1.0, phase);
        site.static_offset = emitter.omega_a - packet.center_freq;
        s.sites.push_back(site);
    }
    return s;
}

GridState init_grid(double domain_length, double dx, const PacketSpec& packet, const TrapProtocol& protocol) {
    const double positions[] = {protocol.left_position, protocol.right_position()};
    return init_grid(domain_length, dx, protocol.emitter, packet, positions);
}

void local_coupling_update(cplx& a, cplx& b, cplx& e, double g, cplx phase, double detuning, double dt) noexcept {
    if (g == 0.0) {
        e *= std::polar(1.0, -detuning * dt);
        return;
    }
    // Only the bright combination of the two directions couples to the emitter.
    const cplx pc = std::conj(phase);
    const cplx bright = (phase * a + pc * b) / kSqrt2;
    const cplx dark = (phase * a - pc * b) / kSqrt2;
    const double G = kSqrt2 * g;
    const double half = 0.5 * detuning;
    const double lam = std::sqrt(half * half + G * G);
    const double c = std::cos(lam * dt);
    const double sn = lam > 0.0 ? std::sin(lam * dt) / lam : dt;
    const cplx global = std::polar(1.0, -half * dt);
    const cplx bright_new = global * (c * bright - I * sn * (-half * bright + G * e));
    const cplx e_new = global * (c * e - I * sn * (G * bright + half * e));
    a = pc * (bright_new + dark) / kSqrt2;
    b = phase * (bright_new - dark) / kSqrt2;
    e = e_new;
}

void step(GridState& s, std::span<const ModulationSchedule> schedules, double dt) {
    const double expected = s.time_step();
    if (std::abs(dt - expected) > 1e-12 * expected) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "dt=%.17g but exact advection needs dx/v_g=%.17g", dt, expected);
        throw ScatterError(ErrorKind::cfl_violation, buf);
    }
    if (schedules.size() != s.sites.size()) {
        throw ScatterError(ErrorKind::invalid_argument, "one modulation schedule per emitter site is required");
    }
    const auto exit = s.exec == kernels::Exec::serial ? kernels::advect_serial(s.phi_R, s.phi_L)
                                                      : kernels::advect_parallel(s.phi_R, s.phi_L, s.scratch);
    s.exit_right += std::norm(exit.right) * s.dx;
    s.exit_left += std::norm(exit.left) * s.dx;

    const double mid = s.time + 0.5 * expected;
    const double root_dx = std::sqrt(s.dx);
    const double g = s.coupling / root_dx;
    for (std::size_t i = 0; i < s.sites.size(); ++i) {
        auto& site = s.sites[i];
        const double detuning = site.static_offset + schedules[i].frequency_shift(mid);
        if (g == 0.0) {
            site.excitation *= std::polar(1.0, -detuning * expected);
            continue;
        }
        cplx a = s.phi_R[site.cell] * root_dx;
        cplx b = s.phi_L[site.cell] * root_dx;
        local_coupling_update(a, b, site.excitation, g, site.carrier_phase, detuning, expected);
        s.phi_R[site.cell] = a / root_dx;
        s.phi_L[site.cell] = b / root_dx;
    }
    ++s.steps_taken;
    s.time = static_cast<double>(s.steps_taken) * expected;
}

void step(GridState& state, const TrapProtocol& protocol, double dt) {
    const ModulationSchedule schedules[] = {protocol.left_schedule, protocol.right_schedule};
    step(state, std::span<const ModulationSchedule>(schedules, state.sites.size() < 2 ? state.sites.size() : 2), dt);
}

double norm(const GridState& s) {
    double total = (kernels::probability(s.phi_R, s.exec) + kernels::probability(s.phi_L, s.exec)) * s.dx;
    for (const auto& site : s.sites) total += std::norm(site.excitation);
    return total + s.exit_left + s.exit_right;
}

double cavity_probability(const GridState& s) {
    if (s.sites.size() < 2) return 0.0;
    const std::size_t lo = s.sites[0].cell;
    const std::size_t hi = s.sites[1].cell;
    const std::span<const cplx> right(s.phi_R.data() + lo, hi - lo);
    const std::span<const cplx> left(s.phi_L.data() + lo + 1, hi - lo);
    double total = (kernels::probability(right, s.exec) + kernels::probability(left, s.exec)) * s.dx;
    return total + std::norm(s.sites[0].excitation) + std::norm(s.sites[1].excitation);
}

TrapReport run_protocol(const TrapProtocol& protocol, kernels::Exec exec) {
    protocol.validate();
    GridState s = init_grid(protocol.domain_length, protocol.dx, protocol.packet, protocol);
    s.exec = exec;
    const double dt = s.time_step();
    const long steps = static_cast<long>(std::ceil(protocol.end_time / dt - 1e-9));
    const int every = std::max(1, protocol.sample_every);

    TrapReport rep;
    rep.series.push_back(sample(s));
    const auto& w = protocol.windows;
    const std::optional<double> t_off = protocol.left_schedule.switch_off_time;
    const std::optional<double> t_on = protocol.right_schedule.switch_on_time;
    bool have_off = false, have_storage = false, have_on = false, have_release = false;
    double cavity_on = 0.0, exit_on = 0.0;
    const double eps = 1e-9 * dt;

    for (long k = 1; k <= steps; ++k) {
        step(s, protocol, dt);
        if (k % every == 0 || k == steps) rep.series.push_back(sample(s));
        if (t_off && !have_off && s.time >= *t_off - eps) {
            rep.cavity_at_switch_off = cavity_probability(s);
            have_off = true;
        }
        if (!have_storage && s.time >= w.storage_time - eps) {
            rep.storage_efficiency = cavity_probability(s);
            have_storage = true;
        }
        if (t_on && !have_on && s.time >= *t_on - eps) {
            cavity_on = cavity_probability(s);
            exit_on = s.exit_right;
            have_on = true;
        }
        if (t_on && have_on && !have_release && s.time >= w.release_end - eps) {
            rep.release_exit = s.exit_right - exit_on;
            rep.release_fidelity = cavity_on > 0.0 ? *rep.release_exit / cavity_on : 0.0;
            have_release = true;
        }
    }
    rep.steps = steps;
    rep.leakage_rate = -log_slope(rep.series, w.leak_begin, w.leak_end);
    for (const auto& smp : rep.series) rep.max_norm_defect = std::max(rep.max_norm_defect, std::abs(1.0 - smp.norm));
    return rep;
}

double transmission_maximum_mod_energy(double mod_freq, double omega_a) {
    auto spec = *find_preset("fig3a", omega_a);
    spec.base.mod_freq = mod_freq;
    const auto ds = run_sweep(spec);
    const auto best = std::max_element(ds.rows.begin(), ds.rows.end(),
                                       [](const SpectrumRow& a, const SpectrumRow& b) { return a.T < b.T; });
    return best->axis_value;
}

TrapProtocol make_trap_protocol(const TrapPresetOptions& o) {
    TrapProtocol p;
    p.emitter = EmitterParams::in_gamma_units(0.0, 0.0, o.omega_a);
    const double v = p.emitter.group_velocity;
    const double gamma = p.emitter.gamma();
    p.packet.center_freq = o.omega_a;  // resonant with both static emitters
    p.packet.bandwidth = o.bandwidth;
    const double w = p.packet.spatial_width(v);
    p.packet.launch_center = 6.0 * w;
    p.left_position = 14.0 * w;
    p.cavity_length = 12.0 * w;
    p.domain_length = p.right_position() + 2.0 * w;
    p.dx = o.dx;

    const double fo = o.left_mod_energy ? *o.left_mod_energy : transmission_maximum_mod_energy(o.left_mod_freq, o.omega_a);
    p.left_schedule.mod_energy = fo;
    p.left_schedule.mod_freq = o.left_mod_freq;
    p.left_schedule.ramp_duration = o.ramp_duration;
    const double t_off = (p.left_position - (p.packet.launch_center - kEdgeWidths * w)) / v + 2.0 / gamma;
    if (o.switch_off) p.left_schedule.switch_off_time = t_off;

    const double rt = p.round_trip_time();
    p.windows.storage_time = t_off + o.storage_round_trips * rt;
    p.windows.leak_begin = t_off + 2.0 * rt;
    p.windows.leak_end = p.windows.storage_time;
    p.end_time = p.windows.storage_time + 10.0 * o.dx;
    if (o.release) {
        p.right_schedule.mod_energy = fo;
        p.right_schedule.mod_freq = o.left_mod_freq;
        p.right_schedule.ramp_duration = o.ramp_duration;
        p.right_schedule.switch_on_time = p.windows.storage_time;
        p.windows.release_end = p.windows.storage_time + 2.0 * rt;
        p.end_time = p.windows.release_end + 10.0 * o.dx;
    }
    return p;
}

PacketScatteringResult scatter_packet(const EmitterParams& emitter, double detuning, double bandwidth, double dx,
                                      kernels::Exec exec) {
    emitter.validate();
    PacketSpec packet;
    packet.center_freq = emitter.omega_a + detuning;
    packet.bandwidth = bandwidth;
    const double v = emitter.group_velocity;
    const double w = packet.spatial_width(v);
    packet.launch_center = 6.0 * w + 5.0 * dx;
    const double site = packet.launch_center + 8.0 * w + 5.0;
    const double domain = site + 6.0 * w + 20.0;
    const double positions[] = {site};
    GridState s = init_grid(domain, dx, emitter, packet, positions);
    s.exec = exec;

    ModulationSchedule sched;
    sched.mod_energy = emitter.mod_energy();
    sched.mod_freq = emitter.mod_freq;
    const ModulationSchedule schedules[] = {sched};
    const double dt = s.time_step();
    const double gamma = emitter.gamma();
    const double settle = gamma > 0.0 ? 40.0 / gamma : 0.0;
    const long steps = static_cast<long>(std::ceil(((site - packet.launch_center + 6.0 * w) / v + settle) / dt));

    PacketScatteringResult out;
    for (long k = 0; k < steps; ++k) {
        step(s, schedules, dt);
        if (k % 256 == 0) out.max_norm_defect = std::max(out.max_norm_defect, std::abs(1.0 - norm(s)));
    }
    out.max_norm_defect = std::max(out.max_norm_defect, std::abs(1.0 - norm(s)));
    const std::size_t c = s.sites.front().cell;
    const std::span<const cplx> ahead(s.phi_R.data() + c, s.cells() - c);
    const std::span<const cplx> behind(s.phi_L.data(), c + 1);
    out.transmitted = s.exit_right + kernels::probability(ahead, exec) * dx;
    out.reflected = s.exit_left + kernels::probability(behind, exec) * dx;
    out.excitation = std::norm(s.sites.front().excitation);
    out.steps = steps;
    return out;
}

}  // namespace scatter
