#include "scatter/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "scatter/bessel.hpp"
#include "scatter/error.hpp"

namespace scatter {
namespace {

constexpr cplx I{0.0, 1.0};

// S_n = sum_l J_l J_{n+l} / (Delta - l omega + i gamma), n in [-N, N].
std::vector<cplx> bessel_sums(const EmitterParams& p, double detuning, int N, int L) {
    const double u = p.mod_energy() / p.mod_freq;
    const double g = p.gamma();
    std::vector<cplx> sums(2 * static_cast<std::size_t>(N) + 1);
    if (g == 0.0) return sums;  // decoupled emitter
    const BesselTable J(N + L, u);
    std::vector<cplx> weight(2 * static_cast<std::size_t>(L) + 1);
    for (int l = -L; l <= L; ++l) {
        weight[static_cast<std::size_t>(l + L)] = J(l) / cplx(detuning - l * p.mod_freq, g);
    }
    for (int n = -N; n <= N; ++n) {
        cplx acc{};
        for (int l = -L; l <= L; ++l) acc += weight[static_cast<std::size_t>(l + L)] * J(n + l);
        sums[static_cast<std::size_t>(n + N)] = acc;
    }
    return sums;
}

SidebandEntry make_entry(const EmitterParams& p, double detuning, int n, cplx r) {
    SidebandEntry e;
    e.n = n;
    e.omega_n = p.omega_a + detuning + n * p.mod_freq;
    e.q_n = e.omega_n / p.group_velocity;
    e.r = r;
    e.t = n == 0 ? r + 1.0 : r;
    e.below_cutoff = e.omega_n <= 0.0;
    return e;
}

void finish(SidebandSet& set) {
    const auto pr = total_probabilities(set);
    set.total_T = pr.T;
    set.total_R = pr.R;
    set.unitarity_defect = pr.defect;
}

SidebandSet compute(const EmitterParams& p, double detuning, const TruncationSpec& tr) {
    SidebandSet set;
    set.truncation_used = tr;
    const int N = tr.sideband_max;
    const auto sums = bessel_sums(p, detuning, N, tr.sum_max);
    const cplx prefactor = -I * p.gamma();
    set.entries.reserve(sums.size());
    for (int n = -N; n <= N; ++n) {
        set.entries.push_back(make_entry(p, detuning, n, prefactor * sums[static_cast<std::size_t>(n + N)]));
    }
    finish(set);
    return set;
}

void require_modulated(const EmitterParams& p) {
    p.validate();
    if (p.mod_freq == 0.0) {
        throw ScatterError(ErrorKind::static_limit, "modulation frequency is zero; use static_limit_amplitudes");
    }
}

[[noreturn]] void truncation_failure(double defect, const TruncationSpec& tr) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "unitarity defect %.3e exceeds tolerance %.3e at N=%d, L=%d", defect,
                  tr.unitarity_tol, tr.sideband_max, tr.sum_max);
    throw TruncationFailure(defect, buf);
}

}  // namespace

double modulation_index(const EmitterParams& params) {
    params.validate();
    if (params.mod_freq == 0.0) {
        throw ScatterError(ErrorKind::static_limit, "modulation index undefined for omega = 0");
    }
    return params.mod_energy() / params.mod_freq;
}

std::vector<cplx> reflection_amplitudes(const EmitterParams& params, const ScatteringQuery& query) {
    require_modulated(params);
    query.truncation.validate();
    auto sums = bessel_sums(params, query.detuning, query.truncation.sideband_max, query.truncation.sum_max);
    const cplx prefactor = -I * params.gamma();
    for (auto& s : sums) s *= prefactor;
    return sums;
}

std::vector<cplx> transmission_amplitudes(const EmitterParams& params, const ScatteringQuery& query) {
    auto t = reflection_amplitudes(params, query);
    t[static_cast<std::size_t>(query.truncation.sideband_max)] += 1.0;
    return t;
}

SidebandSet scatter_sidebands(const EmitterParams& params, const ScatteringQuery& query) {
    params.validate();
    query.truncation.validate();
    if (params.mod_freq == 0.0) {
        auto set = static_limit_amplitudes(params, query.detuning);
        set.truncation_used.unitarity_tol = query.truncation.unitarity_tol;
        return set;
    }
    auto set = compute(params, query.detuning, query.truncation);
    if (!(set.unitarity_defect <= query.truncation.unitarity_tol)) {
        truncation_failure(set.unitarity_defect, query.truncation);
    }
    return set;
}

ExcitationSpectrum excitation_coefficients(const EmitterParams& params, const ScatteringQuery& query) {
    params.validate();
    query.truncation.validate();
    const double omega_0 = params.omega_a + query.detuning;
    const double V = params.coupling;
    if (params.is_static()) {
        const double delta_eff = params.mod_freq == 0.0 ? query.detuning - params.mod_energy() : query.detuning;
        ExcitationSpectrum spec(omega_0, params.mod_freq, 0);
        if (V != 0.0) spec[0] = V / cplx(delta_eff, params.gamma());
        return spec;
    }
    const int N = query.truncation.sideband_max;
    const auto sums = bessel_sums(params, query.detuning, N, query.truncation.sum_max);
    ExcitationSpectrum spec(omega_0, params.mod_freq, N);
    for (int n = -N; n <= N; ++n) spec[n] = V * sums[static_cast<std::size_t>(n + N)];
    return spec;
}

Probabilities total_probabilities(const SidebandSet& set) noexcept {
    Probabilities p;
    for (const auto& e : set.entries) {
        p.T += std::norm(e.t);
        p.R += std::norm(e.r);
    }
    p.defect = std::abs(1.0 - (p.T + p.R));
    return p;
}

SidebandSet static_limit_amplitudes(const EmitterParams& params, double detuning) {
    params.validate();
    if (!params.is_static()) {
        throw ScatterError(ErrorKind::not_static, "static formula requires f * omega == 0");
    }
    // omega == 0 freezes the emitter at Omega (1 + f); f == 0 leaves it at Omega.
    const double delta_eff = params.mod_freq == 0.0 ? detuning - params.mod_energy() : detuning;
    const cplx denom(delta_eff, params.gamma());
    SidebandSet set;
    const bool decoupled = params.gamma() == 0.0;
    SidebandEntry e = make_entry(params, detuning, 0, decoupled ? cplx{} : -I * params.gamma() / denom);
    e.t = decoupled ? cplx(1.0, 0.0) : delta_eff / denom;
    set.entries.push_back(e);
    set.truncation_used = TruncationSpec{0, 0, 1e-12};
    finish(set);
    return set;
}

TruncationSpec initial_truncation(double modulation_index, double tol) {
    const double u = std::abs(modulation_index);
    const int N = static_cast<int>(std::ceil(u + 8.0 * std::cbrt(u) + 12.0));
    return TruncationSpec{N, N + 8, tol};
}

SidebandSet evaluate_sidebands(const EmitterParams& params, double detuning, double tol) {
    params.validate();
    if (!(tol > 0.0)) throw ScatterError(ErrorKind::invalid_argument, "tolerance must be positive");
    if (params.mod_freq == 0.0) {
        auto set = static_limit_amplitudes(params, detuning);
        set.truncation_used.unitarity_tol = tol;
        return set;
    }
    TruncationSpec tr = initial_truncation(modulation_index(params), tol);
    tr.sideband_max = std::min(tr.sideband_max, kMaxSidebandOrder);
    tr.sum_max = tr.sideband_max + 8;
    for (;;) {
        auto set = compute(params, detuning, tr);
        if (set.unitarity_defect < tol) return set;
        if (tr.sideband_max >= kMaxSidebandOrder) truncation_failure(set.unitarity_defect, tr);
        tr.sideband_max = std::min(2 * tr.sideband_max, kMaxSidebandOrder);
        tr.sum_max = tr.sideband_max + 8;
    }
}

TruncationSpec auto_truncation(const EmitterParams& params, double detuning, double tol) {
    return evaluate_sidebands(params, detuning, tol).truncation_used;
}

}  // namespace scatter
