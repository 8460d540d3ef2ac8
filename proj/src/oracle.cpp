#include "scatter/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "scatter/amplitudes.hpp"
#include "scatter/harmonic_balance.hpp"
#include "scatter/time_domain.hpp"

namespace scatter {
namespace {

constexpr cplx I{0.0, 1.0};

int sideband_window(const SidebandSet& s) { return s.entries.empty() ? 0 : -s.entries.front().n; }

}  // namespace

SidebandSet amplitudes_from_excitation(const ExcitationSpectrum& spectrum, const EmitterParams& params) {
    SidebandSet set;
    const cplx scale = params.coupling / (I * params.group_velocity);
    set.entries.reserve(spectrum.coeffs.size());
    for (int n = -spectrum.order; n <= spectrum.order; ++n) {
        SidebandEntry e;
        e.n = n;
        e.omega_n = spectrum.omega_0 + n * spectrum.omega;
        e.q_n = e.omega_n / params.group_velocity;
        e.r = scale * spectrum.at(n);
        e.t = n == 0 ? e.r + 1.0 : e.r;
        e.below_cutoff = e.omega_n <= 0.0;
        set.entries.push_back(e);
    }
    set.truncation_used = TruncationSpec{spectrum.order, spectrum.order, 0.0};
    const auto pr = total_probabilities(set);
    set.total_T = pr.T;
    set.total_R = pr.R;
    set.unitarity_defect = pr.defect;
    return set;
}

double max_reflection_difference(const SidebandSet& a, const SidebandSet& b) noexcept {
    const int N = std::max(sideband_window(a), sideband_window(b));
    double worst = 0.0;
    for (int n = -N; n <= N; ++n) worst = std::max(worst, std::abs(a.r(n) - b.r(n)));
    return worst;
}

ValidationReport cross_validate(const EmitterParams& params, double detuning, const CrossValidateOptions& opt) {
    ValidationReport rep;
    rep.params = params;
    rep.detuning = detuning;
    rep.tol_hb = opt.tol_series_hb;
    rep.tol_td = opt.tol_td;

    const auto series = evaluate_sidebands(params, detuning, opt.unitarity_tol);
    rep.defect_series = series.unitarity_defect;
    const int N = sideband_window(series);

    bool ok = true;
    if (!(params.mod_freq == 0.0 && params.mod_amp != 0.0)) {
        const int order = std::max(N, 1) + 16;
        const auto hb_spec = harmonic_balance_solve(params, detuning, order);
        const auto hb_set = amplitudes_from_excitation(hb_spec, params);
        rep.hb_residual = harmonic_balance_residual(build_harmonic_balance(params, detuning, order), hb_spec);
        rep.series_vs_hb = max_reflection_difference(series, hb_set);
        rep.defect_hb = hb_set.unitarity_defect;
        rep.hb_run = true;
        ok = ok && rep.series_vs_hb < opt.tol_series_hb;
    }
    if (opt.time_domain) {
        const auto trace = time_domain_excitation(params, detuning);
        const int order = params.mod_freq > 0.0 ? std::max(N, 1) : 0;
        const auto td_set =
            amplitudes_from_excitation(fourier_extract(trace, trace.omega_0, params.mod_freq, order), params);
        rep.series_vs_td = max_reflection_difference(series, td_set);
        rep.defect_td = td_set.unitarity_defect;
        rep.td_periodicity = periodicity_defect(trace);
        rep.time_domain_run = true;
        ok = ok && rep.series_vs_td < opt.tol_td;
    }
    rep.pass = ok;
    return rep;
}

}  // namespace scatter
