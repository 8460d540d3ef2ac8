#include "scatter/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scatter/amplitudes.hpp"
#include "scatter/error.hpp"
#include "scatter/harmonic_balance.hpp"
#include "scatter/oracle.hpp"

namespace scatter {

std::string_view to_string(SweepAxis axis) noexcept {
    switch (axis) {
        case SweepAxis::detuning: return "detuning";
        case SweepAxis::mod_energy: return "mod_amp_energy";
        case SweepAxis::mod_freq: return "mod_freq";
    }
    return "?";
}

std::string_view to_string(SweepMethod method) noexcept {
    switch (method) {
        case SweepMethod::series: return "series";
        case SweepMethod::harmonic_balance: return "harmonic_balance";
        case SweepMethod::both: return "both";
    }
    return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view s) noexcept {
    if (s == "detuning" || s == "delta") return SweepAxis::detuning;
    if (s == "mod_amp_energy" || s == "mod_energy" || s == "mod_amp" || s == "mod-amp") return SweepAxis::mod_energy;
    if (s == "mod_freq" || s == "mod-freq") return SweepAxis::mod_freq;
    return std::nullopt;
}

std::optional<SweepMethod> parse_method(std::string_view s) noexcept {
    if (s == "series") return SweepMethod::series;
    if (s == "harmonic_balance" || s == "hb") return SweepMethod::harmonic_balance;
    if (s == "both") return SweepMethod::both;
    return std::nullopt;
}

double SweepRange::at(int k) const noexcept {
    if (points <= 1) return start;
    if (k == points - 1) return stop;
    return start + (stop - start) * k / (points - 1);
}

void SweepSpec::validate() const {
    base.validate();
    if (range.points < 2) throw ScatterError(ErrorKind::invalid_argument, "a sweep needs at least 2 points");
    if (!std::isfinite(range.start) || !std::isfinite(range.stop) || !std::isfinite(detuning)) {
        throw ScatterError(ErrorKind::invalid_argument, "sweep range must be finite");
    }
    if (axis != SweepAxis::detuning && std::min(range.start, range.stop) < 0.0) {
        throw ScatterError(ErrorKind::invalid_argument, "modulation axes must be non-negative");
    }
    if (!(unitarity_tol > 0.0)) throw ScatterError(ErrorKind::invalid_argument, "unitarity_tol must be positive");
}

std::pair<EmitterParams, double> SweepSpec::point(int k) const {
    EmitterParams p = base;
    double det = detuning;
    const double x = range.at(k);
    switch (axis) {
        case SweepAxis::detuning: det = x; break;
        case SweepAxis::mod_energy: p.mod_amp = x / p.omega_a; break;
        case SweepAxis::mod_freq: p.mod_freq = x; break;
    }
    return {p, det};
}

bool SpectrumDataset::any_flagged() const noexcept {
    return std::any_of(rows.begin(), rows.end(), [](const SpectrumRow& r) { return r.flagged; });
}

double SpectrumDataset::max_defect() const noexcept {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.defect);
    return m;
}

double SpectrumDataset::max_discrepancy() const noexcept {
    double m = 0.0;
    for (const auto& r : rows) {
        if (std::isfinite(r.discrepancy)) m = std::max(m, r.discrepancy);
    }
    return m;
}

namespace {

SidebandSet harmonic_balance_set(const EmitterParams& p, double det, double tol) {
    if (p.mod_freq == 0.0) return static_limit_amplitudes(p, det);
    const auto start = initial_truncation(modulation_index(p), tol);
    const int order = std::min(start.sideband_max, kMaxSidebandOrder) + 16;
    return amplitudes_from_excitation(harmonic_balance_solve(p, det, order), p);
}

void fill_observables(SpectrumRow& row, const SidebandSet& set, const Observables& obs) {
    row.T = set.total_T;
    row.R = set.total_R;
    row.defect = set.unitarity_defect;
    row.sideband_max = set.truncation_used.sideband_max;
    row.sum_max = set.truncation_used.sum_max;
    double listed = 0.0;
    row.T_n.clear();
    row.r_n.clear();
    for (int n : obs.sidebands) {
        row.T_n.push_back(set.transmitted(n));
        row.r_n.push_back(set.r(n));
        listed += set.transmitted(n);
    }
    row.residual = set.total_T - listed;
    row.below_cutoff = set.any_below_cutoff();
}

SpectrumRow evaluate_row(const SweepSpec& spec, int k) {
    SpectrumRow row;
    row.axis_value = spec.range.at(k);
    row.discrepancy = std::numeric_limits<double>::quiet_NaN();
    const auto [p, det] = spec.point(k);
    try {
        if (spec.method == SweepMethod::harmonic_balance) {
            fill_observables(row, harmonic_balance_set(p, det, spec.unitarity_tol), spec.observables);
        } else {
            const auto set = evaluate_sidebands(p, det, spec.unitarity_tol);
            fill_observables(row, set, spec.observables);
            if (spec.method == SweepMethod::both && !(p.mod_freq == 0.0 && p.mod_amp != 0.0)) {
                row.discrepancy = std::abs(set.total_T - harmonic_balance_set(p, det, spec.unitarity_tol).total_T);
                if (!(row.discrepancy < spec.discrepancy_tol)) {
                    row.flagged = true;
                    row.flag_reason = "series and harmonic balance disagree";
                }
            }
        }
        if (!(row.defect < spec.unitarity_tol)) {
            row.flagged = true;
            row.flag_reason = "unitarity defect above tolerance";
        }
    } catch (const TruncationFailure& e) {
        row.flagged = true;
        row.defect = e.achieved_defect();
        row.flag_reason = "truncation-failure";
    }
    return row;
}

SweepSpec preset(std::string name, double omega_a, double mod_energy, double mod_freq, SweepAxis axis,
                 SweepRange range, std::vector<int> sidebands) {
    SweepSpec s;
    s.name = std::move(name);
    s.base = EmitterParams::in_gamma_units(mod_energy, mod_freq, omega_a);
    s.detuning = 0.0;
    s.axis = axis;
    s.range = range;
    s.observables.sidebands = std::move(sidebands);
    return s;
}

}  // namespace

SpectrumDataset run_sweep(const SweepSpec& spec, kernels::Exec exec) {
    spec.validate();
    SpectrumDataset ds;
    ds.spec = spec;
    ds.rows.resize(static_cast<std::size_t>(spec.range.points));
    kernels::for_each_index(ds.rows.size(), exec,
                            [&](std::size_t k) { ds.rows[k] = evaluate_row(spec, static_cast<int>(k)); });
    return ds;
}

SidebandProbabilities sideband_resolved(const EmitterParams& params, double detuning, const std::vector<int>& n_list,
                                        double tol) {
    const auto set = evaluate_sidebands(params, detuning, tol);
    SidebandProbabilities out;
    out.n = n_list;
    out.total_T = set.total_T;
    double listed = 0.0;
    for (int n : n_list) {
        out.T_n.push_back(set.transmitted(n));
        listed += set.transmitted(n);
    }
    out.residual = set.total_T - listed;
    return out;
}

std::vector<SweepSpec> figure_presets(double omega_a) {
    const SweepRange detuning_range{-10.0, 10.0, 401};
    const SweepRange amp_range{0.0, 10.0, 401};
    const SweepRange freq_range{0.03, 12.0, 400};
    return {
        preset("fig2_static", omega_a, 5.0, 0.0, SweepAxis::detuning, detuning_range, {}),
        preset("fig2_trivial_amp", omega_a, 0.0, 2.0, SweepAxis::detuning, detuning_range, {}),
        preset("fig3a", omega_a, 0.0, 2.0, SweepAxis::mod_energy, amp_range, {}),
        preset("fig3b", omega_a, 5.0, 0.0, SweepAxis::mod_freq, freq_range, {}),
        preset("fig4a", omega_a, 5.0, 0.0, SweepAxis::mod_freq, freq_range, {0, 1, 2}),
        preset("fig4b", omega_a, 0.0, 2.0, SweepAxis::mod_energy, amp_range, {0, 1, 2}),
    };
}

std::optional<SweepSpec> find_preset(std::string_view name, double omega_a) {
    for (auto& s : figure_presets(omega_a)) {
        if (s.name == name) return s;
    }
    return std::nullopt;
}

}  // namespace scatter
