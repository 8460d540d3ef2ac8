#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scatter/kernels.hpp"
#include "scatter/params.hpp"

namespace scatter {

enum class SweepAxis { detuning, mod_energy, mod_freq };
enum class SweepMethod { series, harmonic_balance, both };

std::string_view to_string(SweepAxis axis) noexcept;
std::string_view to_string(SweepMethod method) noexcept;
std::optional<SweepAxis> parse_axis(std::string_view s) noexcept;
std::optional<SweepMethod> parse_method(std::string_view s) noexcept;

/// Inclusive range; point k is start + (stop - start) * k / (points - 1).
struct SweepRange {
    double start = 0.0;
    double stop = 1.0;
    int points = 2;

    double at(int k) const noexcept;
};

struct Observables {
    bool T = true;
    bool R = true;
    bool defect = true;
    std::vector<int> sidebands;  // T_n = |t_n|^2 columns
};

struct SweepSpec {
    std::string name;
    EmitterParams base;  // value on the swept axis is overwritten per point
    double detuning = 0.0;
    SweepAxis axis = SweepAxis::detuning;
    SweepRange range;
    Observables observables;
    SweepMethod method = SweepMethod::series;
    double unitarity_tol = 1e-10;
    // harmonic-balance discrepancy above which a row is flagged when method == both
    double discrepancy_tol = 1e-8;

    void validate() const;
    /// Parameters and detuning for sweep point k.
    std::pair<EmitterParams, double> point(int k) const;
};

struct SpectrumRow {
    double axis_value = 0.0;
    double T = 0.0;
    double R = 0.0;
    double defect = 0.0;
    std::vector<double> T_n;       // aligned with observables.sidebands
    std::vector<cplx> r_n;         // aligned with observables.sidebands
    double residual = 0.0;         // T minus the listed T_n
    double discrepancy = 0.0;      // |T_series - T_hb|; NaN when not computed
    int sideband_max = 0;
    int sum_max = 0;
    bool below_cutoff = false;     // some sideband has omega_n <= 0
    bool flagged = false;
    std::string flag_reason;
};

struct SpectrumDataset {
    SweepSpec spec;
    std::vector<SpectrumRow> rows;

    bool any_flagged() const noexcept;
    double max_defect() const noexcept;
    double max_discrepancy() const noexcept;
};

/// Evaluates every point (in parallel when exec == parallel); row order follows the axis index.
SpectrumDataset run_sweep(const SweepSpec& spec, kernels::Exec exec = kernels::Exec::parallel);

struct SidebandProbabilities {
    std::vector<int> n;
    std::vector<double> T_n;
    double residual = 0.0;  // sum of |t_m|^2 over m not in n
    double total_T = 0.0;
};

SidebandProbabilities sideband_resolved(const EmitterParams& params, double detuning, const std::vector<int>& n_list,
                                        double tol = 1e-12);

/// fig2_static, fig2_trivial_amp, fig3a, fig3b, fig4a, fig4b.
std::vector<SweepSpec> figure_presets(double omega_a = 1000.0);
std::optional<SweepSpec> find_preset(std::string_view name, double omega_a = 1000.0);

}  // namespace scatter
