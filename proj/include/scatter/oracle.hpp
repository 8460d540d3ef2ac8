#pragma once

#include <optional>
#include <string>

#include "scatter/params.hpp"

namespace scatter {

/// r_n = V e_n / (i v_g), t_n = r_n + delta_{n0}; totals as for the series.
SidebandSet amplitudes_from_excitation(const ExcitationSpectrum& spectrum, const EmitterParams& params);

struct ValidationReport {
    EmitterParams params;
    double detuning = 0.0;

    double series_vs_hb = 0.0;  // max_n |r_n^series - r_n^hb|
    double series_vs_td = 0.0;  // max_n |r_n^series - r_n^td|
    double defect_series = 0.0;
    double defect_hb = 0.0;
    double defect_td = 0.0;
    double hb_residual = 0.0;
    double td_periodicity = 0.0;
    bool time_domain_run = false;
    bool hb_run = false;

    double tol_hb = 0.0;
    double tol_td = 0.0;
    bool pass = false;
};

struct CrossValidateOptions {
    double tol_series_hb = 1e-8;
    double tol_td = 1e-3;
    double unitarity_tol = 1e-12;
    bool time_domain = true;
};

/// Series vs harmonic balance vs time-domain extraction at one parameter point.
/// Harmonic balance is skipped (hb_run = false) for a frozen emitter (omega = 0, f != 0).
ValidationReport cross_validate(const EmitterParams& params, double detuning, const CrossValidateOptions& options = {});

/// max_n |a.r(n) - b.r(n)| over the union of both windows.
double max_reflection_difference(const SidebandSet& a, const SidebandSet& b) noexcept;

}  // namespace scatter
