#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace scatter {

using cplx = std::complex<double>;

/// Physical model of a single frequency-modulated emitter side-coupled to a
/// waveguide. Transition frequency is omega_a * (1 + mod_amp * cos(mod_freq t)).
struct EmitterParams {
    double omega_a = 1000.0;
    double mod_amp = 0.0;
    double mod_freq = 0.0;
    double coupling = 1.0;
    double group_velocity = 1.0;

    /// Effective coupling V^2 / v_g; the linewidth unit of every spectrum.
    double gamma() const noexcept { return coupling * coupling / group_velocity; }

    /// Modulation depth in frequency units, f * Omega.
    double mod_energy() const noexcept { return mod_amp * omega_a; }

    bool is_static() const noexcept { return mod_amp == 0.0 || mod_freq == 0.0; }

    /// Parameters with V = v_g = 1, so every frequency below is in units of gamma.
    static EmitterParams in_gamma_units(double mod_energy, double mod_freq, double omega_a = 1000.0);

    /// Throws ScatterError(invalid_argument) for non-finite or out-of-domain values.
    void validate() const;

    /// Soft validity checks of the model (weak modulation, weak coupling).
    std::vector<std::string> warnings() const;
};

struct TruncationSpec {
    int sideband_max = 0;
    int sum_max = 0;
    double unitarity_tol = 1e-12;

    void validate() const;
};

struct ScatteringQuery {
    double detuning = 0.0;
    TruncationSpec truncation;
};

struct SidebandEntry {
    int n = 0;
    double omega_n = 0.0;
    double q_n = 0.0;
    cplx r{};
    cplx t{};
    // omega_n <= 0: kept for probability bookkeeping, outside the linear-dispersion regime.
    bool below_cutoff = false;
};

struct SidebandSet {
    std::vector<SidebandEntry> entries;
    double total_T = 0.0;
    double total_R = 0.0;
    double unitarity_defect = 0.0;
    TruncationSpec truncation_used;

    const SidebandEntry* find(int n) const noexcept;
    cplx r(int n) const noexcept;
    cplx t(int n) const noexcept;
    /// |t_n|^2, zero outside the stored window.
    double transmitted(int n) const noexcept;
    bool any_below_cutoff() const noexcept;
};

/// Fourier coefficients of e(t) = sum_n e_n exp(-i omega_n t), omega_n = omega_0 + n*omega.
struct ExcitationSpectrum {
    double omega_0 = 0.0;
    double omega = 0.0;
    int order = 0;
    std::vector<cplx> coeffs;  // index n + order

    ExcitationSpectrum() = default;
    ExcitationSpectrum(double omega_0_, double omega_, int order_)
        : omega_0(omega_0_), omega(omega_), order(order_), coeffs(2 * static_cast<std::size_t>(order_) + 1) {}

    cplx at(int n) const noexcept {
        return (n < -order || n > order) ? cplx{} : coeffs[static_cast<std::size_t>(n + order)];
    }
    cplx& operator[](int n) { return coeffs[static_cast<std::size_t>(n + order)]; }
};

struct Probabilities {
    double T = 0.0;
    double R = 0.0;
    double defect = 0.0;
};

}  // namespace scatter
