#include "scatter/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "scatter/error.hpp"

namespace scatter {

EmitterParams EmitterParams::in_gamma_units(double mod_energy, double mod_freq, double omega_a) {
    EmitterParams p;
    p.omega_a = omega_a;
    p.mod_amp = mod_energy / omega_a;
    p.mod_freq = mod_freq;
    p.coupling = 1.0;
    p.group_velocity = 1.0;
    return p;
}

void EmitterParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ScatterError(ErrorKind::invalid_argument, what);
    };
    require(std::isfinite(omega_a) && omega_a > 0.0, "omega_a must be finite and positive");
    require(std::isfinite(group_velocity) && group_velocity > 0.0, "group_velocity must be finite and positive");
    require(std::isfinite(coupling) && coupling >= 0.0, "coupling must be finite and non-negative");
    require(std::isfinite(mod_amp) && mod_amp >= 0.0, "mod_amp must be finite and non-negative");
    require(std::isfinite(mod_freq) && mod_freq >= 0.0, "mod_freq must be finite and non-negative");
    require(std::isfinite(gamma()), "effective coupling is not finite");
}

std::vector<std::string> EmitterParams::warnings() const {
    std::vector<std::string> out;
    char buf[160];
    if (mod_amp > 0.1) {
        std::snprintf(buf, sizeof buf, "modulation amplitude f=%.3g is not small; coupling may not stay fixed", mod_amp);
        out.emplace_back(buf);
    }
    if (gamma() > 0.1 * omega_a) {
        std::snprintf(buf, sizeof buf, "gamma/Omega=%.3g is not small; rotating-wave treatment is doubtful",
                      gamma() / omega_a);
        out.emplace_back(buf);
    }
    return out;
}

void TruncationSpec::validate() const {
    if (sideband_max < 0) throw ScatterError(ErrorKind::invalid_argument, "sideband_max must be >= 0");
    if (sum_max < sideband_max) throw ScatterError(ErrorKind::invalid_argument, "sum_max must be >= sideband_max");
    if (!(unitarity_tol > 0.0) || !std::isfinite(unitarity_tol))
        throw ScatterError(ErrorKind::invalid_argument, "unitarity_tol must be positive");
}

const SidebandEntry* SidebandSet::find(int n) const noexcept {
    // entries are contiguous in n
    if (entries.empty()) return nullptr;
    const int first = entries.front().n;
    const int idx = n - first;
    if (idx < 0 || idx >= static_cast<int>(entries.size())) return nullptr;
    return &entries[static_cast<std::size_t>(idx)];
}

cplx SidebandSet::r(int n) const noexcept {
    const auto* e = find(n);
    return e ? e->r : cplx{};
}

cplx SidebandSet::t(int n) const noexcept {
    const auto* e = find(n);
    return e ? e->t : (n == 0 ? cplx{1.0, 0.0} : cplx{});
}

double SidebandSet::transmitted(int n) const noexcept {
    const auto* e = find(n);
    return e ? std::norm(e->t) : 0.0;
}

bool SidebandSet::any_below_cutoff() const noexcept {
    return std::any_of(entries.begin(), entries.end(), [](const SidebandEntry& e) { return e.below_cutoff; });
}

}  // namespace scatter
