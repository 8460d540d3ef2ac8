// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scatter/amplitudes.hpp"
#include "scatter/cavity.hpp"
#include "scatter/io.hpp"
#include "scatter/kernels.hpp"
#include "scatter/oracle.hpp"
#include "scatter/sweep.hpp"

using namespace scatter;

namespace {

// Values frozen from the first validated run.
constexpr double kCrossoverFreq = 5.713248049797675;        // T_1 = T_0 at fO = 5, Delta = 0
constexpr double kTransmissionAt8 = 0.17877338079118332;    // T at omega = 8, fO = 5
constexpr double kFrozenRegressionTol = 1e-10;
constexpr double kGoldenTol = 1e-10;
constexpr double kStorage[3] = {0.76593215392417635, 0.8171359172183742, 0.83180345585020687};  // bandwidths 1/10, 1/20, 1/40
constexpr double kStorageTol = 1e-9;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::check(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    notes.push_back(std::string(ok ? "ok: " : "FAILED: ") + buf);
    pass = pass && ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

bool same_field(const std::string& a, const std::string& b, double tol) {
    if (a == b) return true;
    char* ea = nullptr;
    char* eb = nullptr;
    const double x = std::strtod(a.c_str(), &ea);
    const double y = std::strtod(b.c_str(), &eb);
    if (ea == a.c_str() || *ea || eb == b.c_str() || *eb) return false;
    return std::abs(x - y) <= tol;
}

// Same layout line by line; numeric fields within tol.
std::string golden_mismatch(const std::string& produced, const std::string& golden, double tol) {
    const auto pl = split(produced, '\n');
    const auto gl = split(golden, '\n');
    if (pl.size() != gl.size()) return "line count " + std::to_string(pl.size()) + " vs " + std::to_string(gl.size());
    for (std::size_t i = 0; i < pl.size(); ++i) {
        const char sep = (!pl[i].empty() && pl[i][0] == '#') ? '=' : ',';
        const auto pf = split(pl[i], sep);
        const auto gf = split(gl[i], sep);
        if (pf.size() != gf.size()) return "field count differs on line " + std::to_string(i + 1);
        for (std::size_t j = 0; j < pf.size(); ++j) {
            if (!same_field(pf[j], gf[j], tol)) return "line " + std::to_string(i + 1) + ": " + pf[j] + " vs " + gf[j];
        }
    }
    return {};
}

std::string golden_check(const char* preset) {
    const auto ds = run_sweep(*find_preset(preset));
    auto table = io::spectrum_table(ds);
    table.meta.insert(table.meta.begin() + 1, {"units", "gamma"});
    std::ostringstream os;
    io::write_csv(os, table, 12);
    const auto path = std::filesystem::path(SCATTER_GOLDEN_DIR) / (std::string(preset) + ".csv");
    if (!std::filesystem::exists(path)) return "missing " + path.string();
    return golden_mismatch(os.str(), slurp(path), kGoldenTol);
}

double total_T(double fo, double w, double d = 0.0) {
    return evaluate_sidebands(EmitterParams::in_gamma_units(fo, w), d).total_T;
}

double sideband_T(int n, double fo, double w) {
    return evaluate_sidebands(EmitterParams::in_gamma_units(fo, w), 0.0).transmitted(n);
}

double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

Outcome ac1_unitarity() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    const double cases[5][2] = {{0, 1}, {2, 2}, {5, 2}, {5, 8}, {8, 2}};
    for (const auto& c : cases) {
        SweepSpec spec;
        spec.base = EmitterParams::in_gamma_units(c[0], c[1]);
        spec.range = {-10.0, 10.0, 81};
        spec.unitarity_tol = 1e-12;
        const auto ds = run_sweep(spec, kernels::Exec::serial);
        worst = std::max(worst, ds.max_defect());
        o.check(!ds.any_flagged(), "no flagged rows at (fO, w) = (%g, %g)", c[0], c[1]);
    }
    const double t = seconds_since(t0);
    o.check(worst < 1e-9, "max |1 - (T + R)| = %.3e over 405 points (< 1e-9)", worst);
    o.check(t < 5.0, "single-threaded runtime %.3f s (< 5 s)", t);
    return o;
}

Outcome ac2_static_limits() {
    Outcome o;
    double worst = 0.0;
    for (int k = 0; k <= 400; ++k) {
        const double d = -10.0 + 0.05 * k;
        const auto s = evaluate_sidebands(EmitterParams::in_gamma_units(0.0, 2.0), d);
        worst = std::max(worst, std::abs(s.r(0) - cplx(0.0, -1.0) / cplx(d, 1.0)));
    }
    o.check(worst < 1e-12, "f = 0: max |r_0 - (-i gamma)/(Delta + i gamma)| = %.3e (< 1e-12)", worst);
    const double t5 = total_T(5.0, 0.0, 5.0);
    const double t0 = total_T(5.0, 0.0, 0.0);
    o.check(t5 == 0.0, "omega = 0, fO = 5: T(Delta = 5) = %.3e (exactly 0)", t5);
    o.check(std::abs(t0 - 25.0 / 26.0) < 1e-15, "omega = 0, fO = 5: T(Delta = 0) - 25/26 = %.3e", t0 - 25.0 / 26.0);
    return o;
}

Outcome ac3_oracles() {
    Outcome o;
    const double cases[4][2] = {{5, 2}, {5, 8}, {2, 2}, {8, 2}};
    double hb = 0.0, td = 0.0, td_seconds = 0.0;
    int failed = 0;
    for (const auto& c : cases) {
        const auto p = EmitterParams::in_gamma_units(c[0], c[1]);
        for (int k = 0; k <= 20; ++k) {
            const double d = -10.0 + k;
            CrossValidateOptions no_td;
            no_td.time_domain = false;
            const auto a = cross_validate(p, d, no_td);
            const auto t0 = std::chrono::steady_clock::now();
            const auto b = cross_validate(p, d);
            td_seconds += seconds_since(t0);
            hb = std::max(hb, a.series_vs_hb);
            td = std::max(td, b.series_vs_td);
            if (!b.pass) ++failed;
        }
    }
    o.check(hb < 1e-8, "series vs harmonic balance max |dr_n| = %.3e (< 1e-8)", hb);
    o.check(td < 1e-3, "series vs time domain max |dr_n| = %.3e (< 1e-3)", td);
    o.check(failed == 0, "%d of 84 cross-validation points failed", failed);
    o.check(td_seconds < 30.0, "time-domain runs took %.2f s (< 30 s)", td_seconds);
    return o;
}

Outcome ac4_fig3a() {
    Outcome o;
    const auto ds = run_sweep(*find_preset("fig3a"));
    double low_max = 0.0, low_arg = 0.0, mid_max = 0.0, mid_arg = 0.0;
    for (const auto& r : ds.rows) {
        if (r.axis_value > 0.0 && r.axis_value <= 1.0 && r.T > low_max) {
            low_max = r.T;
            low_arg = r.axis_value;
        }
        if (r.axis_value >= 4.0 && r.axis_value <= 6.0 && r.T > mid_max) {
            mid_max = r.T;
            mid_arg = r.axis_value;
        }
    }
    const double crossing = bisect([](double fo) { return total_T(fo, 2.0) - 0.05; }, 0.1, 1.0);
    o.check(low_max < 0.05, "max T on fO in (0, 1] = %.6f at fO = %g (< 0.05; T = 0.05 is crossed at fO = %.6f)",
            low_max, low_arg, crossing);
    o.check(mid_max > 0.5, "max T on fO in [4, 6] = %.6f at fO = %g (> 0.5)", mid_max, mid_arg);
    const auto mismatch = golden_check("fig3a");
    o.check(mismatch.empty(), "golden fig3a regression %s", mismatch.empty() ? "matches" : mismatch.c_str());
    return o;
}

Outcome ac5_fig3b_fig4a() {
    Outcome o;
    const auto ds = run_sweep(*find_preset("fig4a"));
    bool decreasing = true;
    double low_max = 0.0, low_arg = 0.0;
    const SpectrumRow* prev = nullptr;
    const SpectrumRow* first_bad = nullptr;
    int t2_violations = 0;
    double t2_lo = 0.0, t2_hi = 0.0;
    for (const auto& r : ds.rows) {
        if (r.axis_value <= 6.0 && r.T > low_max) {
            low_max = r.T;
            low_arg = r.axis_value;
        }
        if (r.axis_value > 6.0 && prev && prev->axis_value > 6.0 && !(r.T < prev->T)) decreasing = false;
        prev = &r;
        if (!(r.T_n[2] < r.T_n[1])) {
            if (!first_bad) t2_lo = r.axis_value;
            first_bad = &r;
            t2_hi = r.axis_value;
            ++t2_violations;
        }
    }
    const double t8 = total_T(5.0, 8.0);
    o.check(decreasing, "T strictly decreasing on the omega > 6 grid points");
    o.check(t8 < low_max, "T(omega = 8) = %.6f below the low-frequency maximum %.6f at omega = %g", t8, low_max,
            low_arg);
    o.check(std::abs(t8 - kTransmissionAt8) < kFrozenRegressionTol, "T(omega = 8) matches frozen %.17g (diff %.2e)",
            kTransmissionAt8, t8 - kTransmissionAt8);

    // crossover: last sign change of T_1 - T_0 on the grid, refined by bisection
    double cross_lo = -1.0, cross_hi = -1.0;
    for (std::size_t k = 1; k < ds.rows.size(); ++k) {
        const double a = ds.rows[k - 1].T_n[1] - ds.rows[k - 1].T_n[0];
        const double b = ds.rows[k].T_n[1] - ds.rows[k].T_n[0];
        if (a <= 0.0 && b > 0.0) {
            cross_lo = ds.rows[k - 1].axis_value;
            cross_hi = ds.rows[k].axis_value;
        }
    }
    const bool beyond = cross_hi > 0.0 && std::all_of(ds.rows.begin(), ds.rows.end(), [&](const SpectrumRow& r) {
        return r.axis_value < cross_hi || r.T_n[1] > r.T_n[0];
    });
    const double crossover =
        cross_hi > 0.0 ? bisect([](double w) { return sideband_T(1, 5.0, w) - sideband_T(0, 5.0, w); }, cross_lo, cross_hi)
                       : NAN;
    o.check(beyond, "T_1 > T_0 for every grid omega beyond the crossover");
    o.check(std::abs(crossover - kCrossoverFreq) < 1e-9, "crossover omega = %.15f (frozen %.15f)", crossover,
            kCrossoverFreq);
    o.check(t2_violations == 0, "T_2 < T_1 at all %zu grid points (%d violations, omega in [%g, %g])",
            ds.rows.size(), t2_violations, t2_lo, t2_hi);
    const auto mismatch = golden_check("fig3b");
    o.check(mismatch.empty(), "golden fig3b regression %s", mismatch.empty() ? "matches" : mismatch.c_str());
    return o;
}

Outcome ac6_fig4b() {
    Outcome o;
    const auto ds = run_sweep(*find_preset("fig4b"));
    int low_bad = 0, high_bad = 0, low_n = 0, high_n = 0;
    double low_first_bad = NAN;
    for (const auto& r : ds.rows) {
        const double x = r.axis_value;
        if (x > 0.0 && x < 2.0) {
            ++low_n;
            if (!(r.T_n[1] > r.T_n[0])) {
                if (low_bad == 0) low_first_bad = x;
                ++low_bad;
            }
        }
        if (x > 4.0) {
            ++high_n;
            if (!(r.T_n[0] > r.T_n[1] && r.T_n[0] > r.T_n[2] && r.T_n[0] > r.residual)) ++high_bad;
        }
    }
    const double cross = bisect([](double fo) { return sideband_T(1, fo, 2.0) - sideband_T(0, fo, 2.0); }, 1.5, 2.0);
    o.check(low_bad == 0, "T_1 > T_0 on fO in (0, 2): %d of %d grid points violate (first at fO = %g; T_1 = T_0 at fO = %.12f)",
            low_bad, low_n, low_first_bad, cross);
    o.check(high_bad == 0, "T_0 largest sideband contribution on fO in (4, 10]: %d of %d grid points violate", high_bad,
            high_n);
    return o;
}

struct TrapRuns {
    double bandwidth;
    TrapReport stored;
    TrapReport control;
    double seconds;
    std::size_t cells;
};

std::vector<TrapRuns>& trap_runs() {
    static std::vector<TrapRuns> runs;
    if (!runs.empty()) return runs;
    for (double bw : {0.1, 0.05, 0.025}) {
        TrapPresetOptions opt;
        opt.bandwidth = bw;
        const auto t0 = std::chrono::steady_clock::now();
        const auto p = make_trap_protocol(opt);
        auto stored = run_protocol(p);
        const double secs = seconds_since(t0);
        opt.switch_off = false;
        auto control = run_protocol(make_trap_protocol(opt));
        runs.push_back({bw, std::move(stored), std::move(control), secs,
                        static_cast<std::size_t>(std::llround(p.domain_length / p.dx))});
    }
    return runs;
}

Outcome ac7_grid() {
    Outcome o;
    const auto& runs = trap_runs();
    const auto& longest = runs.back();
    o.check(longest.stored.steps >= 100000 && longest.stored.max_norm_defect < 1e-8,
            "norm defect %.3e over %ld steps on %zu cells (< 1e-8, >= 1e5 steps)", longest.stored.max_norm_defect,
            longest.stored.steps, longest.cells);
    o.check(longest.cells >= 20000 && longest.seconds < 60.0, "runtime %.2f s at %zu cells (< 60 s)", longest.seconds,
            longest.cells);

    const auto stat = EmitterParams::in_gamma_units(0.0, 0.0);
    const auto res = scatter_packet(stat, 0.0, 0.05, 0.02);
    const double R = oracle::lorentzian_convolution(1.0, 0.0, 0.05);
    o.check(res.reflected >= 0.99, "static resonant emitter reflects R = %.6f (>= 0.99)", res.reflected);
    o.check(std::abs(res.reflected - R) < 1e-3, "Lorentzian convolution oracle R = %.6f (diff %.2e < 1e-3)", R,
            res.reflected - R);
    const auto mod = EmitterParams::in_gamma_units(5.0, 2.0);
    const auto m = scatter_packet(mod, 0.0, 0.05, 0.02);
    const double T = evaluate_sidebands(mod, 0.0).total_T;
    o.check(std::abs(m.transmitted - T) < 1e-2, "modulated emitter packet T = %.6f vs sum |t_n|^2 = %.6f (< 1e-2)",
            m.transmitted, T);
    return o;
}

Outcome ac8_trap() {
    Outcome o;
    const auto& runs = trap_runs();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        const double ratio = r.stored.storage_efficiency / r.control.storage_efficiency;
        o.check(ratio >= 10.0, "bandwidth %g: eta = %.6f, control = %.3e, ratio %.3e (>= 10)", r.bandwidth,
                r.stored.storage_efficiency, r.control.storage_efficiency, ratio);
        o.check(std::abs(r.stored.storage_efficiency - kStorage[i]) < kStorageTol,
                "bandwidth %g: eta = %.15f matches frozen %.15f", r.bandwidth, r.stored.storage_efficiency, kStorage[i]);
    }
    const bool monotone = runs[0].stored.leakage_rate > runs[1].stored.leakage_rate &&
                          runs[1].stored.leakage_rate > runs[2].stored.leakage_rate;
    o.check(monotone, "leakage rates %.3e > %.3e > %.3e for bandwidths 1/10, 1/20, 1/40", runs[0].stored.leakage_rate,
            runs[1].stored.leakage_rate, runs[2].stored.leakage_rate);
    return o;
}

Outcome ac9_determinism() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path() / "scatter_acceptance";
    std::filesystem::create_directories(dir);
    struct Run { const char* name; std::string args; bool report; };
    const std::vector<Run> runs = {
        {"fig3b.csv", "spectrum --preset fig3b", false},
        {"fig4a.json", "sidebands --preset fig4a --amplitudes --format json", false},
        {"oracle.csv", "oracle --delta-range -2:2:5", false},
        {"trap.csv", "trap --bandwidth 0.1 --release", true},
    };
    for (const auto& r : runs) {
        std::string outputs[2], reports[2];
        bool ok = true;
        for (int k = 0; k < 2; ++k) {
            const auto out = dir / (std::to_string(k) + "_" + r.name);
            const auto report = dir / (std::to_string(k) + "_report.json");
            std::string cmd = "SCATTER_THREADS=" + std::to_string(k + 1) + " " + std::string(SCATTER_CLI) + " " +
                              r.args + " -o " + out.string();
            if (r.report) cmd += " --report " + report.string();
            ok = ok && std::system((cmd + " >/dev/null 2>&1").c_str()) == 0;
            outputs[k] = slurp(out);
            if (r.report) reports[k] = slurp(report);
        }
        o.check(ok && !outputs[0].empty() && outputs[0] == outputs[1] && reports[0] == reports[1],
                "%s: two invocations (1 and 2 threads) byte-identical (%zu bytes)", r.name, outputs[0].size());
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const bool verbose = argc > 1 && std::string(argv[1]) == "-v";
    struct Criterion { const char* id; const char* title; Outcome (*fn)(); };
    const Criterion criteria[] = {
        {"AC1", "unitarity over the standard grid", ac1_unitarity},
        {"AC2", "static limits", ac2_static_limits},
        {"AC3", "three-way oracle equivalence", ac3_oracles},
        {"AC4", "transmission vs modulation depth (fig3a)", ac4_fig3a},
        {"AC5", "transmission vs modulation frequency (fig3b, fig4a)", ac5_fig3b_fig4a},
        {"AC6", "sideband dominance vs modulation depth (fig4b)", ac6_fig4b},
        {"AC7", "grid simulator physics", ac7_grid},
        {"AC8", "trap protocol storage and leakage", ac8_trap},
        {"AC9", "byte-identical CLI output", ac9_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.check(false, "exception: %s", e.what());
        }
        std::printf("%s %s  %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.title, seconds_since(t0));
        for (const auto& n : o.notes) {
            if (verbose || n.rfind("FAILED", 0) == 0) std::printf("      %s\n", n.c_str());
        }
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed ? 1 : 0;
}
