#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scatter/cavity.hpp"
#include "scatter/error.hpp"
#include "scatter/io.hpp"
#include "scatter/kernels.hpp"
#include "scatter/oracle.hpp"
#include "scatter/sweep.hpp"

namespace {

using namespace scatter;

constexpr int kExitOk = 0;
constexpr int kExitQuality = 2;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    std::string path;
    std::string format = "csv";
    int precision = 12;
    bool stamp = false;
};

struct UnitOptions {
    bool raw = false;
    std::optional<double> coupling;
    std::optional<double> group_velocity;
    std::optional<double> omega_a;
};

struct SweepOptions {
    std::string preset;
    std::string axis;
    std::string range;
    std::string delta_range;
    std::optional<double> delta;
    std::optional<double> mod_amp;
    std::optional<double> mod_freq;
    std::string method = "series";
    double tol = 1e-10;
    std::vector<int> sidebands;
    bool amplitudes = false;
};

struct OracleOptions {
    std::string delta_range = "-10:10:21";
    std::vector<std::string> cases;
    bool no_time_domain = false;
    double tol_hb = 1e-8;
    double tol_td = 1e-3;
};

struct TrapOptions {
    double bandwidth = 0.05;
    std::optional<double> left_mod_amp;
    double left_mod_freq = 2.0;
    double ramp = 0.0;
    bool release = false;
    bool no_switch = false;
    double dx = 0.025;
    int round_trips = 5;
    int sample_every = 40;
    std::string report;
};

double parse_double(std::string_view s, const std::string& what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError("cannot parse '" + std::string(s) + "' in " + what);
    }
    return v;
}

SweepRange parse_range(const std::string& text, const std::string& what) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (b == std::string::npos) throw UsageError(what + " must look like start:stop:points");
    SweepRange r;
    r.start = parse_double(std::string_view(text).substr(0, a), what);
    r.stop = parse_double(std::string_view(text).substr(a + 1, b - a - 1), what);
    const double n = parse_double(std::string_view(text).substr(b + 1), what);
    if (n < 2 || n != std::floor(n) || n > 1e7) throw UsageError(what + ": points must be an integer >= 2");
    r.points = static_cast<int>(n);
    return r;
}

EmitterParams base_params(const UnitOptions& u) {
    if (!u.raw && (u.coupling || u.group_velocity)) {
        throw UsageError("--coupling and --group-velocity require --raw-units");
    }
    EmitterParams p;
    p.coupling = u.coupling.value_or(1.0);
    p.group_velocity = u.group_velocity.value_or(1.0);
    p.omega_a = u.omega_a.value_or(1000.0) * (u.omega_a ? 1.0 : p.gamma());
    return p;
}

void set_mod_energy(EmitterParams& p, double mod_energy) { p.mod_amp = mod_energy / p.omega_a; }

io::Format parse_format(const std::string& s) { return s == "json" ? io::Format::json : io::Format::csv; }

std::string utc_stamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(io::Table table, const OutputOptions& out, const UnitOptions& units) {
    table.meta.insert(table.meta.begin() + (table.meta.empty() ? 0 : 1),
                      {"units", units.raw ? std::string("raw") : std::string("gamma")});
    if (out.stamp) table.add_meta("timestamp", utc_stamp());
    const auto fmt = parse_format(out.format);
    if (out.path.empty() || out.path == "-") {
        io::write(std::cout, table, fmt, out.precision);
        return;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file " + out.path);
    io::write(f, table, fmt, out.precision);
}

// stderr when the dataset goes to stdout
std::ostream& summary_stream(const OutputOptions& out) {
    return (out.path.empty() || out.path == "-") ? std::cerr : std::cout;
}

void print_warnings(const EmitterParams& p) {
    for (const auto& w : p.warnings()) std::cerr << "warning: " << w << '\n';
}

SweepSpec build_sweep(const SweepOptions& o, const UnitOptions& u, bool sideband_command) {
    const EmitterParams base = base_params(u);
    SweepSpec spec;
    if (!o.preset.empty()) {
        if (u.raw) throw UsageError("presets are defined in gamma units; drop --raw-units");
        auto found = find_preset(o.preset, base.omega_a);
        if (!found) throw UsageError("unknown preset '" + o.preset + "' (see `scatter presets`)");
        spec = *found;
    } else {
        spec.name = "custom";
        spec.base = base;
        spec.base.mod_freq = 2.0 * base.gamma();
        spec.axis = SweepAxis::detuning;
        spec.range = SweepRange{-10.0 * base.gamma(), 10.0 * base.gamma(), 401};
    }
    if (!o.axis.empty()) {
        const auto a = parse_axis(o.axis);
        if (!a) throw UsageError("--axis must be detuning, mod_energy or mod_freq");
        spec.axis = *a;
    }
    if (!o.delta_range.empty()) {
        if (!o.axis.empty() && spec.axis != SweepAxis::detuning) throw UsageError("--delta-range implies --axis detuning");
        spec.axis = SweepAxis::detuning;
        spec.range = parse_range(o.delta_range, "--delta-range");
    }
    if (!o.range.empty()) {
        if (!o.delta_range.empty()) throw UsageError("give either --range or --delta-range");
        spec.range = parse_range(o.range, "--range");
    }
    if (o.delta) spec.detuning = *o.delta;
    if (o.mod_amp) set_mod_energy(spec.base, *o.mod_amp);
    if (o.mod_freq) spec.base.mod_freq = *o.mod_freq;
    const auto m = parse_method(o.method);
    if (!m) throw UsageError("--method must be series, harmonic_balance or both");
    spec.method = *m;
    spec.unitarity_tol = o.tol;
    if (!o.sidebands.empty()) spec.observables.sidebands = o.sidebands;
    if (sideband_command && spec.observables.sidebands.empty()) spec.observables.sidebands = {0, 1, 2};
    try {
        spec.validate();
    } catch (const ScatterError& e) {
        throw UsageError(e.what());
    }
    return spec;
}

int cmd_sweep(const SweepOptions& o, const UnitOptions& u, const OutputOptions& out, bool sideband_command) {
    const SweepSpec spec = build_sweep(o, u, sideband_command);
    print_warnings(spec.point(0).first);
    const auto ds = run_sweep(spec);
    emit(io::spectrum_table(ds, o.amplitudes), out, u);
    const auto flagged = std::count_if(ds.rows.begin(), ds.rows.end(), [](const auto& r) { return r.flagged; });
    auto& s = summary_stream(out);
    s << "points=" << ds.rows.size() << " max_unitarity_defect=" << io::format_number(ds.max_defect(), 3);
    if (spec.method == SweepMethod::both) s << " max_discrepancy=" << io::format_number(ds.max_discrepancy(), 3);
    s << " flagged=" << flagged << '\n';
    return flagged ? kExitQuality : kExitOk;
}

int cmd_oracle(const OracleOptions& o, const SweepOptions& so, const UnitOptions& u, const OutputOptions& out) {
    const EmitterParams base = base_params(u);
    const SweepRange deltas = parse_range(o.delta_range, "--delta-range");
    std::vector<std::pair<double, double>> cases;
    if (so.mod_amp || so.mod_freq) {
        cases.emplace_back(so.mod_amp.value_or(0.0), so.mod_freq.value_or(0.0));
    } else if (!o.cases.empty()) {
        for (const auto& c : o.cases) {
            const auto colon = c.find(':');
            if (colon == std::string::npos) throw UsageError("--case must look like mod_energy:mod_freq");
            cases.emplace_back(parse_double(std::string_view(c).substr(0, colon), "--case"),
                               parse_double(std::string_view(c).substr(colon + 1), "--case"));
        }
    } else {
        cases = {{5.0, 2.0}, {5.0, 8.0}, {2.0, 2.0}, {8.0, 2.0}};
    }
    CrossValidateOptions opts;
    opts.tol_series_hb = o.tol_hb;
    opts.tol_td = o.tol_td;
    opts.time_domain = !o.no_time_domain;

    std::vector<std::pair<EmitterParams, double>> points;
    for (const auto& [fo, w] : cases) {
        EmitterParams p = base;
        set_mod_energy(p, fo);
        p.mod_freq = w;
        try {
            p.validate();
        } catch (const ScatterError& e) {
            throw UsageError(e.what());
        }
        print_warnings(p);
        for (int k = 0; k < deltas.points; ++k) points.emplace_back(p, deltas.at(k));
    }
    std::vector<ValidationReport> reports(points.size());
    kernels::for_each_index(points.size(), kernels::Exec::parallel, [&](std::size_t i) {
        reports[i] = cross_validate(points[i].first, points[i].second, opts);
    });
    emit(io::oracle_table(reports), out, u);
    const auto failed = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.pass; });
    double worst_hb = 0.0, worst_td = 0.0;
    for (const auto& r : reports) {
        if (r.hb_run) worst_hb = std::max(worst_hb, r.series_vs_hb);
        if (r.time_domain_run) worst_td = std::max(worst_td, r.series_vs_td);
    }
    summary_stream(out) << "points=" << reports.size() << " max_series_vs_hb=" << io::format_number(worst_hb, 3)
                        << " max_series_vs_td=" << io::format_number(worst_td, 3) << " failed=" << failed << '\n';
    return failed ? kExitQuality : kExitOk;
}

int cmd_trap(const TrapOptions& o, const UnitOptions& u, const OutputOptions& out) {
    if (u.raw || u.coupling || u.group_velocity) throw UsageError("trap runs are defined in gamma units only");
    TrapPresetOptions t;
    t.bandwidth = o.bandwidth;
    t.left_mod_energy = o.left_mod_amp;
    t.left_mod_freq = o.left_mod_freq;
    t.ramp_duration = o.ramp;
    t.release = o.release;
    t.switch_off = !o.no_switch;
    t.dx = o.dx;
    t.omega_a = u.omega_a.value_or(1000.0);
    t.storage_round_trips = o.round_trips;
    if (o.release && o.no_switch) throw UsageError("--release needs the switch-off (drop --no-switch)");
    TrapProtocol p;
    try {
        p = make_trap_protocol(t);
        p.sample_every = o.sample_every;
        p.validate();
    } catch (const ScatterError& e) {
        throw UsageError(e.what());
    }
    const auto rep = run_protocol(p);
    emit(io::trap_series_table(p, rep), out, u);
    const std::string json = io::trap_report_json(p, rep, out.precision);
    if (!o.report.empty()) {
        std::ofstream f(o.report, std::ios::binary);
        if (!f) throw UsageError("cannot open report file " + o.report);
        f << json;
    }
    auto& s = summary_stream(out);
    s << "storage_efficiency=" << io::format_number(rep.storage_efficiency, 6)
      << " leakage_rate=" << io::format_number(rep.leakage_rate, 6);
    if (rep.release_fidelity) s << " release_fidelity=" << io::format_number(*rep.release_fidelity, 6);
    s << " max_norm_defect=" << io::format_number(rep.max_norm_defect, 3) << '\n';
    return rep.max_norm_defect < 1e-8 ? kExitOk : kExitQuality;
}

int cmd_presets(const OutputOptions& out, const UnitOptions& u) {
    io::Table t;
    t.add_meta("dataset", "presets");
    t.columns = {"name", "axis", "start", "stop", "points", "mod_energy", "mod_freq", "delta", "sidebands"};
    for (const auto& p : figure_presets(u.omega_a.value_or(1000.0))) {
        std::string sb;
        for (int n : p.observables.sidebands) sb += (sb.empty() ? "" : " ") + std::to_string(n);
        t.rows.push_back({p.name, io::axis_column(p.axis), p.range.start, p.range.stop,
                          static_cast<long long>(p.range.points),
                          p.axis == SweepAxis::mod_energy ? std::string("axis") : io::format_number(p.base.mod_energy(), 6),
                          p.axis == SweepAxis::mod_freq ? std::string("axis") : io::format_number(p.base.mod_freq, 6),
                          p.detuning, sb});
    }
    emit(std::move(t), out, u);
    return kExitOk;
}

void add_output_options(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("-o,--output", out.path, "Output file (default: stdout)");
    cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--precision", out.precision, "Significant decimal digits")->check(CLI::Range(1, 17));
    cmd->add_flag("--stamp", out.stamp, "Add a timestamp to the metadata block");
}

void add_unit_options(CLI::App* cmd, UnitOptions& u) {
    cmd->add_flag("--raw-units", u.raw, "Interpret frequencies in absolute units with explicit V and v_g");
    cmd->add_option("--coupling", u.coupling, "Bare coupling V (raw units)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--group-velocity", u.group_velocity, "Group velocity v_g (raw units)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--omega-a", u.omega_a, "Static transition frequency (Omega/gamma, default 1000)")
        ->check(CLI::PositiveNumber);
}

void add_sweep_options(CLI::App* cmd, SweepOptions& o, bool with_sidebands) {
    cmd->add_option("--preset", o.preset, "Figure preset (see `scatter presets`)");
    cmd->add_option("--axis", o.axis, "Swept axis: detuning, mod_energy or mod_freq");
    cmd->add_option("--range", o.range, "Axis range start:stop:points");
    cmd->add_option("--delta-range", o.delta_range, "Detuning range start:stop:points");
    cmd->add_option("--delta", o.delta, "Fixed detuning Delta/gamma when another axis is swept");
    cmd->add_option("--mod-amp", o.mod_amp, "Modulation depth f*Omega/gamma")->check(CLI::NonNegativeNumber);
    cmd->add_option("--mod-freq", o.mod_freq, "Modulation frequency omega/gamma")->check(CLI::NonNegativeNumber);
    cmd->add_option("--method", o.method, "series, harmonic_balance or both");
    cmd->add_option("--tol", o.tol, "Unitarity tolerance")->check(CLI::PositiveNumber);
    if (with_sidebands) {
        cmd->add_option("--sideband", o.sidebands, "Sideband orders to report (default 0 1 2)");
    }
    cmd->add_flag("--amplitudes", o.amplitudes, "Also write re/im of r_n for the listed sidebands");
}

}  // namespace

int main(int argc, char** argv) {
    kernels::configure_threads_from_env();

    CLI::App app{"Single-photon scattering off a frequency-modulated emitter in a waveguide"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a TOML file; flags override file values");
    bool dump_config = false;
    app.add_flag("--dump-config", dump_config, "Print the effective configuration and exit")->configurable(false);

    OutputOptions out;
    UnitOptions units;
    SweepOptions sweep;
    OracleOptions oracle;
    TrapOptions trap;

    auto* spectrum = app.add_subcommand("spectrum", "Total transmission and reflection spectra");
    add_sweep_options(spectrum, sweep, false);
    add_unit_options(spectrum, units);
    add_output_options(spectrum, out);

    auto* sidebands = app.add_subcommand("sidebands", "Sideband-resolved transmitted probabilities");
    add_sweep_options(sidebands, sweep, true);
    add_unit_options(sidebands, units);
    add_output_options(sidebands, out);

    auto* orc = app.add_subcommand("oracle", "Cross-validate series, harmonic balance and time-domain solvers");
    orc->add_option("--delta-range", oracle.delta_range, "Detuning grid start:stop:points");
    orc->add_option("--case", oracle.cases, "mod_energy:mod_freq pair(s) in gamma units");
    orc->add_option("--mod-amp", sweep.mod_amp, "Single case: f*Omega/gamma")->check(CLI::NonNegativeNumber);
    orc->add_option("--mod-freq", sweep.mod_freq, "Single case: omega/gamma")->check(CLI::NonNegativeNumber);
    orc->add_flag("--no-time-domain", oracle.no_time_domain, "Skip the time-domain integration");
    orc->add_option("--tol-hb", oracle.tol_hb, "Series vs harmonic balance tolerance")->check(CLI::PositiveNumber);
    orc->add_option("--tol-td", oracle.tol_td, "Series vs time-domain tolerance")->check(CLI::PositiveNumber);
    add_unit_options(orc, units);
    add_output_options(orc, out);

    auto* trp = app.add_subcommand("trap", "Two-emitter trap and release simulation");
    trp->add_option("--bandwidth", trap.bandwidth, "Packet bandwidth sigma/gamma (<= 0.1)")->check(CLI::PositiveNumber);
    trp->add_option("--left-mod-amp", trap.left_mod_amp, "Left modulation depth f*Omega/gamma (default: transmission maximum)")
        ->check(CLI::NonNegativeNumber);
    trp->add_option("--left-mod-freq", trap.left_mod_freq, "Left modulation frequency omega/gamma")
        ->check(CLI::PositiveNumber);
    trp->add_option("--ramp", trap.ramp, "Linear switching ramp duration")->check(CLI::NonNegativeNumber);
    trp->add_flag("--release", trap.release, "Switch the right emitter's modulation on after storage");
    trp->add_flag("--no-switch,--control", trap.no_switch, "Keep the left modulation on (control run)");
    trp->add_option("--dx", trap.dx, "Grid cell size")->check(CLI::PositiveNumber);
    trp->add_option("--round-trips", trap.round_trips, "Storage time in cavity round trips")->check(CLI::PositiveNumber);
    trp->add_option("--sample-every", trap.sample_every, "Steps between time-series samples")->check(CLI::PositiveNumber);
    trp->add_option("--report", trap.report, "Write the JSON storage report here");
    add_unit_options(trp, units);
    add_output_options(trp, out);

    auto* pre = app.add_subcommand("presets", "List figure presets");
    add_unit_options(pre, units);
    add_output_options(pre, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (dump_config) {
        std::cout << app.config_to_str(false, false);
        return kExitOk;
    }

    try {
        if (spectrum->parsed()) return cmd_sweep(sweep, units, out, false);
        if (sidebands->parsed()) return cmd_sweep(sweep, units, out, true);
        if (orc->parsed()) return cmd_oracle(oracle, sweep, units, out);
        if (trp->parsed()) return cmd_trap(trap, units, out);
        if (pre->parsed()) return cmd_presets(out, units);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const TruncationFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitQuality;
    } catch (const ScatterError& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return e.kind() == ErrorKind::invalid_argument ? kExitUsage : kExitQuality;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
