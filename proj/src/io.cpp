#include "scatter/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace scatter::io {
namespace {

using nlohmann::ordered_json;

std::string flag(bool b) { return b ? "1" : "0"; }

std::string sideband_label(int n) { return n < 0 ? "m" + std::to_string(-n) : std::to_string(n); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c, int precision) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d, precision);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return csv_escape(std::get<std::string>(c));
}

ordered_json number_json(double v, int precision) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_number(v, precision).c_str(), nullptr);
}

ordered_json cell_json(const Cell& c, int precision) {
    if (const auto* d = std::get_if<double>(&c)) return number_json(*d, precision);
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
}

std::string meta_number(double v) { return format_number(v, 12); }

}  // namespace

std::string format_number(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", precision, v);
    return buf;
}

void write_csv(std::ostream& os, const Table& t, int precision) {
    for (const auto& [k, v] : t.meta) os << "# " << k << '=' << v << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c], precision);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t, int precision) {
    ordered_json doc;
    doc["meta"] = ordered_json::object();
    for (const auto& [k, v] : t.meta) doc["meta"][k] = v;
    doc["columns"] = t.columns;
    doc["rows"] = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json r = ordered_json::object();
        for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c) r[t.columns[c]] = cell_json(row[c], precision);
        doc["rows"].push_back(std::move(r));
    }
    os << doc.dump(2) << '\n';
}

void write(std::ostream& os, const Table& t, Format format, int precision) {
    if (format == Format::json) write_json(os, t, precision);
    else write_csv(os, t, precision);
}

std::string axis_column(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::detuning: return "delta";
        case SweepAxis::mod_energy: return "mod_energy";
        case SweepAxis::mod_freq: return "mod_freq";
    }
    return "axis";
}

void add_params_meta(Table& t, const EmitterParams& p) {
    const double g = p.gamma();
    t.add_meta("omega_a_over_gamma", meta_number(p.omega_a / g));
    t.add_meta("mod_energy_over_gamma", meta_number(p.mod_energy() / g));
    t.add_meta("mod_freq_over_gamma", meta_number(p.mod_freq / g));
    t.add_meta("coupling", meta_number(p.coupling));
    t.add_meta("group_velocity", meta_number(p.group_velocity));
}

Table spectrum_table(const SpectrumDataset& ds, bool amplitudes) {
    const auto& spec = ds.spec;
    Table t;
    t.add_meta("dataset", spec.name.empty() ? "custom" : spec.name);
    t.add_meta("axis", axis_column(spec.axis));
    t.add_meta("range", meta_number(spec.range.start) + ":" + meta_number(spec.range.stop) + ":" +
                            std::to_string(spec.range.points));
    add_params_meta(t, spec.base);
    if (spec.axis != SweepAxis::detuning) t.add_meta("delta_over_gamma", meta_number(spec.detuning / spec.base.gamma()));
    t.add_meta("method", std::string(to_string(spec.method)));
    t.add_meta("unitarity_tol", meta_number(spec.unitarity_tol));
    t.add_meta("max_defect", meta_number(ds.max_defect()));
    t.add_meta("flagged_rows", std::to_string(std::count_if(ds.rows.begin(), ds.rows.end(),
                                                            [](const SpectrumRow& r) { return r.flagged; })));

    const auto& obs = spec.observables;
    const bool both = spec.method == SweepMethod::both;
    t.columns.push_back(axis_column(spec.axis));
    if (obs.T) t.columns.push_back("T");
    if (obs.R) t.columns.push_back("R");
    if (obs.defect) t.columns.push_back("unitarity_defect");
    for (int n : obs.sidebands) t.columns.push_back("T_" + sideband_label(n));
    if (!obs.sidebands.empty()) t.columns.push_back("T_rest");
    if (amplitudes) {
        for (int n : obs.sidebands) {
            t.columns.push_back("re_r" + sideband_label(n));
            t.columns.push_back("im_r" + sideband_label(n));
        }
    }
    if (both) t.columns.push_back("discrepancy");
    for (const char* c : {"sideband_max", "sum_max", "below_cutoff", "flagged", "flag_reason"}) t.columns.push_back(c);

    for (const auto& r : ds.rows) {
        std::vector<Cell> row;
        row.emplace_back(r.axis_value);
        if (obs.T) row.emplace_back(r.T);
        if (obs.R) row.emplace_back(r.R);
        if (obs.defect) row.emplace_back(r.defect);
        for (std::size_t i = 0; i < obs.sidebands.size(); ++i) row.emplace_back(i < r.T_n.size() ? r.T_n[i] : NAN);
        if (!obs.sidebands.empty()) row.emplace_back(r.residual);
        if (amplitudes) {
            for (std::size_t i = 0; i < obs.sidebands.size(); ++i) {
                const cplx v = i < r.r_n.size() ? r.r_n[i] : cplx{NAN, NAN};
                row.emplace_back(v.real());
                row.emplace_back(v.imag());
            }
        }
        if (both) row.emplace_back(r.discrepancy);
        row.emplace_back(static_cast<long long>(r.sideband_max));
        row.emplace_back(static_cast<long long>(r.sum_max));
        row.emplace_back(static_cast<long long>(r.below_cutoff));
        row.emplace_back(static_cast<long long>(r.flagged));
        row.emplace_back(r.flag_reason);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table oracle_table(const std::vector<ValidationReport>& reports) {
    Table t;
    t.add_meta("dataset", "oracle");
    t.add_meta("points", std::to_string(reports.size()));
    if (!reports.empty()) {
        t.add_meta("tol_series_hb", meta_number(reports.front().tol_hb));
        t.add_meta("tol_series_td", meta_number(reports.front().tol_td));
    }
    t.add_meta("all_pass", flag(std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; })));
    t.columns = {"delta",         "mod_energy",   "mod_freq",   "series_vs_hb", "series_vs_td",  "defect_series",
                 "defect_hb",     "defect_td",    "hb_residual", "td_periodicity", "hb_run", "td_run", "pass"};
    for (const auto& r : reports) {
        const double g = r.params.gamma();
        const double nan = std::numeric_limits<double>::quiet_NaN();
        t.rows.push_back({r.detuning / g, r.params.mod_energy() / g, r.params.mod_freq / g, r.hb_run ? r.series_vs_hb : nan,
                          r.time_domain_run ? r.series_vs_td : nan, r.defect_series, r.hb_run ? r.defect_hb : nan,
                          r.time_domain_run ? r.defect_td : nan, r.hb_run ? r.hb_residual : nan,
                          r.time_domain_run ? r.td_periodicity : nan, static_cast<long long>(r.hb_run),
                          static_cast<long long>(r.time_domain_run), static_cast<long long>(r.pass)});
    }
    return t;
}

Table trap_series_table(const TrapProtocol& p, const TrapReport& rep) {
    Table t;
    t.add_meta("dataset", "trap");
    t.add_meta("bandwidth", meta_number(p.packet.bandwidth));
    t.add_meta("cavity_length", meta_number(p.cavity_length));
    t.add_meta("dx", meta_number(p.dx));
    t.add_meta("left_mod_energy", meta_number(p.left_schedule.mod_energy));
    t.add_meta("left_mod_freq", meta_number(p.left_schedule.mod_freq));
    t.add_meta("switch_off_time",
               p.left_schedule.switch_off_time ? meta_number(*p.left_schedule.switch_off_time) : std::string("none"));
    t.add_meta("switch_on_time",
               p.right_schedule.switch_on_time ? meta_number(*p.right_schedule.switch_on_time) : std::string("none"));
    t.columns = {"time", "P_cav", "exit_left", "exit_right", "excitation_left", "excitation_right", "norm"};
    for (const auto& s : rep.series) {
        t.rows.push_back({s.time, s.cavity, s.exit_left, s.exit_right, s.excitation_left, s.excitation_right, s.norm});
    }
    return t;
}

std::string trap_report_json(const TrapProtocol& p, const TrapReport& rep, int precision) {
    auto num = [&](double v) { return number_json(v, precision); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : ordered_json(nullptr); };
    ordered_json doc;
    doc["protocol"] = {
        {"bandwidth", num(p.packet.bandwidth)},
        {"packet_width", num(p.packet.spatial_width(p.emitter.group_velocity))},
        {"launch_center", num(p.packet.launch_center)},
        {"left_position", num(p.left_position)},
        {"right_position", num(p.right_position())},
        {"cavity_length", num(p.cavity_length)},
        {"round_trip_time", num(p.round_trip_time())},
        {"dx", num(p.dx)},
        {"domain_length", num(p.domain_length)},
        {"end_time", num(p.end_time)},
        {"left_mod_energy", num(p.left_schedule.mod_energy)},
        {"left_mod_freq", num(p.left_schedule.mod_freq)},
        {"ramp_duration", num(p.left_schedule.ramp_duration)},
        {"switch_off_time", opt(p.left_schedule.switch_off_time)},
        {"release_switch_on_time", opt(p.right_schedule.switch_on_time)},
    };
    doc["windows"] = {
        {"storage_time", num(p.windows.storage_time)},
        {"leak_begin", num(p.windows.leak_begin)},
        {"leak_end", num(p.windows.leak_end)},
        {"release_end", p.has_release() ? num(p.windows.release_end) : ordered_json(nullptr)},
    };
    doc["report"] = {
        {"storage_efficiency", num(rep.storage_efficiency)},
        {"cavity_at_switch_off", num(rep.cavity_at_switch_off)},
        {"leakage_rate", num(rep.leakage_rate)},
        {"release_exit", opt(rep.release_exit)},
        {"release_fidelity", opt(rep.release_fidelity)},
        {"max_norm_defect", num(rep.max_norm_defect)},
        {"steps", rep.steps},
    };
    return doc.dump(2) + "\n";
}

}  // namespace scatter::io
