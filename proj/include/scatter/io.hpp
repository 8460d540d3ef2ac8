#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scatter/cavity.hpp"
#include "scatter/oracle.hpp"
#include "scatter/sweep.hpp"

namespace scatter::io {

using Cell = std::variant<double, long long, std::string>;

/// Column-oriented dataset shared by the CSV and JSON writers.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_meta(std::string key, std::string value) { meta.emplace_back(std::move(key), std::move(value)); }
};

enum class Format { csv, json };

/// %.{precision}e, "nan"/"inf"/"-inf" for non-finite values.
std::string format_number(double v, int precision);

/// `# key=value` lines, the column header, then one line per row.
void write_csv(std::ostream& os, const Table& table, int precision);
/// {"meta": {...}, "columns": [...], "rows": [{column: value}, ...]}; non-finite numbers become null.
void write_json(std::ostream& os, const Table& table, int precision);
void write(std::ostream& os, const Table& table, Format format, int precision);

std::string axis_column(SweepAxis axis);

void add_params_meta(Table& table, const EmitterParams& params);

/// One row per sweep point; amplitudes adds re_r{n}/im_r{n} for every listed sideband.
Table spectrum_table(const SpectrumDataset& dataset, bool amplitudes = false);
Table oracle_table(const std::vector<ValidationReport>& reports);
Table trap_series_table(const TrapProtocol& protocol, const TrapReport& report);
/// Storage metrics and protocol parameters as a JSON document.
std::string trap_report_json(const TrapProtocol& protocol, const TrapReport& report, int precision);

}  // namespace scatter::io
