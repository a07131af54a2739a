#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "clusterperf/experiment.hpp"

namespace clusterperf {

/// Bumped whenever the column set or its meaning changes.
inline constexpr int kCsvSchemaVersion = 1;

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view text);

/// Column names of the result table, in order.
const std::vector<std::string>& result_columns();

/// Floating values use 9 significant digits; absent values are empty
/// fields. The header row is always written.
void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_rows_json(std::ostream& os, const std::vector<SweepRow>& rows);
void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, OutputFormat format);

void write_comparison_csv(std::ostream& os, const ComparisonReport& report);
void write_comparison_json(std::ostream& os, const ComparisonReport& report);
void write_comparison(std::ostream& os, const ComparisonReport& report, OutputFormat format);

/// "%.9g" rendering shared by every writer.
std::string format_number(double value);

}  // namespace clusterperf
