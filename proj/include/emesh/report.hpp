#ifndef EMESH_REPORT_HPP
#define EMESH_REPORT_HPP

#include <string>
#include <vector>

#include "emesh/metrics.hpp"
#include "emesh/ordering.hpp"

namespace emesh {

enum class ReportFormat { Json, Csv, Text };

// Stable field order, no timestamps: identical runs emit identical bytes.
std::string report_to_json(const StatsReport& r);
StatsReport report_from_json(const std::string& text);

std::string reports_to_csv(const std::vector<StatsReport>& rs);
std::string report_to_text(const StatsReport& r);

std::string spec_metrics_to_json(const SpecMetrics& m);
std::string spec_metrics_to_text(const SpecMetrics& m);

std::string table_report_to_json(const TableReport& t);
std::string table_report_to_text(const TableReport& t);

void write_file(const std::string& path, const std::string& contents);

} // namespace emesh

#endif
