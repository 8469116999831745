#pragma once

#include "macgof/experiments.hpp"
#include "macgof/gof.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace macgof::cli {

/// Version of the report layout written by this tool.
inline constexpr int kReportFormatVersion = 1;

using Json = nlohmann::json;

/// Timing fields live under this key so that reruns compare equal without it.
inline constexpr const char* kTimingKey = "timing";

[[nodiscard]] Json fitted_model_json(const FittedModel& fit, const std::vector<std::string>& x_names);
[[nodiscard]] Json gof_config_json(const GofConfig& cfg);
[[nodiscard]] Json null_summary_json(const NullSummary& s);
[[nodiscard]] Json gof_report_json(const GofReport& report, const std::vector<std::string>& x_names);
[[nodiscard]] Json power_curve_json(const experiments::PowerCurve& curve);
[[nodiscard]] Json replication_json(const experiments::ReplicationResult& result);

/// Wraps a command payload with format version, command name, seed and timing.
[[nodiscard]] Json envelope(const std::string& command, std::uint64_t seed, Json payload, double wall_time_seconds);

/// Copy without the timing block.
[[nodiscard]] Json without_timing(Json report);

/// Writes `text` to `path` through a temporary file renamed into place.
void write_atomically(const std::filesystem::path& path, const std::string& text);

/// Pretty-printed, key-sorted JSON with a trailing newline.
[[nodiscard]] std::string dump(const Json& report);

/// "index,value" rows under the given header.
[[nodiscard]] std::string series_csv(const std::string& index_name, const std::string& value_name,
                                     const std::vector<double>& values);

}  // namespace macgof::cli
