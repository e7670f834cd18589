#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qpcd/sweep_result.hpp"

namespace qpcd {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view name);

// Shortest decimal text that round-trips to the same double ('.' separator).
std::string format_double(double value);

/// CSV: line 1 "# meta: <compact json>", line 2 header (axis first), then rows.
std::string to_csv(const SweepResult& result);
/// JSON: {"meta": ..., "axis": {"name", "units", "values"}, "columns": {name: [...]}}.
std::string to_json_text(const SweepResult& result);
Json to_json(const SweepResult& result);

// Reads back to_json_text output.
SweepResult sweep_result_from_json(const Json& doc);

void emit(const SweepResult& result, OutputFormat format, const std::filesystem::path& path);
std::string render(const SweepResult& result, OutputFormat format);

}  // namespace qpcd
