#include "qpcd/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qpcd/errors.hpp"

namespace qpcd {

const std::vector<double>& SweepResult::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c.values;
  }
  throw std::out_of_range("no column named " + std::string(name));
}

bool SweepResult::has_column(std::string_view name) const {
  return std::any_of(columns.begin(), columns.end(),
                     [&](const Column& c) { return c.name == name; });
}

std::vector<double>& SweepResult::add_column(std::string name) {
  columns.push_back({std::move(name), std::vector<double>(axis_values.size(), 0.0)});
  return columns.back().values;
}

void SweepResult::validate() const {
  auto check = [](const std::string& name, const std::vector<double>& values) {
    for (double v : values) {
      if (!std::isfinite(v)) throw ModelError("non-finite value in column " + name);
    }
  };
  check(axis_name, axis_values);
  for (const auto& c : columns) {
    if (c.values.size() != axis_values.size()) {
      throw ModelError("column " + c.name + " length differs from the axis");
    }
    check(c.name, c.values);
  }
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError(ConfigError::Kind::invalid_value, "format", 0,
                    "unknown output format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw ModelError("cannot format number");
  return std::string(buf, ptr);
}

Json to_json(const SweepResult& result) {
  result.validate();
  Json doc;
  doc["meta"] = result.meta;
  doc["axis"] = {{"name", result.axis_name},
                 {"units", result.axis_units},
                 {"values", result.axis_values}};
  Json columns = Json::object();
  for (const auto& c : result.columns) columns[c.name] = c.values;
  doc["columns"] = std::move(columns);
  return doc;
}

std::string to_json_text(const SweepResult& result) { return to_json(result).dump(2) + "\n"; }

std::string to_csv(const SweepResult& result) {
  result.validate();
  std::ostringstream out;
  out << "# meta: " << result.meta.dump() << '\n';
  out << result.axis_name;
  for (const auto& c : result.columns) out << ',' << c.name;
  out << '\n';
  for (std::size_t i = 0; i < result.axis_values.size(); ++i) {
    out << format_double(result.axis_values[i]);
    for (const auto& c : result.columns) out << ',' << format_double(c.values[i]);
    out << '\n';
  }
  return out.str();
}

SweepResult sweep_result_from_json(const Json& doc) {
  SweepResult result;
  result.meta = doc.at("meta");
  const auto& axis = doc.at("axis");
  result.axis_name = axis.at("name").get<std::string>();
  result.axis_units = axis.at("units").get<std::string>();
  result.axis_values = axis.at("values").get<std::vector<double>>();
  for (const auto& [name, values] : doc.at("columns").items()) {
    result.columns.push_back({name, values.get<std::vector<double>>()});
  }
  return result;
}

std::string render(const SweepResult& result, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(result) : to_json_text(result);
}

void emit(const SweepResult& result, OutputFormat format, const std::filesystem::path& path) {
  const std::string text = render(result, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError(ConfigError::Kind::io, path.string(), 0, "cannot write " + path.string());
  }
  out << text;
  if (!out) throw ConfigError(ConfigError::Kind::io, path.string(), 0, "write failed");
}

}  // namespace qpcd
