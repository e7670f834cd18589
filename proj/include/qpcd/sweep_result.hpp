#pragma once

#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qpcd {

using Json = nlohmann::ordered_json;

struct Column {
  std::string name;
  std::vector<double> values;
};

/// Ordered samples of one swept axis plus named observable columns.
struct SweepResult {
  std::string axis_name;
  std::string axis_units;
  std::vector<double> axis_values;
  std::deque<Column> columns;  // deque: add_column references stay valid
  Json meta = Json::object();

  // Throws std::out_of_range for an unknown column.
  const std::vector<double>& column(std::string_view name) const;
  bool has_column(std::string_view name) const;
  std::vector<double>& add_column(std::string name);

  // All columns as long as the axis, all values finite. Throws ModelError.
  void validate() const;
};

}  // namespace qpcd
