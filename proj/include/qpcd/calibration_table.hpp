#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qpcd {

struct TablePoint {
  double x = 0.0;
  double y = 0.0;
};

// Piecewise-linear table over strictly increasing abscissae.
class InterpolationTable {
 public:
  InterpolationTable() = default;
  // Throws DomainError unless there are >= 2 points with strictly increasing x.
  explicit InterpolationTable(std::vector<TablePoint> points);

  // Throws RangeError outside [x_min, x_max].
  double operator()(double x) const;

  double x_min() const { return points_.front().x; }
  double x_max() const { return points_.back().x; }
  std::span<const TablePoint> points() const { return points_; }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<TablePoint> points_;
};

// Reads a two-column CSV table. The first non-empty line must equal
// `expected_header` (e.g. "v_g,T_d" or "T_d,dT_d"). Rows must be sorted by
// the first column; violations raise ConfigError naming the line.
InterpolationTable read_table_csv(std::istream& in, std::string_view expected_header,
                                  std::string_view source = "<stream>");
InterpolationTable load_table_csv(const std::filesystem::path& path,
                                  std::string_view expected_header);

}  // namespace qpcd
