#include "qpcd/calibration_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qpcd/errors.hpp"

namespace qpcd {

InterpolationTable::InterpolationTable(std::vector<TablePoint> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw DomainError("interpolation table needs at least two points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw DomainError("interpolation table contains a non-finite value");
    }
    if (i > 0 && !(points_[i].x > points_[i - 1].x)) {
      throw DomainError("interpolation table abscissae must be strictly increasing");
    }
  }
}

double InterpolationTable::operator()(double x) const {
  if (points_.empty()) throw RangeError("lookup in an empty table");
  if (!(x >= x_min() && x <= x_max())) {
    std::ostringstream msg;
    msg << "table lookup at " << x << " outside [" << x_min() << ", " << x_max() << "]";
    throw RangeError(msg.str());
  }
  auto hi = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const TablePoint& p, double v) { return p.x < v; });
  if (hi == points_.begin()) return hi->y;
  auto lo = std::prev(hi);
  const double f = (x - lo->x) / (hi->x - lo->x);
  return lo->y + f * (hi->y - lo->y);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void fail(std::string_view source, int line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw ConfigError(ConfigError::Kind::parse, std::string(source), line, msg.str());
}

double parse_number(std::string_view field, std::string_view source, int line) {
  field = trim(field);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    fail(source, line, "malformed number '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

InterpolationTable read_table_csv(std::istream& in, std::string_view expected_header,
                                  std::string_view source) {
  std::string raw;
  int line = 0;
  bool have_header = false;
  std::vector<TablePoint> points;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (!have_header) {
      std::string header;
      for (char c : text) {
        if (c != ' ' && c != '\t') header.push_back(c);
      }
      if (header != expected_header) {
        fail(source, line, "expected header '" + std::string(expected_header) + "', got '" +
                               std::string(text) + "'");
      }
      have_header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      fail(source, line, "expected exactly two comma-separated columns");
    }
    TablePoint p{parse_number(text.substr(0, comma), source, line),
                 parse_number(text.substr(comma + 1), source, line)};
    if (!points.empty() && !(p.x > points.back().x)) {
      fail(source, line, "rows must be sorted by strictly increasing first column");
    }
    points.push_back(p);
  }
  if (!have_header) fail(source, line, "missing header line");
  if (points.size() < 2) fail(source, line, "table needs at least two rows");
  return InterpolationTable(std::move(points));
}

InterpolationTable load_table_csv(const std::filesystem::path& path,
                                  std::string_view expected_header) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(ConfigError::Kind::io, path.string(), 0,
                      "cannot open table file " + path.string());
  }
  return read_table_csv(in, expected_header, path.string());
}

}  // namespace qpcd
