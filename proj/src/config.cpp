#include "qpcd/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "qpcd/errors.hpp"

namespace qpcd {

namespace {

using LineMap = std::map<std::string, int>;
using Kind = ConfigError::Kind;


const std::map<std::string, std::set<std::string>, std::less<>> known_keys = {
    {"", {"seed", "noise_amplitude", "dephasing_form"}},
    {"dot", {"gamma_ueV", "peak_spacing_V", "peak_offset_V", "lever_arm", "theta_mK",
             "peak_conductance"}},
    {"qpc", {"model", "v_half_V", "width_V", "table_file", "table", "v_g_V", "operating_T_d"}},
    {"coupling", {"kind", "delta_v_V", "c", "s", "eta_shift", "table_file", "table"}},
    {"interferometer",
     {"a_left", "a_right", "bare_visibility", "delta_b_mT", "v_e_uV", "background"}},
    {"bias", {"v_d_uV", "values_uV"}},
    {"sweep", {"axis", "lo", "hi", "n_points"}},
};

std::string with_line(const std::string& msg, int line) {
  if (line <= 0) return msg;
  return "line " + std::to_string(line) + ": " + msg;
}

[[noreturn]] void invalid(const std::string& path, int line, const std::string& what) {
  throw ConfigError(Kind::invalid_value, path, line, with_line(path + ": " + what, line));
}

Json toml_to_json(const toml::node& node, const std::string& path, LineMap& lines) {
  if (node.source().begin.line > 0) lines[path] = static_cast<int>(node.source().begin.line);
  if (auto* tbl = node.as_table()) {
    Json out = Json::object();
    for (auto&& [key, value] : *tbl) {
      const std::string child = path.empty() ? std::string(key.str())
                                             : path + "." + std::string(key.str());
      out[std::string(key.str())] = toml_to_json(value, child, lines);
    }
    return out;
  }
  if (auto* arr = node.as_array()) {
    Json out = Json::array();
    for (std::size_t i = 0; i < arr->size(); ++i) {
      out.push_back(toml_to_json(*arr->get(i), path + "[" + std::to_string(i) + "]", lines));
    }
    return out;
  }
  if (auto v = node.value_exact<std::int64_t>()) return *v;
  if (auto v = node.value_exact<double>()) return *v;
  if (auto v = node.value_exact<bool>()) return *v;
  if (auto v = node.value_exact<std::string>()) return *v;
  invalid(path, static_cast<int>(node.source().begin.line), "unsupported value type");
}

bool is_bare_word(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

void apply_overrides(Json& doc, std::span<const std::string> overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(Kind::parse, item, 0, "override '" + item + "' is not key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    Json value;
    try {
      auto tbl = toml::parse("value = " + text);
      LineMap ignored;
      value = toml_to_json(*tbl.get("value"), key, ignored);
    } catch (const toml::parse_error&) {
      if (!is_bare_word(text)) {
        throw ConfigError(Kind::parse, key, 0,
                          "override " + key + ": malformed value '" + text + "'");
      }
      value = text;
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      doc[key] = std::move(value);
    } else {
      const std::string section = key.substr(0, dot);
      const std::string field = key.substr(dot + 1);
      if (section.empty() || field.empty() || field.find('.') != std::string::npos) {
        throw ConfigError(Kind::parse, key, 0, "override key '" + key + "' must be section.key");
      }
      if (!doc.contains(section)) doc[section] = Json::object();
      doc[section][field] = std::move(value);
    }
  }
}

// Typed access to the nested document with path-aware diagnostics.
class Reader {
 public:
  Reader(const Json& root, const LineMap& lines, std::filesystem::path base_dir)
      : root_(root), lines_(lines), base_dir_(std::move(base_dir)) {}

  void check_known_keys() const {
    for (const auto& [key, value] : root_.items()) {
      if (value.is_object()) {
        auto section = known_keys.find(key);
        if (section == known_keys.end() || key.empty()) invalid(key, line(key), "unknown section");
        for (const auto& [field, ignored] : value.items()) {
          if (!section->second.contains(field)) {
            invalid(key + "." + field, line(key + "." + field), "unknown key");
          }
        }
      } else if (!known_keys.at("").contains(key)) {
        invalid(key, line(key), "unknown key");
      }
    }
  }

  const Json* find(std::string_view section, std::string_view key) const {
    const Json* scope = &root_;
    if (!section.empty()) {
      auto it = root_.find(std::string(section));
      if (it == root_.end()) return nullptr;
      if (!it->is_object()) invalid(std::string(section), line(std::string(section)),
                                    "expected a section");
      scope = &*it;
    }
    auto it = scope->find(std::string(key));
    return it == scope->end() ? nullptr : &*it;
  }

  double number(std::string_view section, std::string_view key, double fallback) const {
    const Json* v = find(section, key);
    return v ? as_number(*v, path(section, key)) : fallback;
  }

  double required_number(std::string_view section, std::string_view key) const {
    return as_number(required(section, key), path(section, key));
  }

  std::optional<double> optional_number(std::string_view section, std::string_view key) const {
    const Json* v = find(section, key);
    if (!v) return std::nullopt;
    return as_number(*v, path(section, key));
  }

  std::string text(std::string_view section, std::string_view key, std::string fallback) const {
    const Json* v = find(section, key);
    if (!v) return fallback;
    if (!v->is_string()) invalid(path(section, key), line(path(section, key)), "expected a string");
    return v->get<std::string>();
  }

  std::string required_text(std::string_view section, std::string_view key) const {
    const Json& v = required(section, key);
    if (!v.is_string()) invalid(path(section, key), line(path(section, key)), "expected a string");
    return v.get<std::string>();
  }

  std::uint64_t unsigned_integer(std::string_view section, std::string_view key,
                                 std::uint64_t fallback) const {
    const Json* v = find(section, key);
    if (!v) return fallback;
    const auto p = path(section, key);
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v->get<std::int64_t>());
    }
    invalid(p, line(p), "expected a non-negative integer");
  }

  std::uint64_t required_unsigned(std::string_view section, std::string_view key) const {
    required(section, key);
    return unsigned_integer(section, key, 0);
  }

  std::optional<Complex> complex(std::string_view section, std::string_view key) const {
    const Json* v = find(section, key);
    if (!v) return std::nullopt;
    const auto p = path(section, key);
    if (!v->is_array() || v->size() != 2) invalid(p, line(p), "expected [re, im]");
    return Complex(as_number((*v)[0], p), as_number((*v)[1], p));
  }

  std::optional<std::vector<double>> number_list(std::string_view section,
                                                 std::string_view key) const {
    const Json* v = find(section, key);
    if (!v) return std::nullopt;
    const auto p = path(section, key);
    if (!v->is_array()) invalid(p, line(p), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : *v) out.push_back(as_number(x, p));
    return out;
  }

  // Inline [[x, y], ...] table, or a CSV file named by table_file.
  std::optional<InterpolationTable> table(std::string_view section,
                                          std::string_view header) const {
    const Json* inline_table = find(section, "table");
    const Json* file = find(section, "table_file");
    const auto p = path(section, "table");
    if (inline_table && file) invalid(p, line(p), "give either table or table_file, not both");
    if (file) {
      const auto fp = path(section, "table_file");
      if (!file->is_string()) invalid(fp, line(fp), "expected a file path");
      std::filesystem::path tp = file->get<std::string>();
      if (tp.is_relative() && !base_dir_.empty()) tp = base_dir_ / tp;
      return load_table_csv(tp, header);
    }
    if (!inline_table) return std::nullopt;
    if (!inline_table->is_array()) invalid(p, line(p), "expected [[x, y], ...]");
    std::vector<TablePoint> points;
    for (const auto& row : *inline_table) {
      if (!row.is_array() || row.size() != 2) invalid(p, line(p), "table rows must be [x, y]");
      points.push_back({as_number(row[0], p), as_number(row[1], p)});
    }
    try {
      return InterpolationTable(std::move(points));
    } catch (const DomainError& e) {
      invalid(p, line(p), e.what());
    }
  }

  int line(const std::string& p) const {
    auto it = lines_.find(p);
    return it == lines_.end() ? 0 : it->second;
  }

  static std::string path(std::string_view section, std::string_view key) {
    return section.empty() ? std::string(key) : std::string(section) + "." + std::string(key);
  }

 private:
  const Json& required(std::string_view section, std::string_view key) const {
    const Json* v = find(section, key);
    if (!v) {
      const auto p = path(section, key);
      throw ConfigError(Kind::missing_field, p, 0, "missing required field " + p);
    }
    return *v;
  }

  double as_number(const Json& v, const std::string& p) const {
    if (!v.is_number()) invalid(p, line(p), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) invalid(p, line(p), "number must be finite");
    return x;
  }

  const Json& root_;
  const LineMap& lines_;
  std::filesystem::path base_dir_;
};

SweepAxis parse_axis(const std::string& name, int line) {
  if (name == "field") return SweepAxis::field;
  if (name == "plunger") return SweepAxis::plunger;
  if (name == "qpc_gate") return SweepAxis::qpc_gate;
  if (name == "bias") return SweepAxis::bias;
  invalid("sweep.axis", line, "unknown axis '" + name + "' (field, plunger, qpc_gate, bias)");
}

ExperimentConfig build(const Json& doc, const LineMap& lines,
                       const std::filesystem::path& base_dir) {
  Reader in(doc, lines, base_dir);
  in.check_known_keys();
  ExperimentConfig cfg;

  cfg.seed = in.unsigned_integer("", "seed", cfg.seed);
  cfg.noise_amplitude = in.number("", "noise_amplitude", cfg.noise_amplitude);
  const auto form = in.text("", "dephasing_form", "linear");
  if (form == "linear") {
    cfg.dephasing_form = DephasingForm::linear;
  } else if (form == "exact") {
    cfg.dephasing_form = DephasingForm::exact;
  } else {
    invalid("dephasing_form", in.line("dephasing_form"), "expected linear or exact");
  }

  auto& dot = cfg.dot;
  dot.gamma_uev = in.number("dot", "gamma_ueV", dot.gamma_uev);
  dot.peak_spacing_v = in.number("dot", "peak_spacing_V", dot.peak_spacing_v);
  dot.peak_offset_v = in.number("dot", "peak_offset_V", dot.peak_offset_v);
  dot.lever_arm = in.number("dot", "lever_arm", dot.lever_arm);
  dot.theta_mk = in.number("dot", "theta_mK", dot.theta_mk);
  dot.peak_conductance = in.number("dot", "peak_conductance", dot.peak_conductance);

  auto& qpc = cfg.qpc;
  const auto model = in.text("qpc", "model", "logistic");
  if (model == "logistic") {
    qpc.model = TransmissionModel::logistic;
  } else if (model == "table") {
    qpc.model = TransmissionModel::table;
  } else {
    invalid("qpc.model", in.line("qpc.model"), "expected logistic or table");
  }
  qpc.v_half = in.number("qpc", "v_half_V", qpc.v_half);
  qpc.width = in.number("qpc", "width_V", qpc.width);
  qpc.table = in.table("qpc", "v_g,T_d");
  cfg.qpc_gate_v = in.number("qpc", "v_g_V", cfg.qpc_gate_v);
  cfg.operating_t_d = in.optional_number("qpc", "operating_T_d");

  auto& coupling = cfg.coupling;
  const auto kind = in.text("coupling", "kind", "saturating");
  if (kind == "gate_shift") {
    coupling.kind = CouplingKind::gate_shift;
  } else if (kind == "saturating") {
    coupling.kind = CouplingKind::saturating;
  } else if (kind == "table") {
    coupling.kind = CouplingKind::table;
  } else {
    invalid("coupling.kind", in.line("coupling.kind"),
            "expected gate_shift, saturating or table");
  }
  coupling.delta_v = in.number("coupling", "delta_v_V", coupling.delta_v);
  coupling.c = in.number("coupling", "c", coupling.c);
  coupling.s = in.number("coupling", "s", coupling.s);
  coupling.eta_shift = in.number("coupling", "eta_shift", coupling.eta_shift);
  coupling.table = in.table("coupling", "T_d,dT_d");

  auto& ifm = cfg.interferometer;
  ifm.a_left = in.complex("interferometer", "a_left").value_or(ifm.a_left);
  ifm.delta_b_mt = in.number("interferometer", "delta_b_mT", ifm.delta_b_mt);
  ifm.v_e_uv = in.number("interferometer", "v_e_uV", ifm.v_e_uv);
  ifm.background = in.number("interferometer", "background", ifm.background);
  const auto a_right = in.complex("interferometer", "a_right");
  const auto nu0 = in.optional_number("interferometer", "bare_visibility");
  if (a_right && nu0) {
    invalid("interferometer.bare_visibility", in.line("interferometer.bare_visibility"),
            "give either a_right or bare_visibility, not both");
  }
  if (a_right) {
    ifm.a_right = *a_right;
  } else {
    const double target = nu0.value_or(default_bare_visibility);
    if (!(target >= 0.0 && target <= 1.0)) {
      invalid("interferometer.bare_visibility", in.line("interferometer.bare_visibility"),
              "must lie in [0, 1]");
    }
    const Complex left = ifm.a_left;
    ifm = with_bare_visibility(ifm, target);
    // keep the configured left phase; only the magnitude ratio matters
    ifm.a_right *= std::polar(1.0, std::arg(left));
    ifm.a_left = left;
  }

  cfg.bias.v_d_uv = in.number("bias", "v_d_uV", cfg.bias.v_d_uv);
  if (auto values = in.number_list("bias", "values_uV")) cfg.bias_values_uv = *values;

  cfg.sweep.axis = parse_axis(in.required_text("sweep", "axis"), in.line("sweep.axis"));
  cfg.sweep.lo = in.required_number("sweep", "lo");
  cfg.sweep.hi = in.required_number("sweep", "hi");
  const auto n_points = in.required_unsigned("sweep", "n_points");
  cfg.sweep.n_points = static_cast<std::size_t>(n_points);

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const int line = in.line(e.field());
    if (line > 0 && e.line() == 0) throw ConfigError(e.kind(), e.field(), line, with_line(e.what(), line));
    throw;
  }
  return cfg;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(Kind::io, path.string(), 0, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json table_to_json(const InterpolationTable& table) {
  Json rows = Json::array();
  for (const auto& p : table.points()) rows.push_back({p.x, p.y});
  return rows;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::field: return "field";
    case SweepAxis::plunger: return "plunger";
    case SweepAxis::qpc_gate: return "qpc_gate";
    case SweepAxis::bias: return "bias";
  }
  return "unknown";
}

std::string_view to_string(DephasingForm form) {
  return form == DephasingForm::linear ? "linear" : "exact";
}

double ExperimentConfig::operating_gate_v() const {
  return operating_t_d ? gate_for_transmission(qpc, *operating_t_d) : qpc_gate_v;
}

void ExperimentConfig::validate() const {
  auto wrap = [](const char* section, auto&& check) {
    try {
      check();
    } catch (const DomainError& e) {
      throw ConfigError(Kind::invalid_value, section, 0, std::string(section) + ": " + e.what());
    }
  };
  wrap("dot", [&] { dot.validate(); });
  wrap("qpc", [&] { qpc.validate(); });
  wrap("coupling", [&] { coupling.validate(); });
  wrap("interferometer", [&] { interferometer.validate(); });
  if (operating_t_d && !(*operating_t_d > 0.0 && *operating_t_d < 1.0)) {
    invalid("qpc.operating_T_d", 0, "must lie strictly inside (0, 1)");
  }
  if (!std::isfinite(qpc_gate_v)) invalid("qpc.v_g_V", 0, "must be finite");
  if (!(bias.v_d_uv >= 0.0)) invalid("bias.v_d_uV", 0, "must be >= 0");
  if (bias_values_uv.empty()) invalid("bias.values_uV", 0, "needs at least one value");
  for (double v : bias_values_uv) {
    if (!(v >= 0.0)) invalid("bias.values_uV", 0, "values must be >= 0");
  }
  if (sweep.n_points < 2) invalid("sweep.n_points", 0, "must be >= 2");
  if (!(sweep.lo < sweep.hi)) invalid("sweep.lo", 0, "sweep requires lo < hi");
  if (sweep.axis == SweepAxis::bias && sweep.lo < 0.0) {
    invalid("sweep.lo", 0, "bias sweep must start at >= 0 uV");
  }
  if (!(noise_amplitude >= 0.0)) invalid("noise_amplitude", 0, "must be >= 0");
}

ExperimentConfig parse_config(std::string_view text, std::span<const std::string> overrides,
                              std::string_view source, const std::filesystem::path& base_dir) {
  toml::table tbl;
  try {
    tbl = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    const int line = static_cast<int>(e.source().begin.line);
    std::ostringstream msg;
    msg << source << ":" << line << ": " << e.description();
    throw ConfigError(Kind::parse, std::string(source), line, msg.str());
  }
  LineMap lines;
  Json doc = toml_to_json(tbl, "", lines);
  apply_overrides(doc, overrides);
  return build(doc, lines, base_dir);
}

ExperimentConfig config_from_json(const Json& doc, std::span<const std::string> overrides) {
  if (!doc.is_object()) throw ConfigError(Kind::parse, "", 0, "config JSON must be an object");
  Json copy = doc.contains("meta") ? doc.at("meta").at("config") : doc;
  apply_overrides(copy, overrides);
  const LineMap no_lines;
  return build(copy, no_lines, {});
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::span<const std::string> overrides) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ConfigError(Kind::parse, path.string(), 0, path.string() + ": " + e.what());
    }
    return config_from_json(doc, overrides);
  }
  return parse_config(text, overrides, path.string(), path.parent_path());
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json doc;
  doc["seed"] = cfg.seed;
  doc["noise_amplitude"] = cfg.noise_amplitude;
  doc["dephasing_form"] = std::string(to_string(cfg.dephasing_form));
  doc["dot"] = {{"gamma_ueV", cfg.dot.gamma_uev},
                {"peak_spacing_V", cfg.dot.peak_spacing_v},
                {"peak_offset_V", cfg.dot.peak_offset_v},
                {"lever_arm", cfg.dot.lever_arm},
                {"theta_mK", cfg.dot.theta_mk},
                {"peak_conductance", cfg.dot.peak_conductance}};
  Json qpc;
  qpc["model"] = cfg.qpc.model == TransmissionModel::logistic ? "logistic" : "table";
  qpc["v_half_V"] = cfg.qpc.v_half;
  qpc["width_V"] = cfg.qpc.width;
  if (cfg.qpc.table) qpc["table"] = table_to_json(*cfg.qpc.table);
  qpc["v_g_V"] = cfg.qpc_gate_v;
  if (cfg.operating_t_d) qpc["operating_T_d"] = *cfg.operating_t_d;
  doc["qpc"] = std::move(qpc);

  Json coupling;
  switch (cfg.coupling.kind) {
    case CouplingKind::gate_shift: coupling["kind"] = "gate_shift"; break;
    case CouplingKind::saturating: coupling["kind"] = "saturating"; break;
    case CouplingKind::table: coupling["kind"] = "table"; break;
  }
  coupling["delta_v_V"] = cfg.coupling.delta_v;
  coupling["c"] = cfg.coupling.c;
  coupling["s"] = cfg.coupling.s;
  coupling["eta_shift"] = cfg.coupling.eta_shift;
  if (cfg.coupling.table) coupling["table"] = table_to_json(*cfg.coupling.table);
  doc["coupling"] = std::move(coupling);

  const auto& ifm = cfg.interferometer;
  doc["interferometer"] = {{"a_left", {ifm.a_left.real(), ifm.a_left.imag()}},
                           {"a_right", {ifm.a_right.real(), ifm.a_right.imag()}},
                           {"delta_b_mT", ifm.delta_b_mt},
                           {"v_e_uV", ifm.v_e_uv},
                           {"background", ifm.background}};
  doc["bias"] = {{"v_d_uV", cfg.bias.v_d_uv}, {"values_uV", cfg.bias_values_uv}};
  doc["sweep"] = {{"axis", std::string(to_string(cfg.sweep.axis))},
                  {"lo", cfg.sweep.lo},
                  {"hi", cfg.sweep.hi},
                  {"n_points", cfg.sweep.n_points}};
  return doc;
}

}  // namespace qpcd
