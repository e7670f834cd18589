#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpcd/interferometer.hpp"
#include "qpcd/qpc_detector.hpp"
#include "qpcd/quantum_dot.hpp"
#include "qpcd/sweep_result.hpp"

namespace qpcd {

enum class SweepAxis { field, plunger, qpc_gate, bias };
enum class DephasingForm { linear, exact };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(DephasingForm form);

struct SweepSpec {
  SweepAxis axis = SweepAxis::field;
  double lo = 0.0;  // mT, V, V or uV depending on the axis
  double hi = 1.0;
  std::size_t n_points = 2;
};

struct ExperimentConfig {
  DotModel dot;
  QpcTransmissionCurve qpc;
  double qpc_gate_v = 0.188;
  // When set, the QPC gate is chosen so that T_d equals this value.
  std::optional<double> operating_t_d;
  CouplingModel coupling;
  InterferometerModel interferometer;
  DetectorBias bias{100.0};
  std::vector<double> bias_values_uv{10.0, 100.0};  // gate-sweep curves
  SweepSpec sweep;
  std::uint64_t seed = 12345;
  double noise_amplitude = 0.0;
  DephasingForm dephasing_form = DephasingForm::linear;

  // Gate voltage actually used for the detector operating point.
  double operating_gate_v() const;

  // Throws ConfigError(invalid_value) naming the field path.
  void validate() const;
};

/// Parses TOML-syntax text with sections [dot] [qpc] [coupling]
/// [interferometer] [bias] [sweep] and top-level keys. `overrides` are
/// "section.key=value" strings applied on top (value in TOML syntax).
/// Unspecified optional fields take defaults; sweep.axis/lo/hi/n_points are
/// required. Relative table paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view text, std::span<const std::string> overrides = {},
                              std::string_view source = "<config>",
                              const std::filesystem::path& base_dir = {});

/// Loads a TOML config file, or a JSON document carrying a config echo
/// (either a sweep output with meta.config or a bare config object).
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::span<const std::string> overrides = {});

/// Config from the nested JSON echo produced by config_to_json.
ExperimentConfig config_from_json(const Json& doc, std::span<const std::string> overrides = {});

// Fully explicit echo (all defaults materialised, tables inlined).
Json config_to_json(const ExperimentConfig& cfg);

}  // namespace qpcd
