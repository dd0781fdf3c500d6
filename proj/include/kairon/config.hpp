#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kairon/expr.hpp"
#include "kairon/field.hpp"
#include "kairon/geometry.hpp"
#include "kairon/poincare.hpp"

namespace kairon {

// Configuration / usage problems map to process exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorldlineConfig {
  std::string kind = "time_axis";  // time_axis | straight_line
  std::vector<double> beta;        // straight_line
  std::vector<double> base;        // straight_line, optional (defaults to 0)

  Worldline build(int m) const;
};

struct GridAxis {
  double min = -3.0;
  double max = 3.0;
  int count = 61;
};

struct PropagateConfig {
  double x0 = 0.0;
  std::vector<GridAxis> grid;           // one entry per spatial axis
  std::string mode = "intensity";       // intensity | fixed_direction
  std::vector<double> direction;        // fixed_direction
};

struct TransformStep {
  std::string type;                // boost | rotation | translation
  std::vector<double> direction;   // boost
  double rapidity = 0.0;           // boost
  int axis_i = 1, axis_j = 2;      // rotation
  double angle = 0.0;              // rotation
  std::vector<double> offset;      // translation (m+1 components)

  PoincareTransform build(int m) const;
};

struct QuadratureConfig {
  int sphere_resolution = 0;  // 0 = per-m default (512 / 32)
  int s_steps = 1200;
  int loop_steps = 2000;
  int t_steps = 2000;
  std::array<double, 2> s_window{-8.0, 8.0};
  std::array<double, 2> t_window{-4.0, 4.0};

  int resolved_sphere_resolution(int m) const;
};

struct SampleConfig {
  int group = 1000;        // random group elements in algebra suites
  int jacobian = 100;      // random (L, w) pairs for the measure transform
  std::int64_t mc = 200000;
  int field_points = 100;  // random (x, w) probes
  double rapidity = 2.0;   // rapidity bound for random group elements
};

struct RunConfig {
  int m = 2;
  std::uint64_t seed = 1;
  std::string initial_data_source = "bump(t)";
  std::optional<std::array<double, 2>> support;
  WorldlineConfig worldline;
  QuadratureConfig quadrature;
  SampleConfig samples;
  std::vector<TransformStep> transforms;
  std::map<std::string, double> tolerance_overrides;
  double tolerance_scale = 1.0;
  PropagateConfig propagate;
  std::vector<WorldlineConfig> inner_product_worldlines;
  std::string report_path;  // empty = stdout only
  std::string csv_path;

  // Parses and validates; throws ConfigError with a diagnostic.
  static RunConfig from_json(const nlohmann::ordered_json& j);
  static RunConfig load_file(const std::string& path);
  static RunConfig defaults(int m);

  // Canonical serialization with every default materialized; reports echo it.
  nlohmann::ordered_json echo() const;
  // FNV-1a 64 over the canonical serialization, as 16 hex digits.
  std::string hash() const;

  Expression parsed_initial_data() const;
  InitialData initial_data() const;
  Worldline build_worldline() const { return worldline.build(m); }
};

std::string fnv1a_hex(const std::string& bytes);

}  // namespace kairon
