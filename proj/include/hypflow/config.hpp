#pragma once

// Declarative run configuration: a small TOML subset (sections, key = value,
// strings, numbers, booleans, nested arrays, # comments) flattened to
// dotted keys, plus the RunConfig all CLI verbs consume.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hypflow/geometry.hpp"

namespace hypflow {

struct TomlValue {
  enum class Kind { string, integer, floating, boolean, array };
  Kind kind = Kind::string;
  std::string str;
  int64_t integer = 0;
  double floating = 0.0;
  bool boolean = false;
  std::vector<TomlValue> array;

  double as_double() const;
  int64_t as_int() const;
};

using TomlTable = std::map<std::string, TomlValue>;

TomlTable parse_toml(const std::string& text);
TomlTable parse_toml_file(const std::string& path);

struct Thresholds {
  double divergence_epsilon = 0.01;
  double conical_plateau_rel = 0.05;
  double conical_c_factor = 3.0;
  double myrberg_eps = 0.2;
  double shadow_R = 1.5;
  double auto_s_margin = 0.05;
};

struct RunConfig {
  std::string preset = "modular";
  std::vector<std::array<double, 4>> generators;  // inline group, row-major
  double ell = 2.0;
  double lambda = 3.0;

  cplx p_half{0.0, 1.0};   // half-plane base points
  cplx q_half{0.0, 1.0};
  cplx p2_half{0.0, 13.0 / 7.0};  // second base point for the cocycle audit

  double radius = 12.0;
  double s = -1.0;  // <= 0 means "auto": counting estimate + auto_s_margin
  size_t bins = 1024;
  size_t samples = 50;
  uint64_t seed = 20240601;
  size_t max_elements = 16'000'000;
  size_t svg_max_points = 4000;
  Thresholds thresholds;
  std::string out = "out";

  void validate() const;
};

RunConfig config_from_toml(const TomlTable& table);
RunConfig config_from_file(const std::string& path);

}  // namespace hypflow
