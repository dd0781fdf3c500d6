#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kairon/config.hpp"

namespace kairon {

inline constexpr const char* kVersionStamp = "kairon 1.0.0";

struct CheckRecord {
  std::string name;
  std::string anchor;  // the identity being checked, stated as a formula
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string version = kVersionStamp;
  std::string config_hash;
  int m = 0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  nlohmann::ordered_json config_echo;

  bool all_pass() const;
  nlohmann::ordered_json to_json() const;
};

// Runs the full invariant suite for the configured m; deterministic given
// (config, seed).
VerificationReport run_verification(const RunConfig& config);

}  // namespace kairon
