#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace qkflag::cli {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kResource = 3 };

/// Everything a run depends on. Serialized into every report; a config file
/// uses the same fields.
struct RunConfig {
  std::string command;
  std::string shape;
  bool equivariant = true;
  std::vector<std::string> lambda;  // explicit Λ_1..Λ_N
  std::optional<std::uint64_t> seed;
  std::vector<std::string> q;
  int cap = 3;
  double tolerance = 1e-8;
  int steps = 32;
  bool force = false;
  int point = 0;  // jfun: 1-based fixed point, 0 for the distinguished one
  std::string presentation;  // verify: file to check instead of a shape
  std::string format = "json";
  std::string out;  // present: directory; otherwise report file ("" = stdout)

  nlohmann::json to_json() const;
  /// Fields absent from `doc` keep their current values.
  void merge(const nlohmann::json& doc);
};

/// Parses args (args[0] is the program name), runs the subcommand, writes
/// the report. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkflag::cli
