#pragma once

// Command-line front end: holo [--workers N] [--config FILE] [--out DIR] <synth|figure|verify>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "holo/models.hpp"
#include "holo/pathsynth.hpp"

namespace holo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCriterion = 1;
inline constexpr int kExitConfig = 2;

/// Bad user input; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "0.25pi", "pi", "-0.5pi", "1.2" (radians).
double parse_angle(const std::string& text, const std::string& field = "angle");

/// "rx:0.5pi", "ry:0.25pi", "rz:0", or "n:theta,phi,gamma".
GateSpec parse_gate(const std::string& text, const std::string& field = "gate");

struct FileConfig {
  ModelConfig model;
  int workers = 1;
  std::string output = "out";
};

/// Keys: model (see ModelConfig), workers, output. Unknown keys are rejected.
FileConfig load_config(const std::string& path);

const std::vector<std::string>& figure_ids();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holo::cli
