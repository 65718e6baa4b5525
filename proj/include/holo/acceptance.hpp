#pragma once

// Acceptance suite shared by `holo verify` and the acceptance test binary.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace holo {

struct CriterionResult {
  int number = 0;
  std::string id;
  std::string title;
  bool passed = false;
  nlohmann::json measured = nlohmann::json::object();
  std::string summary;
  double runtime_seconds = 0.0;

  nlohmann::json to_json() const;
};

struct AcceptanceOptions {
  int workers = 1;
  /// Expected K11/A11 ratio; replaceable for fault injection.
  std::function<double(double)> eta;
};

struct CriterionInfo {
  int number;
  std::string id;
  std::string title;
};

const std::vector<CriterionInfo>& acceptance_criteria();

/// Accepts an id ("area-law") or a number ("2"). Throws std::invalid_argument otherwise.
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& options = {});

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only = {},
                                            const AcceptanceOptions& options = {});

/// One line per criterion: "[PASS] 2 area-law: ...".
std::string format_line(const CriterionResult& result);

}  // namespace holo
