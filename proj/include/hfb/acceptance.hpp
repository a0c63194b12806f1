#pragma once

#include <string>
#include <vector>

namespace hfb {

/// One line of the selftest battery: a numbered check, its verdict, and a
/// one-line measurement trail.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the full battery (checks 1..12) at desk scale.  The extended battery
/// repeats the resolution-sensitive checks one refinement level up.  Solves
/// are cached within a run, and the determinism check (12) re-runs everything
/// from a cold cache, so a full battery costs two passes.
std::vector<CriterionResult> run_acceptance(bool extended = false);

/// Runs a single check by id (1..12); throws ConfigError outside that range.
CriterionResult run_criterion(int id, bool extended = false);

/// Canonical JSON array for a battery outcome.  Contains no timing and no
/// environment data, so equal outcomes serialize to equal bytes.
std::string acceptance_json(const std::vector<CriterionResult>& results);

}  // namespace hfb
