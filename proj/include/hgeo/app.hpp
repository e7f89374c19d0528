#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hgeo/config.hpp"
#include "hgeo/solvers.hpp"

namespace hgeo {

/// Full pipeline for one configuration: multistart enumeration, then the
/// Case 1 construction when the Killing form vanishes on m or the
/// variational critical-point search otherwise. New rays from the second
/// stage are merged (dedup by angle) and the theorem audit is recomputed.
SolveReport run_solve(const ProblemConfig& config);
SolveReport run_solve(const Problem& problem, const ProblemConfig& config);

struct SweepTrial {
  std::string family;
  double a = 0, b = 0, c = 0;
  Vec drift;
  bool infinite = false;
  int count = 0;
  int required_minimum = 0;
  bool pass = false;
  std::string error;  // non-empty when the solve threw
};

struct SweepSummary {
  std::string family;
  int trials = 0;
  std::uint64_t rng_seed = 0;
  int min_count = 0;  // over finite counts; see all_infinite
  int max_count = 0;
  bool any_infinite = false;
  bool all_infinite = false;
  int failures = 0;
  std::map<std::string, int> distribution;  // "2", "4", ..., "infinity"
  std::vector<SweepTrial> results;          // in trial order
};

/// Randomized theorem audit. family is so3, sl2, heisenberg or mixed.
/// Parameters a, b, c ~ U[0.2, 5] (heisenberg uses a as bracket scale),
/// alpha = I and V uniform in the ball alpha(V,V) <= 0.8. Trials run
/// concurrently; results are ordered by trial index. `base` supplies the
/// solver settings for every trial (its rng_seed is reused per trial).
SweepSummary run_audit_sweep(const std::string& family, int trials, std::uint64_t rng_seed,
                             const SolveConfig& base);
std::string sweep_to_json(const SweepSummary& summary);

struct VerifyOutcome {
  bool pass = true;
  int rays_checked = 0;
  double max_residual = 0.0;
  double max_indicatrix_error = 0.0;
  std::vector<std::string> problems;
};

/// Independently re-evaluates every ray of a saved report against the
/// problem described by config, and re-derives the audit verdict.
VerifyOutcome verify_report(const SolveReport& report, const ProblemConfig& config);

}  // namespace hgeo
