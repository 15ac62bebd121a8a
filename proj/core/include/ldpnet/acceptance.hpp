#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ldpnet {

struct AcceptanceOptions {
  int bins = 1024;          // quadrature grid for rate criteria
  uint64_t seed = 20240817;
  int legendre_pairs = 1000;
  long long mc_trials = 100000;
  int mc_seeds = 20;
  int ot_instances = 100;
  int threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Criterion ids and names, in run order.
std::vector<std::pair<int, std::string>> acceptance_list();

// Runs the listed criteria (all when `only` is empty) at the configured
// scale. Never throws for a failing criterion; failures carry detail text.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::vector<int>& only = {});

}  // namespace ldpnet
