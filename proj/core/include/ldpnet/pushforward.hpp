#pragma once

#include <string>
#include <vector>

#include "ldpnet/measures.hpp"

namespace ldpnet {

struct PushforwardConfig {
  double T = 1.0;
  int m = 1;           // Euler step count, dt = T/m
  double tol = 1e-3;   // convergence tolerance for the doubling ladder
  int m_cap = 1 << 14; // refuse beyond this step count
};

// m-step Euler push-forward Psi_m on an empirical network measure: the
// canonical path is simulate(scheme=euler, steps=m) + path_empirical.
PathMeasure psi_m(const NestedEmpiricalMeasure& nu, const VectorFieldPair& fields,
                  const PushforwardConfig& cfg);

struct PsiLimitResult {
  PathMeasure paths;
  int m_final = 0;
  std::vector<int> ladder_m;       // coarser member of each compared pair
  std::vector<double> ladder_gap;  // d_W(Psi_m, Psi_2m)
  double achieved_gap = 0.0;
};

// Doubles m until d_W(Psi_m nu, Psi_2m nu) < tol; returns the finer result.
// Throws "no convergence at cap" (with the achieved gap in the message) when
// the cap is hit first.
PsiLimitResult psi_limit(const NestedEmpiricalMeasure& nu,
                         const VectorFieldPair& fields,
                         const PushforwardConfig& cfg);

struct FactorizationReport {
  int nodes = 0;
  int m = 0;
  double gap = 0.0;  // path-Wasserstein between the two routes
  std::string to_json() const;
};

// Computes Psi_m two ways: (a) direct coupled Euler on the graph, (b) the
// nested recursion on the explicit depth-m unroll, one Euler step per level
// against the branch's own sub-measure. Requires 2n+1 <= 50 and m <= 3.
FactorizationReport factorization_check(const GraphSample& g,
                                        const InitialCondition& init,
                                        const VectorFieldPair& fields,
                                        const PushforwardConfig& cfg);

struct LadderReport {
  std::vector<int> ms;
  std::vector<double> gaps;  // d_W(Psi_m nu, Psi_ref nu) per m
  double slope = 0.0;        // log-log fit of gap vs m
  double final_distance = 0.0;
  std::string to_json() const;
};

// Uniform Euler ladder: distances of Psi_m to the finest member over a
// doubling schedule, with the fitted log-log slope.
LadderReport euler_ladder(const NestedEmpiricalMeasure& nu,
                          const VectorFieldPair& fields, double T, int m_first,
                          int doublings);

}  // namespace ldpnet
