#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldpnet/circle.hpp"

namespace ldpnet {

struct RateValue {
  double value = 0.0;
  double mass_term = 0.0;         // c-bar(alpha)
  double exponential_term = 0.0;  // exp(-R); 0 in the degenerate branch
  bool degenerate = false;        // no-density input
};

// Weighted atoms (theta_j, density or degenerate flag) realizing a population
// measure on S^1 x P(S^1).
struct PopulationMeasure {
  struct Atom {
    double theta;
    std::optional<CircleDensity> density;  // nullopt = no-density branch
    double weight;
  };
  std::vector<Atom> atoms;
};

// Node-level rate I_alpha: c-bar - exp(-R) with R the entropy-like integral,
// or just c-bar when the measure has no density. `bins` is the quadrature
// resolution for the degenerate branch (density inputs use their own grid).
RateValue rate_node(const ConnectionKernel& kernel, double alpha,
                    const std::optional<CircleDensity>& mu, int bins = 1024);

double rate_population(const ConnectionKernel& kernel,
                       const PopulationMeasure& pm, int bins = 1024);

// Rate on positive measures: circle_mean of gamma log(gamma/C) - gamma + C.
double rate_plus(const ConnectionKernel& kernel, double alpha,
                 const MassDensity& gamma);

// Log moment generating functional: circle_mean of C (e^h - 1).
double lmgf(const ConnectionKernel& kernel, double alpha, const GridFunction& h);

// Legendre pairing E[h w] - Lambda = circle_mean(gamma h) - lmgf(h);
// dominated by rate_plus for every h, tight at h* = log(gamma/C).
double legendre_gap(const ConnectionKernel& kernel, double alpha,
                    const MassDensity& gamma, const GridFunction& h);

// Maximizing test function, with a floor on zero-gamma bins.
GridFunction optimal_test_function(const ConnectionKernel& kernel, double alpha,
                                   const MassDensity& gamma,
                                   double floor = 1e-300);

struct OptimalScale {
  double a_star = 0.0;
  double check = 0.0;  // Gamma(a_star), equals rate_node value
};

// Closed-form optimal mass scale a* = exp(circle_mean(zeta log(C/zeta))),
// with Gamma(a) = rate_plus evaluated at a*zeta.
OptimalScale optimal_scale(const ConnectionKernel& kernel, double alpha,
                           const CircleDensity& zeta);

double scale_objective(const ConnectionKernel& kernel, double alpha,
                       const CircleDensity& zeta, double a);

struct ArcConstraint {
  double lo = 0.0;  // arc [lo, hi) in (-pi, pi], non-wrapping
  double hi = 0.0;
  double lambda = 0.0;
};

// Minimal node rate over densities whose arc masses meet the thresholds,
// by multistart projected descent on the bin simplex. Deterministic per seed.
double arc_event_rate(const ConnectionKernel& kernel, double alpha,
                      const std::vector<ArcConstraint>& constraints, int bins,
                      uint64_t seed = 0, int starts = 20, int max_iter = 10000);

}  // namespace ldpnet
