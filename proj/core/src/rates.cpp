#include "ldpnet/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ldpnet/rng.hpp"

namespace ldpnet {

RateValue rate_node(const ConnectionKernel& kernel, double alpha,
                    const std::optional<CircleDensity>& mu, int bins) {
  RateValue out;
  if (!mu) {
    out.degenerate = true;
    out.mass_term = kernel_mass(kernel, alpha, bins);
    out.exponential_term = 0.0;
    out.value = out.mass_term;
    return out;
  }
  auto diag = validate_density(*mu);
  if (!diag.finite) throw std::invalid_argument("non-finite density");
  if (!diag.negative_bins.empty())
    throw std::invalid_argument("negative density");
  const int M = mu->bins();
  auto C = kernel.row(alpha, M);
  std::vector<double> integrand(M);
  for (int i = 0; i < M; ++i)
    integrand[i] = xlog_ratio(mu->values[i], C[i]);
  const double R = circle_mean(std::span<const double>(integrand));
  out.mass_term = circle_mean(std::span<const double>(C));
  out.exponential_term = std::exp(-R);
  out.value = out.mass_term - out.exponential_term;
  return out;
}

double rate_population(const ConnectionKernel& kernel,
                       const PopulationMeasure& pm, int bins) {
  double total = 0.0;
  for (const auto& a : pm.atoms)
    total += a.weight * rate_node(kernel, a.theta, a.density, bins).value;
  return total;
}

double rate_plus(const ConnectionKernel& kernel, double alpha,
                 const MassDensity& gamma) {
  auto diag = validate_density(gamma);
  if (!diag.finite) throw std::invalid_argument("non-finite density");
  if (!diag.negative_bins.empty())
    throw std::invalid_argument("negative density");
  const int M = gamma.bins();
  auto C = kernel.row(alpha, M);
  std::vector<double> integrand(M);
  for (int i = 0; i < M; ++i) {
    const double g = gamma.values[i];
    integrand[i] = xlog_ratio(g, C[i]) - g + C[i];
  }
  return circle_mean(std::span<const double>(integrand));
}

double lmgf(const ConnectionKernel& kernel, double alpha,
            const GridFunction& h) {
  const int M = h.bins();
  auto C = kernel.row(alpha, M);
  std::vector<double> integrand(M);
  double hmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < M; ++i) {
    hmax = std::max(hmax, h.values[i]);
    integrand[i] = C[i] * std::expm1(h.values[i]);
    if (!std::isfinite(integrand[i])) {
      std::ostringstream msg;
      msg << "overflow in exp(h), max h = " << std::max(hmax, h.values[i]);
      throw std::invalid_argument(msg.str());
    }
  }
  return circle_mean(std::span<const double>(integrand));
}

double legendre_gap(const ConnectionKernel& kernel, double alpha,
                    const MassDensity& gamma, const GridFunction& h) {
  if (gamma.bins() != h.bins())
    throw std::invalid_argument("grid size mismatch");
  const int M = gamma.bins();
  std::vector<double> gh(M);
  for (int i = 0; i < M; ++i) gh[i] = gamma.values[i] * h.values[i];
  return circle_mean(std::span<const double>(gh)) - lmgf(kernel, alpha, h);
}

GridFunction optimal_test_function(const ConnectionKernel& kernel, double alpha,
                                   const MassDensity& gamma, double floor) {
  const int M = gamma.bins();
  auto C = kernel.row(alpha, M);
  GridFunction h;
  h.values.resize(M);
  for (int i = 0; i < M; ++i)
    h.values[i] = std::log(std::max(gamma.values[i], floor) / C[i]);
  return h;
}

double scale_objective(const ConnectionKernel& kernel, double alpha,
                       const CircleDensity& zeta, double a) {
  if (a <= 0.0) throw std::invalid_argument("scale must be positive");
  MassDensity g;
  g.values.resize(zeta.values.size());
  for (size_t i = 0; i < g.values.size(); ++i) g.values[i] = a * zeta.values[i];
  return rate_plus(kernel, alpha, g);
}

OptimalScale optimal_scale(const ConnectionKernel& kernel, double alpha,
                           const CircleDensity& zeta) {
  const int M = zeta.bins();
  auto C = kernel.row(alpha, M);
  std::vector<double> integrand(M);
  for (int i = 0; i < M; ++i)
    integrand[i] = -xlog_ratio(zeta.values[i], C[i]);
  OptimalScale out;
  out.a_star = std::exp(circle_mean(std::span<const double>(integrand)));
  out.check = scale_objective(kernel, alpha, zeta, out.a_star);
  return out;
}

namespace {

// R(p) = sum_i p_i log(M p_i / C_i) over bin masses p on the simplex.
// rate_node is c-bar - exp(-R), monotone in R, so descending R suffices.
double entropy_objective(const std::vector<double>& p,
                         const std::vector<double>& C) {
  const double M = static_cast<double>(p.size());
  double r = 0.0;
  for (size_t i = 0; i < p.size(); ++i) r += xlog_ratio(M * p[i], C[i]) / M;
  return r;
}

// Scale constrained arcs up to their thresholds, renormalize the complement.
void project_feasible(std::vector<double>& p,
                      const std::vector<std::vector<int>>& arc_bins,
                      const std::vector<double>& lambdas,
                      const std::vector<char>& constrained) {
  double tot = 0.0;
  for (double v : p) tot += v;
  if (tot <= 0.0) {
    std::fill(p.begin(), p.end(), 1.0 / p.size());
    tot = 1.0;
  }
  for (double& v : p) v /= tot;

  double fixed = 0.0;
  for (size_t a = 0; a < arc_bins.size(); ++a) {
    double mass = 0.0;
    for (int i : arc_bins[a]) mass += p[i];
    if (mass < lambdas[a]) {
      if (mass <= 0.0) {
        const double w = lambdas[a] / arc_bins[a].size();
        for (int i : arc_bins[a]) p[i] = w;
      } else {
        const double s = lambdas[a] / mass;
        for (int i : arc_bins[a]) p[i] *= s;
      }
      mass = lambdas[a];
    }
    fixed += mass;
  }
  double rest = 0.0;
  for (size_t i = 0; i < p.size(); ++i)
    if (!constrained[i]) rest += p[i];
  const double want = 1.0 - fixed;
  if (rest > 0.0 && want >= 0.0) {
    const double s = want / rest;
    for (size_t i = 0; i < p.size(); ++i)
      if (!constrained[i]) p[i] *= s;
  } else if (want > 0.0) {
    // All mass sits in constrained arcs; spread the remainder uniformly.
    int free_bins = 0;
    for (char c : constrained)
      if (!c) ++free_bins;
    if (free_bins > 0) {
      const double w = want / free_bins;
      for (size_t i = 0; i < p.size(); ++i)
        if (!constrained[i]) p[i] = w;
    }
  }
}

}  // namespace

double arc_event_rate(const ConnectionKernel& kernel, double alpha,
                      const std::vector<ArcConstraint>& constraints, int bins,
                      uint64_t seed, int starts, int max_iter) {
  if (bins < 2) throw std::invalid_argument("bins must be >= 2");
  double lam_sum = 0.0;
  for (const auto& c : constraints) {
    if (c.lambda < 0.0 || c.hi <= c.lo)
      throw std::invalid_argument("invalid arc constraint");
    lam_sum += c.lambda;
  }
  if (lam_sum >= 1.0) throw std::invalid_argument("infeasible constraints");

  const auto mids = grid_midpoints(bins);
  auto C = kernel.row(alpha, bins);
  const double cbar = circle_mean(std::span<const double>(C));

  std::vector<std::vector<int>> arc_bins(constraints.size());
  std::vector<double> lambdas(constraints.size());
  std::vector<char> constrained(bins, 0);
  for (size_t a = 0; a < constraints.size(); ++a) {
    lambdas[a] = constraints[a].lambda;
    for (int i = 0; i < bins; ++i)
      if (mids[i] >= constraints[a].lo && mids[i] < constraints[a].hi) {
        arc_bins[a].push_back(i);
        constrained[i] = 1;
      }
    if (arc_bins[a].empty() && lambdas[a] > 0.0)
      throw std::invalid_argument("arc resolves to no grid bins");
  }

  const double Md = static_cast<double>(bins);
  const double pfloor = 1e-14 / Md;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    SubstreamRng rng(seed, stream::kMultistart, static_cast<uint64_t>(s));
    std::vector<double> p(bins);
    if (s == 0) {
      std::fill(p.begin(), p.end(), 1.0 / Md);
    } else {
      for (double& v : p) v = -std::log(std::max(rng.uniform(), 1e-12));
    }
    project_feasible(p, arc_bins, lambdas, constrained);
    double obj = entropy_objective(p, C);

    double step = 0.1;
    std::vector<double> grad(bins), trial(bins);
    for (int it = 0; it < max_iter && step > 1e-14; ++it) {
      for (int i = 0; i < bins; ++i)
        grad[i] = (std::log(Md * std::max(p[i], pfloor) / C[i]) + 1.0) / Md;
      double gnorm = 0.0;
      for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
      if (gnorm <= 0.0) break;

      bool improved = false;
      while (step > 1e-14) {
        for (int i = 0; i < bins; ++i)
          trial[i] = std::max(0.0, p[i] - step * grad[i] / gnorm);
        project_feasible(trial, arc_bins, lambdas, constrained);
        const double t = entropy_objective(trial, C);
        if (t < obj - 1e-15) {
          p = trial;
          obj = t;
          improved = true;
          step *= 1.5;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    best = std::min(best, obj);
  }
  return cbar - std::exp(-best);
}

}  // namespace ldpnet
