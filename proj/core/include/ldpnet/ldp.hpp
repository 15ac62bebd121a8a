#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldpnet/circle.hpp"
#include "ldpnet/graph.hpp"
#include "ldpnet/rates.hpp"

namespace ldpnet {

struct Arc {
  double lo = 0.0;  // [lo, hi) in (-pi, pi]
  double hi = 0.0;
};

// Rare event on one node's in-row: either a degree tail (in-degree count,
// self-loop included, at or below a mass threshold times rho(2n+1)) or arc
// occupancy (each arc's neighbor fraction at or above its threshold).
struct EventSpec {
  enum class Kind { kDegreeTail, kArcOccupancy };
  Kind kind = Kind::kDegreeTail;
  int j = 0;  // target node index in {-n..n}

  // degree tail; self_loop_only pins the count threshold at exactly 1
  double threshold_mass = 0.0;
  bool self_loop_only = false;

  // arc occupancy
  std::vector<Arc> arcs;
  std::vector<double> lambdas;

  int count_threshold(int n, double rho) const;
  std::string to_json() const;
};

struct ScanRow {
  int n = 0;
  double rho = 0.0;
  double speed = 0.0;  // rho * (2n+1), node-level
  double logp = 0.0;
  double normalized = 0.0;  // logp / speed
  double predicted = 0.0;   // -inf of the rate over the event
  double gap = 0.0;         // normalized - predicted
  bool zero_prob = false;   // exact probability underflowed to 0
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double measure_speed_exponent = 2.0;  // full-measure speed rho(2n+1)^2, recorded
  std::string csv() const;              // header + fixed column order
};

// Exact per-arc in-row count distributions (Poisson-binomial convolution DP).
// Arcs must partition the circle; the self-loop counts deterministically in
// the arc holding theta_j. Requires n <= 2*10^4.
std::vector<std::vector<double>> arc_count_law(const ConnectionKernel& kernel,
                                               int n, double rho, int j,
                                               const std::vector<Arc>& arcs);

double exact_event_prob(const EventSpec& spec, const ConnectionKernel& kernel,
                        int n, double rho);

// Log of the exact probability; -inf when the event is impossible. The
// self-loop-only tail is accumulated directly in log space so scan columns
// survive probabilities far below 1e-300.
double exact_event_logp(const EventSpec& spec, const ConnectionKernel& kernel,
                        int n, double rho);

struct McEstimate {
  double estimate = 0.0;
  double lo = 0.0;  // 95% Wilson score interval
  double hi = 0.0;
  long long hits = 0;
  long long trials = 0;
};

// Row-local Monte Carlo: resamples only node j's in-row per trial with
// counter-based substreams, so results are seed-deterministic and independent
// of thread count.
McEstimate mc_event_prob(const EventSpec& spec, const ConnectionKernel& kernel,
                         int n, double rho, long long trials, uint64_t seed,
                         int threads = 1);

// Upper-tail bound P(count > m_thr * rho * (2n+1)) <= exp(-rho(2n+1) a m_thr)
// * e^a * prod_k (1 + rho C (e^a - 1)); the e^a factor is the deterministic
// self-loop's exact moment contribution. Requires a > 0.
double chernoff_bound(const ConnectionKernel& kernel, int n, double rho, int j,
                      double a, double m_thr);

// Exact upper-tail probability P(count > m_thr * rho * (2n+1)) for pairing
// with chernoff_bound.
double exact_upper_tail(const ConnectionKernel& kernel, int n, double rho,
                        int j, double m_thr);

// Normalized log-probability scan along an increasing n-grid under the given
// sparsity schedule. Zero-probability rows are flagged, not fatal.
ScanResult ldp_scan(const EventSpec& spec, const ConnectionKernel& kernel,
                    const SparsitySchedule& schedule,
                    const std::vector<int>& n_grid, int rate_bins = 1024,
                    uint64_t seed = 0);

}  // namespace ldpnet
