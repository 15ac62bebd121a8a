#include "ldpnet/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ldpnet {

// Successive shortest paths with Johnson potentials. Nodes: sources 0..m-1,
// sinks m..m+n-1. Residual arcs are implicit: forward i->j always available
// (infinite capacity), backward j->i available while flow x_ij > 0. Dijkstra
// runs on the dense bipartite graph; supports are capped upstream so the
// cubic worst case stays cheap.
double transport_cost(const std::vector<double>& a, const std::vector<double>& b,
                      const std::function<double(int, int)>& cost) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  if (m == 0 || n == 0) throw std::invalid_argument("empty measure");

  double ta = 0.0, tb = 0.0;
  for (double v : a) {
    if (v < 0.0) throw std::invalid_argument("negative weight");
    ta += v;
  }
  for (double v : b) {
    if (v < 0.0) throw std::invalid_argument("negative weight");
    tb += v;
  }
  if (std::abs(ta - tb) > 1e-9 * std::max(1.0, std::max(ta, tb)))
    throw std::invalid_argument("unbalanced masses");

  std::vector<std::vector<double>> c(m, std::vector<double>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double v = cost(i, j);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("invalid transport cost");
      c[i][j] = v;
    }

  std::vector<std::vector<double>> x(m, std::vector<double>(n, 0.0));
  std::vector<double> rem_a = a, rem_b = b;
  std::vector<double> pot_src(m, 0.0), pot_snk(n, 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  // Mass below this is treated as already routed (FP dust from subtraction).
  const double mass_eps = 1e-15 * std::max(1.0, ta);

  double total_remaining = ta;
  while (total_remaining > mass_eps) {
    // Dijkstra from the set of sources with remaining supply.
    std::vector<double> dist_src(m, inf), dist_snk(n, inf);
    std::vector<int> par_snk(n, -1), par_src(m, -1);  // predecessor indices
    std::vector<bool> done_src(m, false), done_snk(n, false);
    for (int i = 0; i < m; ++i)
      if (rem_a[i] > mass_eps) dist_src[i] = 0.0;

    int reached_sink = -1;
    while (true) {
      // Pick the unfinished node (either side) with smallest distance.
      double best = inf;
      int bi = -1;
      bool is_src = true;
      for (int i = 0; i < m; ++i)
        if (!done_src[i] && dist_src[i] < best) best = dist_src[i], bi = i, is_src = true;
      for (int j = 0; j < n; ++j)
        if (!done_snk[j] && dist_snk[j] < best) best = dist_snk[j], bi = j, is_src = false;
      if (bi < 0) break;
      if (is_src) {
        done_src[bi] = true;
        for (int j = 0; j < n; ++j) {
          if (done_snk[j]) continue;
          double rc = c[bi][j] + pot_src[bi] - pot_snk[j];
          if (rc < 0.0) rc = 0.0;  // FP slack on tight arcs
          if (best + rc < dist_snk[j]) {
            dist_snk[j] = best + rc;
            par_snk[j] = bi;
          }
        }
      } else {
        done_snk[bi] = true;
        if (rem_b[bi] > mass_eps) {
          // Cheapest reachable sink with spare demand terminates the search
          // (all remaining labels are >= best).
          reached_sink = bi;
          break;
        }
        for (int i = 0; i < m; ++i) {
          if (done_src[i] || x[i][bi] <= mass_eps) continue;
          double rc = -c[i][bi] - pot_src[i] + pot_snk[bi];
          if (rc < 0.0) rc = 0.0;
          if (best + rc < dist_src[i]) {
            dist_src[i] = best + rc;
            par_src[i] = bi;
          }
        }
      }
    }
    if (reached_sink < 0)
      throw std::runtime_error("transport network disconnected");

    // Update potentials, capping at the terminal distance so reduced costs
    // stay nonnegative for nodes labeled (or left unlabeled) past the early
    // exit; unlabeled nodes have true distance >= the terminal distance.
    const double dterm = dist_snk[reached_sink];
    for (int i = 0; i < m; ++i) pot_src[i] += std::min(dist_src[i], dterm);
    for (int j = 0; j < n; ++j) pot_snk[j] += std::min(dist_snk[j], dterm);

    // Trace the alternating path back, find bottleneck, augment.
    std::vector<std::pair<int, int>> fwd, bwd;  // arcs used forward / backward
    int j = reached_sink;
    double bottleneck = rem_b[j];
    while (true) {
      int i = par_snk[j];
      fwd.emplace_back(i, j);
      int pj = par_src[i];
      if (pj < 0) {
        bottleneck = std::min(bottleneck, rem_a[i]);
        break;
      }
      bwd.emplace_back(i, pj);
      bottleneck = std::min(bottleneck, x[i][pj]);
      j = pj;
    }
    for (auto [i, jj] : fwd) x[i][jj] += bottleneck;
    for (auto [i, jj] : bwd) x[i][jj] -= bottleneck;
    int src_end = fwd.back().first;
    rem_a[src_end] -= bottleneck;
    rem_b[reached_sink] -= bottleneck;
    total_remaining -= bottleneck;
    if (bottleneck <= mass_eps) break;  // degenerate; avoid spinning
  }

  double value = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) value += x[i][j] * c[i][j];
  return value;
}

}  // namespace ldpnet
