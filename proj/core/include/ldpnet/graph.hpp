#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ldpnet/circle.hpp"

namespace ldpnet {

// Quenched directed graph on the index set I_n = {-n..n}. Node j is stored
// at array slot j + n. Adjacency lists hold in-neighborhoods Xi_j as sorted
// slot indices; the self-loop is always present.
struct GraphSample {
  int n = 0;
  double rho = 1.0;
  uint64_t seed = 0;
  std::string kernel_id;
  std::vector<double> positions;           // theta_j, ordered by j
  std::vector<std::vector<int>> adjacency;  // slot -> sorted in-neighbor slots

  int size() const { return 2 * n + 1; }
  int degree(int slot) const { return static_cast<int>(adjacency[slot].size()); }
  int slot_of(int j) const { return j + n; }
};

// Named sparsity family rho_n = c * (2n+1)^(-beta), 0 < beta < 1: rho_n -> 0
// while (2n+1) rho_n diverges.
struct SparsitySchedule {
  double c = 1.0;
  double beta = 0.5;

  double rho(int n) const;
  // Numeric check of the sparse-regime limits at the ends of an n-grid.
  bool admissible(int n_lo, int n_hi) const;
};

// Evenly spaced positions 2*pi*j/(2n+1), canonicalized to (-pi, pi].
std::vector<double> positions(int n);

// Directed inhomogeneous Erdos-Renyi sample: w_jj = 1 always, off-diagonal
// edges independent with probability rho * C(theta_i, theta_j), clipped at 1
// only when allow_clip is set. Deterministic in (seed, n, rho, kernel) and
// independent of evaluation order (per-row substreams).
GraphSample sample_graph(const ConnectionKernel& kernel, int n, double rho,
                         uint64_t seed, bool allow_clip = false,
                         int threads = 1);

// Resample only the in-row of one node; same law as that row of sample_graph
// restricted to trial-specific substreams. Returns sorted in-neighbor slots.
std::vector<int> sample_in_row(const ConnectionKernel& kernel, int n,
                               double rho, uint64_t seed, int slot,
                               uint64_t trial, bool allow_clip = false);

struct DegreeProfile {
  int min = 0;
  int max = 0;
  double mean = 0.0;
  std::vector<int> histogram;  // histogram[k] = #nodes with degree k

  int total() const;
};

DegreeProfile degree_profile(const GraphSample& g);

// Line-oriented text format, bit-exact round trip (rho in hex floats).
std::string serialize_graph(const GraphSample& g);
GraphSample parse_graph(const std::string& text);

// Invariant check used by constructors and tests; throws on violation.
void check_graph(const GraphSample& g);

}  // namespace ldpnet
