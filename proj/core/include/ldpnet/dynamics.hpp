#pragma once

#include <string>
#include <vector>

#include "ldpnet/fields.hpp"
#include "ldpnet/graph.hpp"

namespace ldpnet {

struct InitialCondition {
  std::vector<Vec> states;  // one per node, slot order
  double c_ini = 0.0;       // uniform bound sup_j ||u_j||

  int d() const { return states.empty() ? 0 : static_cast<int>(states[0].size()); }
  // True when all states are pairwise distinct (warned on, not enforced).
  bool distinct() const;
  static InitialCondition from_lift(const LiftMap& lift,
                                    const std::vector<double>& theta);
  static InitialCondition from_states(std::vector<Vec> states);
};

enum class Scheme { kEuler, kRk4 };

struct TrajectoryBundle {
  int nodes = 0;
  int d = 0;
  std::vector<double> times;   // uniform grid 0 = t_0 < ... < t_S = T
  std::vector<double> data;    // [node][step][component], node-major
  Scheme scheme = Scheme::kEuler;

  int steps() const { return static_cast<int>(times.size()) - 1; }
  double state(int node, int step, int comp) const {
    return data[(static_cast<size_t>(node) * times.size() + step) * d + comp];
  }
  Vec state_vec(int node, int step) const;
  // Linear interpolation between grid points.
  Vec at_time(int node, double t) const;
  double sup_norm(int node) const;
};

// Fixed-step integration of du_k/dt = drift(u_k) + (1/kappa_k) sum_{j in Xi_k}
// coupling(u_k, u_j). Euler with m steps reproduces the m-step push-forward
// recursion exactly; rk4 is the reference scheme. Throws "blow-up" if a
// non-finite state appears.
TrajectoryBundle simulate(const GraphSample& g, const InitialCondition& init,
                          const VectorFieldPair& fields, double T, int steps,
                          Scheme scheme);

// A priori bound ||u(t)|| <= C_ini + t (B_drift + B_coup); checked with slack.
bool check_apriori_bound(const TrajectoryBundle& traj,
                         const InitialCondition& init,
                         const VectorFieldPair& fields, double slack = 1e-9);

std::string trajectory_csv(const TrajectoryBundle& traj, int thin = 1);

}  // namespace ldpnet
