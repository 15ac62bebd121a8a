#pragma once

#include <memory>
#include <vector>

#include "ldpnet/dynamics.hpp"
#include "ldpnet/fields.hpp"
#include "ldpnet/graph.hpp"
#include "ldpnet/ot.hpp"

namespace ldpnet {

// Finite weighted atom measure on R^d. Duplicate points are merged with
// accumulated weights to keep supports minimal.
struct AtomMeasure {
  struct Atom {
    Vec point;
    double weight;
  };
  std::vector<Atom> atoms;

  double total_weight() const;
  bool is_probability(double tol = 1e-9) const;
  void merge_duplicates();
  static AtomMeasure uniform(std::vector<Vec> points);
  static AtomMeasure dirac(Vec point);
};

// mu_hat_* = (2n+1)^{-1} sum_j delta_{(u_j, mu_hat_j)}, stored by graph
// provenance: the sub-measures are recovered from the adjacency lists.
struct NestedEmpiricalMeasure {
  std::shared_ptr<const GraphSample> graph;
  std::vector<Vec> states;  // u_j, slot order

  int atom_count() const { return graph->size(); }
  // mu_hat_j: uniform measure over in-neighbor initial states.
  AtomMeasure sub_measure(int slot) const;
  // mu_hat_hat: flat empirical measure of states, exposed for diagnostics.
  AtomMeasure flat_marginal() const;
};

// Element of V_m realized by node indirection into the provenance graph:
// node j's depth-k object is (u_j, uniform mixture over in-neighbors of
// depth-(k-1) objects), with depth-0 objects the flat input measures.
struct DepthMeasure {
  int depth = 1;
  std::shared_ptr<const GraphSample> graph;
  std::vector<Vec> states;
};

// Empirical measure of trajectories on a shared time grid.
struct PathMeasure {
  std::shared_ptr<const TrajectoryBundle> bundle;

  int atom_count() const { return bundle->nodes; }
  double weight() const { return 1.0 / bundle->nodes; }
};

// Element of M+(S^1 x {0,1}) as weighted atoms ((theta, w), weight).
struct PlusMeasure {
  struct Atom {
    double theta;
    int w;  // 0 or 1
    double weight;
  };
  std::vector<Atom> atoms;

  double mass_on(int w) const;
};

// Measure over (theta, sub-measure on S^1): the breve hierarchy before the
// Gamma lift. Sub-measure atoms are 1-d angle points.
struct NestedCircleMeasure {
  struct Atom {
    double theta;
    AtomMeasure sub;
    double weight;
  };
  std::vector<Atom> atoms;
};

struct LiftedNestedMeasure {
  struct Atom {
    Vec point;
    AtomMeasure sub;
    double weight;
  };
  std::vector<Atom> atoms;
};

// --- constructors ---

NestedEmpiricalMeasure build_nested(std::shared_ptr<const GraphSample> g,
                                    const InitialCondition& init);

// breve mu_* for the circle model: atoms (theta_j, uniform over neighbor
// positions).
NestedCircleMeasure breve_measure(const GraphSample& g);

// tilde mu_j = (rho (2n+1))^{-1} sum_k delta_{(theta_k, w_jk)}.
PlusMeasure tilde_measure(const GraphSample& g, int slot);

PathMeasure path_empirical(TrajectoryBundle traj);

// --- maps ---

// Gamma: (theta, mu) -> (U(theta), mu o U^{-1}).
LiftedNestedMeasure lift_gamma(const NestedCircleMeasure& m, const LiftMap& U);

// pi: conditional measure on {w = 1}; throws "pi undefined" when nu(w=1)=0.
AtomMeasure project_pi(const PlusMeasure& m);

// Depth-m unroll Phi_m. Requires distinct initial states (the conditional
// kernel is then a point mass at the neighborhood measure).
DepthMeasure unroll_phi(std::shared_ptr<const GraphSample> g,
                        const InitialCondition& init, int m);

// --- distances ---

// Exact Wasserstein-1 under the Euclidean ground distance. Combined support
// capped at kExactOtSupportCap.
double wasserstein(const AtomMeasure& p, const AtomMeasure& q);

// Recursive metric d_k on V_k: level cost = point distance + d_{k-1} of
// sub-measures; pairwise sub-distances memoized by node index.
double nested_wasserstein(const DepthMeasure& p, const DepthMeasure& q);

// Wasserstein over path space with sup-norm ground distance, exact for
// piecewise-linear bundles (evaluated on the union time grid).
double path_wasserstein(const PathMeasure& p, const PathMeasure& q);

double euclidean(const Vec& a, const Vec& b);

}  // namespace ldpnet
