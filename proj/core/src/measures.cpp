#include "ldpnet/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ldpnet {

double euclidean(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double AtomMeasure::total_weight() const {
  double t = 0.0;
  for (const auto& a : atoms) t += a.weight;
  return t;
}

bool AtomMeasure::is_probability(double tol) const {
  return std::abs(total_weight() - 1.0) <= tol;
}

void AtomMeasure::merge_duplicates() {
  std::map<Vec, double> acc;
  for (auto& a : atoms) acc[a.point] += a.weight;
  atoms.clear();
  for (auto& [p, w] : acc)
    if (w > 0.0) atoms.push_back({p, w});
}

AtomMeasure AtomMeasure::uniform(std::vector<Vec> points) {
  AtomMeasure m;
  const double w = 1.0 / static_cast<double>(points.size());
  for (auto& p : points) m.atoms.push_back({std::move(p), w});
  m.merge_duplicates();
  return m;
}

AtomMeasure AtomMeasure::dirac(Vec point) {
  AtomMeasure m;
  m.atoms.push_back({std::move(point), 1.0});
  return m;
}

AtomMeasure NestedEmpiricalMeasure::sub_measure(int slot) const {
  std::vector<Vec> pts;
  for (int k : graph->adjacency[slot]) pts.push_back(states[k]);
  return AtomMeasure::uniform(std::move(pts));
}

AtomMeasure NestedEmpiricalMeasure::flat_marginal() const {
  return AtomMeasure::uniform(states);
}

double PlusMeasure::mass_on(int w) const {
  double t = 0.0;
  for (const auto& a : atoms)
    if (a.w == w) t += a.weight;
  return t;
}

NestedEmpiricalMeasure build_nested(std::shared_ptr<const GraphSample> g,
                                    const InitialCondition& init) {
  if (static_cast<int>(init.states.size()) != g->size())
    throw std::invalid_argument("graph/init size mismatch");
  for (int s = 0; s < g->size(); ++s)
    if (g->adjacency[s].empty())
      throw std::invalid_argument("disconnected vertex");
  return NestedEmpiricalMeasure{std::move(g), init.states};
}

NestedCircleMeasure breve_measure(const GraphSample& g) {
  NestedCircleMeasure m;
  const int N = g.size();
  const double w = 1.0 / N;
  for (int s = 0; s < N; ++s) {
    std::vector<Vec> pts;
    for (int k : g.adjacency[s]) pts.push_back({g.positions[k]});
    m.atoms.push_back({g.positions[s], AtomMeasure::uniform(std::move(pts)), w});
  }
  return m;
}

PlusMeasure tilde_measure(const GraphSample& g, int slot) {
  PlusMeasure m;
  const int N = g.size();
  const double w = 1.0 / (g.rho * N);
  const auto& row = g.adjacency[slot];
  size_t r = 0;
  for (int k = 0; k < N; ++k) {
    bool present = r < row.size() && row[r] == k;
    if (present) ++r;
    m.atoms.push_back({g.positions[k], present ? 1 : 0, w});
  }
  return m;
}

PathMeasure path_empirical(TrajectoryBundle traj) {
  return PathMeasure{std::make_shared<TrajectoryBundle>(std::move(traj))};
}

LiftedNestedMeasure lift_gamma(const NestedCircleMeasure& m, const LiftMap& U) {
  LiftedNestedMeasure out;
  for (const auto& a : m.atoms) {
    AtomMeasure sub;
    for (const auto& s : a.sub.atoms)
      sub.atoms.push_back({U.eval(s.point[0]), s.weight});
    sub.merge_duplicates();
    out.atoms.push_back({U.eval(a.theta), std::move(sub), a.weight});
  }
  return out;
}

AtomMeasure project_pi(const PlusMeasure& m) {
  double mass = m.mass_on(1);
  if (mass <= 0.0) throw std::invalid_argument("pi undefined");
  AtomMeasure out;
  for (const auto& a : m.atoms)
    if (a.w == 1) out.atoms.push_back({{a.theta}, a.weight / mass});
  out.merge_duplicates();
  return out;
}

DepthMeasure unroll_phi(std::shared_ptr<const GraphSample> g,
                        const InitialCondition& init, int m) {
  if (m < 1) throw std::invalid_argument("depth must be >= 1");
  if (static_cast<int>(init.states.size()) != g->size())
    throw std::invalid_argument("graph/init size mismatch");
  if (!init.distinct())
    throw std::invalid_argument("conditional kernel ambiguous");
  return DepthMeasure{m, std::move(g), init.states};
}

namespace {

void require_probability(const AtomMeasure& p) {
  if (!p.is_probability()) throw std::invalid_argument("not probability");
}

double atom_ot(const AtomMeasure& p, const AtomMeasure& q,
               const std::function<double(int, int)>& cost) {
  std::vector<double> a, b;
  for (const auto& x : p.atoms) a.push_back(x.weight);
  for (const auto& x : q.atoms) b.push_back(x.weight);
  return transport_cost(a, b, cost);
}

}  // namespace

double wasserstein(const AtomMeasure& p, const AtomMeasure& q) {
  require_probability(p);
  require_probability(q);
  if (p.atoms.size() + q.atoms.size() > kExactOtSupportCap)
    throw std::invalid_argument("exact OT size cap");
  return atom_ot(p, q, [&](int i, int j) {
    return euclidean(p.atoms[i].point, q.atoms[j].point);
  });
}

double nested_wasserstein(const DepthMeasure& p, const DepthMeasure& q) {
  if (p.depth != q.depth) throw std::invalid_argument("depth mismatch");
  const GraphSample& gp = *p.graph;
  const GraphSample& gq = *q.graph;
  const int Np = gp.size(), Nq = gq.size();
  if (static_cast<size_t>(Np) * Nq > 512u * 512u)
    throw std::invalid_argument("exact OT size cap");

  // cost[a][b] at level l: ||u_a - u_b|| + d_{l-1}(obj_{l-1}(a), obj_{l-1}(b)).
  // Level 0 pairs flat neighbor-state measures under the Euclidean cost.
  std::vector<std::vector<double>> sub(Np, std::vector<double>(Nq));
  for (int a = 0; a < Np; ++a)
    for (int b = 0; b < Nq; ++b) {
      const auto& na = gp.adjacency[a];
      const auto& nb = gq.adjacency[b];
      std::vector<double> wa(na.size(), 1.0 / na.size());
      std::vector<double> wb(nb.size(), 1.0 / nb.size());
      sub[a][b] = transport_cost(wa, wb, [&](int i, int j) {
        return euclidean(p.states[na[i]], q.states[nb[j]]);
      });
    }

  for (int level = 1; level < p.depth; ++level) {
    std::vector<std::vector<double>> next(Np, std::vector<double>(Nq));
    for (int a = 0; a < Np; ++a)
      for (int b = 0; b < Nq; ++b) {
        const auto& na = gp.adjacency[a];
        const auto& nb = gq.adjacency[b];
        std::vector<double> wa(na.size(), 1.0 / na.size());
        std::vector<double> wb(nb.size(), 1.0 / nb.size());
        next[a][b] = transport_cost(wa, wb, [&](int i, int j) {
          return euclidean(p.states[na[i]], q.states[nb[j]]) + sub[na[i]][nb[j]];
        });
      }
    sub = std::move(next);
  }

  std::vector<double> wa(Np, 1.0 / Np), wb(Nq, 1.0 / Nq);
  return transport_cost(wa, wb, [&](int a, int b) {
    return euclidean(p.states[a], q.states[b]) + sub[a][b];
  });
}

double path_wasserstein(const PathMeasure& p, const PathMeasure& q) {
  const TrajectoryBundle& A = *p.bundle;
  const TrajectoryBundle& B = *q.bundle;
  if (A.d != B.d) throw std::invalid_argument("dimension mismatch");
  if (std::abs(A.times.back() - B.times.back()) > 1e-12)
    throw std::invalid_argument("horizon mismatch");
  if (A.nodes + B.nodes > kExactOtSupportCap)
    throw std::invalid_argument("exact OT size cap");

  // Union time grid; for piecewise-linear paths the sup of a difference over
  // a segment is attained at a segment endpoint.
  std::vector<double> grid;
  grid.reserve(A.times.size() + B.times.size());
  grid.insert(grid.end(), A.times.begin(), A.times.end());
  grid.insert(grid.end(), B.times.begin(), B.times.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double x, double y) { return std::abs(x - y) < 1e-15; }),
             grid.end());

  auto sup_dist = [&](int i, int j) {
    double m = 0.0;
    for (double t : grid) {
      Vec ua = A.at_time(i, t);
      Vec ub = B.at_time(j, t);
      m = std::max(m, euclidean(ua, ub));
    }
    return m;
  };
  std::vector<double> wa(A.nodes, 1.0 / A.nodes), wb(B.nodes, 1.0 / B.nodes);
  return transport_cost(wa, wb, sup_dist);
}

}  // namespace ldpnet
