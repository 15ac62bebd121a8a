#include "ldpnet/pushforward.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ldpnet {

PathMeasure psi_m(const NestedEmpiricalMeasure& nu, const VectorFieldPair& fields,
                  const PushforwardConfig& cfg) {
  if (cfg.m < 1) throw std::invalid_argument("m must be >= 1");
  InitialCondition init = InitialCondition::from_states(nu.states);
  return path_empirical(
      simulate(*nu.graph, init, fields, cfg.T, cfg.m, Scheme::kEuler));
}

PsiLimitResult psi_limit(const NestedEmpiricalMeasure& nu,
                         const VectorFieldPair& fields,
                         const PushforwardConfig& cfg) {
  if (cfg.tol <= 0.0) throw std::invalid_argument("tol must be positive");
  PsiLimitResult res;
  int m = std::max(1, cfg.m);
  PushforwardConfig c = cfg;
  c.m = m;
  PathMeasure coarse = psi_m(nu, fields, c);
  while (true) {
    if (2 * m > cfg.m_cap) {
      std::ostringstream msg;
      msg << "no convergence at cap (achieved gap " << res.achieved_gap << ")";
      throw std::runtime_error(msg.str());
    }
    c.m = 2 * m;
    PathMeasure fine = psi_m(nu, fields, c);
    double gap = path_wasserstein(coarse, fine);
    res.ladder_m.push_back(m);
    res.ladder_gap.push_back(gap);
    res.achieved_gap = gap;
    if (gap < cfg.tol) {
      res.paths = fine;
      res.m_final = 2 * m;
      return res;
    }
    m *= 2;
    coarse = fine;
  }
}

namespace {

// Tree recursion: the value path of a depth-l branch rooted at graph node
// `slot`, advanced for `steps` Euler steps, each step averaging the coupling
// against the branch's children one level down. No sharing with the direct
// route beyond the field callables.
std::vector<Vec> branch_path(const GraphSample& g, const InitialCondition& init,
                             const VectorFieldPair& fields, double dt, int slot,
                             int steps) {
  const int d = fields.d;
  std::vector<std::vector<Vec>> child_paths;
  if (steps > 0)
    for (int k : g.adjacency[slot])
      child_paths.push_back(branch_path(g, init, fields, dt, k, steps - 1));

  std::vector<Vec> path;
  path.reserve(steps + 1);
  Vec u = init.states[slot];
  path.push_back(u);
  for (int p = 0; p < steps; ++p) {
    Vec acc = fields.drift(u);
    Vec sum(d, 0.0);
    for (const auto& cp : child_paths) {
      Vec c = fields.coupling(u, cp[p]);
      for (int i = 0; i < d; ++i) sum[i] += c[i];
    }
    const double inv = 1.0 / static_cast<double>(child_paths.size());
    for (int i = 0; i < d; ++i) u[i] += dt * (acc[i] + inv * sum[i]);
    path.push_back(u);
  }
  return path;
}

}  // namespace

FactorizationReport factorization_check(const GraphSample& g,
                                        const InitialCondition& init,
                                        const VectorFieldPair& fields,
                                        const PushforwardConfig& cfg) {
  if (g.size() > 50 || cfg.m > 3)
    throw std::invalid_argument("factorization check size cap");
  const int N = g.size();
  const int m = cfg.m;

  auto nu = build_nested(std::make_shared<GraphSample>(g), init);
  PathMeasure direct = psi_m(nu, fields, cfg);

  // Tree route: assemble a bundle from per-root branch paths.
  TrajectoryBundle tree;
  tree.nodes = N;
  tree.d = fields.d;
  tree.scheme = Scheme::kEuler;
  tree.times.resize(m + 1);
  for (int s = 0; s <= m; ++s) tree.times[s] = cfg.T * s / m;
  tree.data.resize(static_cast<size_t>(N) * (m + 1) * fields.d);
  const double dt = cfg.T / m;
  for (int slot = 0; slot < N; ++slot) {
    auto path = branch_path(g, init, fields, dt, slot, m);
    for (int s = 0; s <= m; ++s)
      for (int c = 0; c < fields.d; ++c)
        tree.data[(static_cast<size_t>(slot) * (m + 1) + s) * fields.d + c] =
            path[s][c];
  }

  FactorizationReport rep;
  rep.nodes = N;
  rep.m = m;
  rep.gap = path_wasserstein(direct, path_empirical(std::move(tree)));
  return rep;
}

std::string FactorizationReport::to_json() const {
  std::ostringstream out;
  out << "{\"nodes\": " << nodes << ", \"m\": " << m << ", \"gap\": " << gap
      << "}";
  return out.str();
}

LadderReport euler_ladder(const NestedEmpiricalMeasure& nu,
                          const VectorFieldPair& fields, double T, int m_first,
                          int doublings) {
  LadderReport rep;
  PushforwardConfig cfg;
  cfg.T = T;
  cfg.m = m_first << doublings;
  PathMeasure finest = psi_m(nu, fields, cfg);
  for (int i = 0; i < doublings; ++i) {
    cfg.m = m_first << i;
    rep.ms.push_back(cfg.m);
    rep.gaps.push_back(path_wasserstein(psi_m(nu, fields, cfg), finest));
  }
  // Least-squares slope of log(gap) vs log(m).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t i = 0; i < rep.ms.size(); ++i) {
    if (rep.gaps[i] <= 0.0) continue;
    double x = std::log(static_cast<double>(rep.ms[i]));
    double y = std::log(rep.gaps[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  rep.final_distance = rep.gaps.empty() ? 0.0 : rep.gaps.back();
  return rep;
}

std::string LadderReport::to_json() const {
  std::ostringstream out;
  out << "{\"m\": [";
  for (size_t i = 0; i < ms.size(); ++i) out << (i ? ", " : "") << ms[i];
  out << "], \"gaps\": [";
  for (size_t i = 0; i < gaps.size(); ++i) out << (i ? ", " : "") << gaps[i];
  out << "], \"slope\": " << slope
      << ", \"final_distance\": " << final_distance << "}";
  return out.str();
}

}  // namespace ldpnet
