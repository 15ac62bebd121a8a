#include "ldpnet/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ldpnet {

bool InitialCondition::distinct() const {
  for (size_t a = 0; a < states.size(); ++a)
    for (size_t b = a + 1; b < states.size(); ++b)
      if (states[a] == states[b]) return false;
  return true;
}

InitialCondition InitialCondition::from_lift(const LiftMap& lift,
                                             const std::vector<double>& theta) {
  InitialCondition ic;
  ic.states.reserve(theta.size());
  for (double t : theta) ic.states.push_back(lift.eval(t));
  for (const auto& u : ic.states) ic.c_ini = std::max(ic.c_ini, norm2(u));
  return ic;
}

InitialCondition InitialCondition::from_states(std::vector<Vec> states) {
  InitialCondition ic;
  ic.states = std::move(states);
  for (const auto& u : ic.states) ic.c_ini = std::max(ic.c_ini, norm2(u));
  return ic;
}

Vec TrajectoryBundle::state_vec(int node, int step) const {
  Vec v(d);
  for (int c = 0; c < d; ++c) v[c] = state(node, step, c);
  return v;
}

Vec TrajectoryBundle::at_time(int node, double t) const {
  const int S = steps();
  const double T = times.back();
  if (t <= 0.0) return state_vec(node, 0);
  if (t >= T) return state_vec(node, S);
  double x = t / T * S;
  int p = static_cast<int>(x);
  if (p >= S) p = S - 1;
  double w = x - p;
  Vec v(d);
  for (int c = 0; c < d; ++c)
    v[c] = (1.0 - w) * state(node, p, c) + w * state(node, p + 1, c);
  return v;
}

double TrajectoryBundle::sup_norm(int node) const {
  double m = 0.0;
  for (size_t s = 0; s < times.size(); ++s)
    m = std::max(m, norm2(state_vec(node, static_cast<int>(s))));
  return m;
}

namespace {

// Full RHS over all nodes; reduction over sorted neighbor lists keeps the
// floating-point result independent of worker count.
void rhs(const GraphSample& g, const VectorFieldPair& f,
         const std::vector<Vec>& u, std::vector<Vec>& out) {
  const int N = g.size();
  const int d = f.d;
  for (int k = 0; k < N; ++k) {
    Vec acc = f.drift(u[k]);
    const auto& nbrs = g.adjacency[k];
    Vec sum(d, 0.0);
    for (int j : nbrs) {
      Vec c = f.coupling(u[k], u[j]);
      for (int i = 0; i < d; ++i) sum[i] += c[i];
    }
    const double inv = 1.0 / static_cast<double>(nbrs.size());
    for (int i = 0; i < d; ++i) acc[i] += inv * sum[i];
    out[k] = std::move(acc);
  }
}

void store(TrajectoryBundle& traj, int step, const std::vector<Vec>& u) {
  const int d = traj.d;
  const size_t S1 = traj.times.size();
  for (size_t k = 0; k < u.size(); ++k)
    for (int c = 0; c < d; ++c)
      traj.data[(k * S1 + step) * d + c] = u[k][c];
}

void check_finite(const std::vector<Vec>& u) {
  for (const auto& v : u)
    for (double x : v)
      if (!std::isfinite(x)) throw std::runtime_error("blow-up");
}

}  // namespace

TrajectoryBundle simulate(const GraphSample& g, const InitialCondition& init,
                          const VectorFieldPair& fields, double T, int steps,
                          Scheme scheme) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  const int N = g.size();
  if (static_cast<int>(init.states.size()) != N)
    throw std::invalid_argument("initial condition size mismatch");
  const int d = fields.d;

  TrajectoryBundle traj;
  traj.nodes = N;
  traj.d = d;
  traj.scheme = scheme;
  traj.times.resize(steps + 1);
  for (int s = 0; s <= steps; ++s)
    traj.times[s] = T * static_cast<double>(s) / steps;
  traj.data.resize(static_cast<size_t>(N) * (steps + 1) * d);

  std::vector<Vec> u = init.states;
  store(traj, 0, u);
  const double dt = T / steps;
  std::vector<Vec> k1(N), k2(N), k3(N), k4(N), tmp(N);

  for (int s = 0; s < steps; ++s) {
    if (scheme == Scheme::kEuler) {
      rhs(g, fields, u, k1);
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < d; ++c) u[j][c] += dt * k1[j][c];
    } else {
      rhs(g, fields, u, k1);
      tmp = u;
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < d; ++c) tmp[j][c] = u[j][c] + 0.5 * dt * k1[j][c];
      rhs(g, fields, tmp, k2);
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < d; ++c) tmp[j][c] = u[j][c] + 0.5 * dt * k2[j][c];
      rhs(g, fields, tmp, k3);
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < d; ++c) tmp[j][c] = u[j][c] + dt * k3[j][c];
      rhs(g, fields, tmp, k4);
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < d; ++c)
          u[j][c] += dt / 6.0 *
                     (k1[j][c] + 2.0 * k2[j][c] + 2.0 * k3[j][c] + k4[j][c]);
    }
    check_finite(u);
    store(traj, s + 1, u);
  }
  return traj;
}

bool check_apriori_bound(const TrajectoryBundle& traj,
                         const InitialCondition& init,
                         const VectorFieldPair& fields, double slack) {
  const double rate = fields.drift_bound + fields.coupling_bound;
  for (int k = 0; k < traj.nodes; ++k)
    for (size_t s = 0; s < traj.times.size(); ++s) {
      double bound = init.c_ini + traj.times[s] * rate + slack;
      if (norm2(traj.state_vec(k, static_cast<int>(s))) > bound) return false;
    }
  return true;
}

std::string trajectory_csv(const TrajectoryBundle& traj, int thin) {
  if (thin < 1) thin = 1;
  std::ostringstream out;
  out << "node,step,time";
  for (int c = 0; c < traj.d; ++c) out << ",u" << c;
  out << "\n";
  char buf[32];
  for (int k = 0; k < traj.nodes; ++k)
    for (int s = 0; s < static_cast<int>(traj.times.size()); s += thin) {
      out << k - (traj.nodes - 1) / 2 << "," << s;
      std::snprintf(buf, sizeof buf, ",%.17g", traj.times[s]);
      out << buf;
      for (int c = 0; c < traj.d; ++c) {
        std::snprintf(buf, sizeof buf, ",%.17g", traj.state(k, s, c));
        out << buf;
      }
      out << "\n";
    }
  return out.str();
}

}  // namespace ldpnet
