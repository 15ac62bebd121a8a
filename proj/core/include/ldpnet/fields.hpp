#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ldpnet {

using Vec = std::vector<double>;

// Drift/coupling pair for du/dt = drift(u) + mean_{k in Xi} coupling(u, u_k).
// Both maps are bounded and Lipschitz; the declared bounds feed the a priori
// trajectory bound.
struct VectorFieldPair {
  std::string name;
  int d = 1;
  std::function<Vec(const Vec&)> drift;
  std::function<Vec(const Vec&, const Vec&)> coupling;
  double drift_bound = 0.0;
  double coupling_bound = 0.0;
  double drift_lipschitz = 0.0;
  double coupling_lipschitz = 0.0;

  // Sampled check of the declared sup bounds on a test cloud.
  bool check_bounds(const std::vector<Vec>& cloud, double slack = 1e-9) const;
};

// Lift U: S^1 -> R^d used for the initial condition u_j = U(theta_j).
struct LiftMap {
  std::string name;
  int d = 1;
  std::function<Vec(double)> eval;
};

// Named built-ins; no runtime code loading.
//   zero            : drift 0, coupling 0
//   decay           : drift -a*tanh(u), coupling 0                (param a)
//   kuramoto        : d=1, drift omega, coupling K*sin(v - u)     (omega, K)
//   tanh_attract    : coupling K*tanh(v - u), drift -a*tanh(u)    (a, K)
//   rotor           : d=2, rotation drift + tanh attraction       (omega, K)
VectorFieldPair make_field(const std::string& name,
                           const std::map<std::string, double>& params, int d);

//   constant        : theta -> (c, ..., c)                        (c)
//   circle_embed    : theta -> r*(cos, sin) padded with zeros     (r)
//   cosine          : theta -> (a*cos(theta+phase_i))_i           (a)
LiftMap make_lift(const std::string& name,
                  const std::map<std::string, double>& params, int d);

double norm2(const Vec& v);

}  // namespace ldpnet
