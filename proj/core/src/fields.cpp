#include "ldpnet/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace ldpnet {

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool VectorFieldPair::check_bounds(const std::vector<Vec>& cloud,
                                   double slack) const {
  for (const auto& u : cloud) {
    if (norm2(drift(u)) > drift_bound + slack) return false;
    for (const auto& v : cloud)
      if (norm2(coupling(u, v)) > coupling_bound + slack) return false;
  }
  return true;
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& key,
             double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

VectorFieldPair make_field(const std::string& name,
                           const std::map<std::string, double>& params, int d) {
  VectorFieldPair f;
  f.name = name;
  f.d = d;
  if (name == "zero") {
    f.drift = [d](const Vec&) { return Vec(d, 0.0); };
    f.coupling = [d](const Vec&, const Vec&) { return Vec(d, 0.0); };
    return f;
  }
  if (name == "decay") {
    double a = param(params, "a", 1.0);
    f.drift = [a, d](const Vec& u) {
      Vec r(d);
      for (int i = 0; i < d; ++i) r[i] = -a * std::tanh(u[i]);
      return r;
    };
    f.coupling = [d](const Vec&, const Vec&) { return Vec(d, 0.0); };
    f.drift_bound = a * std::sqrt(static_cast<double>(d));
    f.drift_lipschitz = a;
    return f;
  }
  if (name == "kuramoto") {
    if (d != 1) throw std::invalid_argument("kuramoto field requires d=1");
    double omega = param(params, "omega", 0.0);
    double K = param(params, "K", 1.0);
    f.drift = [omega](const Vec&) { return Vec{omega}; };
    f.coupling = [K](const Vec& u, const Vec& v) {
      return Vec{K * std::sin(v[0] - u[0])};
    };
    f.drift_bound = std::abs(omega);
    f.coupling_bound = std::abs(K);
    f.coupling_lipschitz = std::abs(K);
    return f;
  }
  if (name == "tanh_attract") {
    double a = param(params, "a", 0.5);
    double K = param(params, "K", 1.0);
    f.drift = [a, d](const Vec& u) {
      Vec r(d);
      for (int i = 0; i < d; ++i) r[i] = -a * std::tanh(u[i]);
      return r;
    };
    f.coupling = [K, d](const Vec& u, const Vec& v) {
      Vec r(d);
      for (int i = 0; i < d; ++i) r[i] = K * std::tanh(v[i] - u[i]);
      return r;
    };
    f.drift_bound = a * std::sqrt(static_cast<double>(d));
    f.coupling_bound = std::abs(K) * std::sqrt(static_cast<double>(d));
    f.drift_lipschitz = a;
    f.coupling_lipschitz = std::abs(K);
    return f;
  }
  if (name == "rotor") {
    if (d != 2) throw std::invalid_argument("rotor field requires d=2");
    double omega = param(params, "omega", 1.0);
    double K = param(params, "K", 1.0);
    f.drift = [omega](const Vec& u) {
      return Vec{-omega * std::tanh(u[1]), omega * std::tanh(u[0])};
    };
    f.coupling = [K](const Vec& u, const Vec& v) {
      return Vec{K * std::tanh(v[0] - u[0]), K * std::tanh(v[1] - u[1])};
    };
    f.drift_bound = std::abs(omega) * std::sqrt(2.0);
    f.coupling_bound = std::abs(K) * std::sqrt(2.0);
    f.drift_lipschitz = std::abs(omega);
    f.coupling_lipschitz = std::abs(K);
    return f;
  }
  throw std::invalid_argument("unknown field: " + name);
}

LiftMap make_lift(const std::string& name,
                  const std::map<std::string, double>& params, int d) {
  LiftMap u;
  u.name = name;
  u.d = d;
  if (name == "constant") {
    double c = param(params, "c", 0.0);
    u.eval = [c, d](double) { return Vec(d, c); };
    return u;
  }
  if (name == "circle_embed") {
    if (d < 2) throw std::invalid_argument("circle_embed requires d >= 2");
    double r = param(params, "r", 1.0);
    u.eval = [r, d](double theta) {
      Vec v(d, 0.0);
      v[0] = r * std::cos(theta);
      v[1] = r * std::sin(theta);
      return v;
    };
    return u;
  }
  if (name == "cosine") {
    double a = param(params, "a", 1.0);
    u.eval = [a, d](double theta) {
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = a * std::cos(theta + i * 0.5);
      return v;
    };
    return u;
  }
  throw std::invalid_argument("unknown lift: " + name);
}

}  // namespace ldpnet
