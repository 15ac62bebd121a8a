#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ldpnet/pushforward.hpp"

using namespace ldpnet;

namespace {

GraphSample self_loops(int n) {
  return sample_graph(ConnectionKernel::constant(1.0), n, 1e-300, 1);
}

VectorFieldPair neighbor_copy() {
  // drift 0, coupling(u, v) = v: one Euler step adds the neighborhood mean.
  VectorFieldPair f;
  f.name = "neighbor-copy";
  f.d = 1;
  f.drift = [](const Vec&) { return Vec{0.0}; };
  f.coupling = [](const Vec&, const Vec& v) { return Vec{v[0]}; };
  f.drift_bound = 0.0;
  f.coupling_bound = 10.0;
  return f;
}

VectorFieldPair decoupled_decay() {
  VectorFieldPair f;
  f.name = "decoupled-decay";
  f.d = 1;
  f.drift = [](const Vec& u) { return Vec{-u[0]}; };
  f.coupling = [](const Vec&, const Vec&) { return Vec{0.0}; };
  f.drift_bound = 10.0;
  f.coupling_bound = 0.0;
  f.drift_lipschitz = 1.0;
  return f;
}

}  // namespace

TEST_CASE("one Euler step on a self-loop doubles the state") {
  // coupling(u, v) = v, drift 0, u(0) = 1, T = 1, m = 1: the only neighbor is
  // the node itself, so u(T) = u + T * u = 2.
  auto g = self_loops(0);
  auto init = InitialCondition::from_states({{1.0}});
  auto nu = build_nested(std::make_shared<GraphSample>(g), init);
  auto paths = psi_m(nu, neighbor_copy(), {1.0, 1, 1e-3, 1 << 14});
  CHECK(paths.bundle->state(0, 1, 0) == doctest::Approx(2.0));
}

TEST_CASE("psi_m with zero coupling is the Euler polygon") {
  auto g = self_loops(1);
  auto init = InitialCondition::from_states({{1.0}, {2.0}, {-0.5}});
  auto nu = build_nested(std::make_shared<GraphSample>(g), init);
  const int m = 5;
  auto paths = psi_m(nu, decoupled_decay(), {1.0, m, 1e-3, 1 << 14});
  const double dt = 1.0 / m;
  for (int node = 0; node < 3; ++node) {
    double u = init.states[node][0];
    for (int s = 1; s <= m; ++s) {
      u += dt * -u;
      CHECK(paths.bundle->state(node, s, 0) == doctest::Approx(u).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(psi_m(nu, decoupled_decay(), {1.0, 0, 1e-3, 1 << 14}),
                  std::invalid_argument);
}

TEST_CASE("psi_limit doubles until the gap closes") {
  auto g = self_loops(2);
  std::vector<Vec> st{{1.0}, {0.5}, {-0.3}, {2.0}, {-1.5}};
  auto nu = build_nested(std::make_shared<GraphSample>(g),
                         InitialCondition::from_states(st));

  // Huge tolerance: one comparison, final m = 2 * initial.
  auto quick = psi_limit(nu, decoupled_decay(), {1.0, 4, 100.0, 1 << 14});
  CHECK(quick.m_final == 8);
  REQUIRE(quick.ladder_m.size() == 1);
  CHECK(quick.ladder_m[0] == 4);

  // Converged limit approximates the exact decay e^{-T}.
  auto fine = psi_limit(nu, decoupled_decay(), {1.0, 4, 2e-5, 1 << 14});
  CHECK(fine.achieved_gap < 2e-5);
  for (int node = 0; node < 5; ++node) {
    double exact = st[node][0] * std::exp(-1.0);
    CHECK(std::abs(fine.paths.bundle->state(node, fine.paths.bundle->steps(), 0) -
                   exact) < 1e-4);
  }

  CHECK_THROWS_AS(psi_limit(nu, decoupled_decay(), {1.0, 4, 1e-15, 16}),
                  std::runtime_error);
  try {
    psi_limit(nu, decoupled_decay(), {1.0, 4, 1e-15, 16});
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("cap") != std::string::npos);
  }
}

TEST_CASE("factorization gap vanishes without coupling") {
  auto g = sample_graph(ConnectionKernel::constant(1.0), 4, 0.4, 21);
  auto init = InitialCondition::from_lift(make_lift("cosine", {{"a", 1.0}}, 1),
                                          g.positions);
  auto rep = factorization_check(g, init, decoupled_decay(), {1.0, 3, 1e-3, 1 << 14});
  CHECK(rep.nodes == g.size());
  CHECK(rep.m == 3);
  CHECK(rep.gap < 1e-12);
  CHECK(rep.to_json().find("gap") != std::string::npos);
}

TEST_CASE("factorization gap vanishes with coupling") {
  auto fields = make_field("kuramoto", {{"omega", 0.5}, {"K", 1.0}}, 1);
  auto g1 = sample_graph(ConnectionKernel::cosine(1.0, 0.3), 3, 0.5, 33);
  auto i1 = InitialCondition::from_lift(make_lift("cosine", {{"a", 1.0}}, 1),
                                        g1.positions);
  CHECK(factorization_check(g1, i1, fields, {1.0, 1, 1e-3, 1 << 14}).gap < 1e-12);

  auto g2 = sample_graph(ConnectionKernel::constant(1.0), 2, 0.6, 34);
  auto i2 = InitialCondition::from_lift(make_lift("cosine", {{"a", 0.8}}, 1),
                                        g2.positions);
  CHECK(factorization_check(g2, i2, fields, {0.7, 2, 1e-3, 1 << 14}).gap < 1e-9);
}

TEST_CASE("factorization check refuses oversized inputs") {
  auto fields = decoupled_decay();
  auto big = sample_graph(ConnectionKernel::constant(1.0), 30, 0.05, 2);
  auto ib = InitialCondition::from_lift(make_lift("cosine", {{"a", 1.0}}, 1),
                                        big.positions);
  CHECK_THROWS_WITH_AS(factorization_check(big, ib, fields, {1.0, 1, 1e-3, 1 << 14}),
                       "factorization check size cap", std::invalid_argument);

  auto small = sample_graph(ConnectionKernel::constant(1.0), 2, 0.5, 3);
  auto is = InitialCondition::from_lift(make_lift("cosine", {{"a", 1.0}}, 1),
                                        small.positions);
  CHECK_THROWS_WITH_AS(factorization_check(small, is, fields, {1.0, 4, 1e-3, 1 << 14}),
                       "factorization check size cap", std::invalid_argument);
}

TEST_CASE("euler ladder converges at first order") {
  auto g = sample_graph(ConnectionKernel::cosine(1.0, 0.4), 10, 0.3, 55);
  auto init = InitialCondition::from_lift(
      make_lift("circle_embed", {{"r", 1.0}}, 2), g.positions);
  auto nu = build_nested(std::make_shared<GraphSample>(g), init);
  auto fields = make_field("rotor", {{"omega", 1.0}, {"K", 0.7}}, 2);
  auto rep = euler_ladder(nu, fields, 1.0, 8, 6);
  REQUIRE(rep.ms.size() >= 4);
  CHECK(rep.slope <= -0.9);
  // Gaps to the finest member shrink monotonically.
  for (size_t i = 1; i + 1 < rep.gaps.size(); ++i)
    CHECK(rep.gaps[i] < rep.gaps[i - 1]);
  CHECK(rep.to_json().find("slope") != std::string::npos);
}
