#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ldpnet/io.hpp"
#include "ldpnet/measures.hpp"
#include "ldpnet/rng.hpp"

using namespace ldpnet;

namespace {

GraphSample manual_graph(int n, std::vector<std::vector<int>> adj) {
  GraphSample g;
  g.n = n;
  g.rho = 1.0;
  g.kernel_id = "manual";
  g.positions = positions(n);
  g.adjacency = std::move(adj);
  return g;
}

// 1-d W1 oracle for uniform same-size supports: sorted quantile coupling.
double sorted_w1(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / a.size();
}

}  // namespace

TEST_CASE("build_nested structural cases") {
  auto loops = manual_graph(1, {{0}, {1}, {2}});
  auto init = InitialCondition::from_states({{1.0}, {2.0}, {3.0}});
  auto nu = build_nested(std::make_shared<GraphSample>(loops), init);
  for (int s = 0; s < 3; ++s) {
    auto sub = nu.sub_measure(s);
    REQUIRE(sub.atoms.size() == 1);
    CHECK(sub.atoms[0].point == init.states[s]);
    CHECK(sub.atoms[0].weight == doctest::Approx(1.0));
  }

  auto complete = manual_graph(1, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  auto nuc = build_nested(std::make_shared<GraphSample>(complete), init);
  auto flat = nuc.flat_marginal();
  for (int s = 0; s < 3; ++s) {
    auto sub = nuc.sub_measure(s);
    REQUIRE(sub.atoms.size() == 3);
    CHECK(wasserstein(sub, flat) < 1e-12);
    double mass = 0;
    for (auto& a : sub.atoms) {
      mass += a.weight;
      CHECK(a.weight == doctest::Approx(1.0 / 3));
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }

  auto empty_row = manual_graph(1, {{0}, {}, {2}});
  CHECK_THROWS_WITH_AS(
      build_nested(std::make_shared<GraphSample>(empty_row), init),
      "disconnected vertex", std::invalid_argument);
}

TEST_CASE("wasserstein basics") {
  auto dx = AtomMeasure::dirac({0.0, 0.0});
  auto dy = AtomMeasure::dirac({3.0, 4.0});
  CHECK(wasserstein(dx, dy) == doctest::Approx(5.0));
  CHECK(wasserstein(dx, dx) == doctest::Approx(0.0));

  AtomMeasure p, q;
  p.atoms = {{{0.0}, 0.5}, {{1.0}, 0.5}};
  q.atoms = {{{0.5}, 0.5}, {{1.5}, 0.5}};
  CHECK(wasserstein(p, q) == doctest::Approx(0.5));

  AtomMeasure bad;
  bad.atoms = {{{0.0}, 0.7}};
  CHECK_THROWS_WITH_AS(wasserstein(bad, dx), "not probability",
                       std::invalid_argument);
}

TEST_CASE("wasserstein matches the 1-d sorted-quantile oracle") {
  SubstreamRng rng(5, stream::kTest, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 2 + static_cast<int>(rng.below(7));
    std::vector<double> xs, ys;
    std::vector<Vec> px, py;
    for (int i = 0; i < k; ++i) {
      xs.push_back(rng.uniform(-3, 3));
      ys.push_back(rng.uniform(-3, 3));
      px.push_back({xs.back()});
      py.push_back({ys.back()});
    }
    CHECK(wasserstein(AtomMeasure::uniform(px), AtomMeasure::uniform(py)) ==
          doctest::Approx(sorted_w1(xs, ys)).epsilon(1e-10));
  }
}

TEST_CASE("exact OT support cap enforced") {
  std::vector<Vec> big;
  for (int i = 0; i < 300; ++i) big.push_back({static_cast<double>(i)});
  auto mb = AtomMeasure::uniform(big);
  CHECK_THROWS_WITH_AS(wasserstein(mb, mb), "exact OT size cap",
                       std::invalid_argument);
}

TEST_CASE("nested_wasserstein forced couplings and brute force") {
  auto single = manual_graph(0, {{0}});
  auto gp = std::make_shared<GraphSample>(single);
  DepthMeasure p{1, gp, {{0.0, 0.0}}};
  DepthMeasure q{1, gp, {{1.0, 0.0}}};
  // Single atom (x, delta_x) vs (y, delta_y): ||x-y|| + ||x-y||.
  CHECK(nested_wasserstein(p, q) == doctest::Approx(2.0));
  CHECK(nested_wasserstein(p, p) == doctest::Approx(0.0));

  DepthMeasure deep{2, gp, {{0.0, 0.0}}};
  CHECK_THROWS_AS(nested_wasserstein(p, deep), std::invalid_argument);

  // Depth 1, 3-node self-loop graphs: d_1 = W1 with cost ||u-v|| + ||u-v||.
  auto loops = manual_graph(1, {{0}, {1}, {2}});
  auto lp = std::make_shared<GraphSample>(loops);
  SubstreamRng rng(9, stream::kTest, 1);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Vec> sa, sb;
    for (int i = 0; i < 3; ++i) {
      sa.push_back({rng.uniform(-1, 1)});
      sb.push_back({rng.uniform(-1, 1)});
    }
    DepthMeasure a{1, lp, sa}, b{1, lp, sb};
    // Exhaustive coupling enumeration over the 6 permutations.
    std::vector<int> idx{0, 1, 2};
    double best = 1e300;
    do {
      double c = 0.0;
      for (int i = 0; i < 3; ++i)
        c += 2.0 * std::abs(sa[i][0] - sb[idx[i]][0]);
      best = std::min(best, c / 3);
    } while (std::next_permutation(idx.begin(), idx.end()));
    CHECK(nested_wasserstein(a, b) == doctest::Approx(best).epsilon(1e-10));
  }
}

TEST_CASE("nested distance dominates the flat marginal distance") {
  SubstreamRng rng(11, stream::kTest, 2);
  auto kernel = ConnectionKernel::constant(1.0);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = sample_graph(kernel, 3, 0.5, 100 + rep);
    auto gp = std::make_shared<GraphSample>(g);
    std::vector<Vec> sa, sb;
    for (int i = 0; i < g.size(); ++i) {
      sa.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      sb.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    }
    DepthMeasure a{2, gp, sa}, b{2, gp, sb};
    double flat = wasserstein(AtomMeasure::uniform(sa), AtomMeasure::uniform(sb));
    CHECK(nested_wasserstein(a, b) >= flat - 1e-10);
  }
}

TEST_CASE("unroll_phi structure and preconditions") {
  auto g = manual_graph(1, {{0, 1}, {1}, {1, 2}});
  auto gp = std::make_shared<GraphSample>(g);
  auto init = InitialCondition::from_states({{1.0}, {2.0}, {3.0}});
  auto d1 = unroll_phi(gp, init, 1);
  CHECK(d1.depth == 1);
  // m=1 is build_nested in depth form: distance 0 to itself via d_1 and the
  // sub-measures agree with the adjacency.
  auto nu = build_nested(gp, init);
  for (int s = 0; s < 3; ++s) {
    auto sub = nu.sub_measure(s);
    CHECK(sub.atoms.size() <= g.adjacency[s].size());
  }
  CHECK(nested_wasserstein(d1, d1) == doctest::Approx(0.0));

  auto dup = InitialCondition::from_states({{1.0}, {1.0}, {3.0}});
  CHECK_THROWS_WITH_AS(unroll_phi(gp, dup, 1), "conditional kernel ambiguous",
                       std::invalid_argument);
  CHECK_THROWS_AS(unroll_phi(gp, init, 0), std::invalid_argument);
}

TEST_CASE("tilde measure and pi projection") {
  auto g = sample_graph(ConnectionKernel::constant(1.0), 2, 0.5, 31);
  const int slot = 2;
  auto tm = tilde_measure(g, slot);
  REQUIRE(tm.atoms.size() == static_cast<size_t>(g.size()));
  const double w = 1.0 / (g.rho * g.size());
  double ones = 0.0;
  for (const auto& a : tm.atoms) {
    CHECK(a.weight == doctest::Approx(w));
    if (a.w == 1) ones += a.weight;
  }
  CHECK(tm.mass_on(1) == doctest::Approx(g.degree(slot) * w));
  CHECK(ones == doctest::Approx(tm.mass_on(1)));

  auto proj = project_pi(tm);
  double mass = 0.0;
  for (auto& a : proj.atoms) mass += a.weight;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  PlusMeasure only_zero;
  only_zero.atoms = {{0.1, 0, 1.0}};
  CHECK_THROWS_WITH_AS(project_pi(only_zero), "pi undefined",
                       std::invalid_argument);

  PlusMeasure mixed;
  mixed.atoms = {{0.1, 1, 1.0}, {0.7, 1, 3.0}, {0.4, 0, 2.0}};
  auto pm = project_pi(mixed);
  REQUIRE(pm.atoms.size() == 2);
  CHECK(pm.atoms[0].weight == doctest::Approx(0.25));
  CHECK(pm.atoms[1].weight == doctest::Approx(0.75));
}

TEST_CASE("breve measure and gamma lift") {
  auto g = manual_graph(1, {{0, 1}, {1}, {2}});
  auto breve = breve_measure(g);
  REQUIRE(breve.atoms.size() == 3);
  double mass = 0.0;
  for (auto& a : breve.atoms) mass += a.weight;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  auto embed = make_lift("circle_embed", {{"r", 1.0}}, 2);
  auto lifted = lift_gamma(breve, embed);
  REQUIRE(lifted.atoms.size() == 3);
  double lmass = 0.0;
  for (auto& a : lifted.atoms) {
    lmass += a.weight;
    CHECK(norm2(a.point) == doctest::Approx(1.0));
    for (auto& s : a.sub.atoms) CHECK(norm2(s.point) == doctest::Approx(1.0));
  }
  CHECK(lmass == doctest::Approx(1.0).epsilon(1e-12));

  auto constant = make_lift("constant", {{"c", 2.0}}, 1);
  auto collapsed = lift_gamma(breve, constant);
  for (auto& a : collapsed.atoms) {
    CHECK(a.point == Vec{2.0});
    REQUIRE(a.sub.atoms.size() == 1);  // duplicates merged
    CHECK(a.sub.atoms[0].weight == doctest::Approx(1.0));
  }
}

TEST_CASE("triangle inequality on random triples") {
  SubstreamRng rng(13, stream::kTest, 3);
  for (int rep = 0; rep < 100; ++rep) {
    const int k = 1 + static_cast<int>(rng.below(5));
    auto cloud = [&] {
      std::vector<Vec> pts;
      for (int i = 0; i < k; ++i)
        pts.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
      return AtomMeasure::uniform(pts);
    };
    auto a = cloud(), b = cloud(), c = cloud();
    CHECK(wasserstein(a, b) <=
          wasserstein(a, c) + wasserstein(c, b) + 1e-9);
  }
}

TEST_CASE("nested measure JSON round trip is lossless") {
  auto g = sample_graph(ConnectionKernel::cosine(1.0, 0.3), 3, 0.6, 77);
  auto init = InitialCondition::from_lift(
      make_lift("circle_embed", {{"r", 0.9}}, 2), g.positions);
  auto nu = build_nested(std::make_shared<GraphSample>(g), init);
  auto text = nested_to_json(nu);
  auto back = nested_from_json(text);
  CHECK(back.states == nu.states);  // bit-exact hex-float round trip
  CHECK(back.graph->adjacency == nu.graph->adjacency);
  CHECK(back.graph->rho == nu.graph->rho);
  CHECK(nested_to_json(back) == text);
}
