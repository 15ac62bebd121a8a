#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ldpnet/ldp.hpp"

using namespace ldpnet;

namespace {

// Definitional oracle: enumerate all 2^(2n) off-diagonal edge subsets of the
// target row and accumulate the event probability directly.
double brute_event_prob(const EventSpec& spec, const ConnectionKernel& kernel,
                        int n, double rho) {
  const int N = 2 * n + 1;
  const int slot = spec.j + n;
  auto pos = positions(n);
  std::vector<double> p;
  std::vector<int> idx;
  for (int k = 0; k < N; ++k) {
    if (k == slot) continue;
    p.push_back(std::min(1.0, rho * kernel(pos[slot], pos[k])));
    idx.push_back(k);
  }
  const int E = static_cast<int>(p.size());
  double total = 0.0;
  for (int mask = 0; mask < (1 << E); ++mask) {
    double w = 1.0;
    std::vector<int> row{slot};
    for (int e = 0; e < E; ++e) {
      if ((mask >> e) & 1) {
        w *= p[e];
        row.push_back(idx[e]);
      } else {
        w *= 1.0 - p[e];
      }
    }
    bool ok = true;
    if (spec.kind == EventSpec::Kind::kDegreeTail) {
      ok = static_cast<int>(row.size()) <= spec.count_threshold(n, rho);
    } else {
      const double T = static_cast<double>(row.size());
      for (size_t a = 0; a < spec.arcs.size(); ++a) {
        if (spec.lambdas[a] <= 0.0) continue;
        int cnt = 0;
        for (int k : row)
          if (pos[k] >= spec.arcs[a].lo && pos[k] < spec.arcs[a].hi) ++cnt;
        if (cnt + 1e-12 < spec.lambdas[a] * T) ok = false;
      }
    }
    if (ok) total += w;
  }
  return total;
}

}  // namespace

TEST_CASE("arc_count_law small closed forms") {
  auto k = ConnectionKernel::constant(1.0);

  // n = 1, full circle: count = 1 + Bin(2, rho).
  auto law = arc_count_law(k, 1, 0.1, 0, {{-kPi, kPi}});
  REQUIRE(law.size() == 1);
  REQUIRE(law[0].size() == 4);
  CHECK(law[0][0] == 0.0);  // self-loop forces count >= 1
  CHECK(law[0][1] == doctest::Approx(0.81));
  CHECK(law[0][2] == doctest::Approx(0.18));
  CHECK(law[0][3] == doctest::Approx(0.01));

  // Vanishing rho: point mass at the self-loop count.
  auto tiny = arc_count_law(k, 3, 1e-300, 0, {{-kPi, 0.0}, {0.0, kPi}});
  CHECK(tiny[0][0] == doctest::Approx(1.0));  // self at theta=0 sits in arc 1
  CHECK(tiny[1][1] == doctest::Approx(1.0));

  // Each arc law is a probability vector.
  auto pw = ConnectionKernel::piecewise({{0.6, 1.4}, {1.1, 0.9}});
  auto big = arc_count_law(pw, 50, 0.3, 7, {{-kPi, 0.3}, {0.3, kPi}});
  for (const auto& pmf : big) {
    double mass = 0.0;
    for (double v : pmf) {
      CHECK(v >= 0.0);
      mass += v;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("arc_count_law input contracts") {
  auto k = ConnectionKernel::constant(1.0);
  CHECK_THROWS_WITH_AS(arc_count_law(k, 20001, 0.1, 0, {{-kPi, kPi}}),
                       "size cap", std::invalid_argument);
  CHECK_THROWS_AS(arc_count_law(k, 2, 0.1, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(arc_count_law(k, 2, 0.1, 0, {{-kPi, 0.0}}),
                  std::invalid_argument);  // does not cover the circle
}

TEST_CASE("arc_count_law matches full row enumeration") {
  auto k = ConnectionKernel::cosine(1.0, 0.5);
  const int n = 3, slot = 1 + n;
  const double rho = 0.35;
  std::vector<Arc> arcs{{-kPi, -1.0}, {-1.0, 1.2}, {1.2, kPi}};
  auto law = arc_count_law(k, n, rho, 1, arcs);

  auto pos = positions(n);
  std::vector<double> p;
  std::vector<int> arc_of_edge;
  auto arc_idx = [&](double t) {
    for (size_t a = 0; a < arcs.size(); ++a)
      if (t >= arcs[a].lo && t < arcs[a].hi) return static_cast<int>(a);
    return static_cast<int>(arcs.size()) - 1;
  };
  for (int j = 0; j < 2 * n + 1; ++j) {
    if (j == slot) continue;
    p.push_back(std::min(1.0, rho * k(pos[slot], pos[j])));
    arc_of_edge.push_back(arc_idx(pos[j]));
  }
  const int self_arc = arc_idx(pos[slot]);
  std::vector<std::vector<double>> marg(arcs.size());
  for (size_t a = 0; a < arcs.size(); ++a)
    marg[a].assign(law[a].size(), 0.0);
  const int E = static_cast<int>(p.size());
  for (int mask = 0; mask < (1 << E); ++mask) {
    double w = 1.0;
    std::vector<int> cnt(arcs.size(), 0);
    cnt[self_arc] = 1;
    for (int e = 0; e < E; ++e) {
      if ((mask >> e) & 1) {
        w *= p[e];
        ++cnt[arc_of_edge[e]];
      } else {
        w *= 1.0 - p[e];
      }
    }
    for (size_t a = 0; a < arcs.size(); ++a) marg[a][cnt[a]] += w;
  }
  for (size_t a = 0; a < arcs.size(); ++a)
    for (size_t c = 0; c < law[a].size(); ++c)
      CHECK(law[a][c] == doctest::Approx(marg[a][c]).epsilon(1e-12));
}

TEST_CASE("exact degree-tail probabilities") {
  auto k = ConnectionKernel::constant(1.0);

  EventSpec certain;
  certain.threshold_mass = 10.0;
  CHECK(std::abs(exact_event_logp(certain, k, 8, 0.2)) < 1e-12);
  CHECK(exact_event_prob(certain, k, 8, 0.2) == doctest::Approx(1.0));

  EventSpec impossible;
  impossible.threshold_mass = 0.0;
  CHECK(exact_event_prob(impossible, k, 8, 0.2) == 0.0);
  CHECK(std::isinf(exact_event_logp(impossible, k, 8, 0.2)));

  // Self-loop-only survives far past double underflow.
  EventSpec lonely;
  lonely.self_loop_only = true;
  const int n = 10000;
  const double rho = 0.2;
  CHECK(exact_event_logp(lonely, k, n, rho) ==
        doctest::Approx(2 * n * std::log1p(-rho)).epsilon(1e-12));
  CHECK(exact_event_prob(lonely, k, n, rho) == 0.0);  // underflow, by design

  // Degree <= 1 with a mass threshold resolving to count 1.
  EventSpec deg1;
  deg1.threshold_mass = 1.0 / (0.2 * 11);
  CHECK(exact_event_prob(deg1, k, 5, 0.2) ==
        doctest::Approx(std::pow(0.8, 10)).epsilon(1e-12));
}

TEST_CASE("exact degree tail matches row enumeration") {
  auto k = ConnectionKernel::cosine(1.0, 0.4);
  for (double mass : {0.4, 0.8, 1.2}) {
    EventSpec spec;
    spec.j = -1;
    spec.threshold_mass = mass;
    double brute = brute_event_prob(spec, k, 3, 0.4);
    CHECK(exact_event_prob(spec, k, 3, 0.4) ==
          doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("exact arc occupancy matches row enumeration") {
  auto k = ConnectionKernel::cosine(1.0, 0.3);
  EventSpec spec;
  spec.kind = EventSpec::Kind::kArcOccupancy;
  spec.j = 1;
  spec.arcs = {{-kPi, -0.5}, {-0.5, 0.8}, {0.8, kPi}};

  for (auto lambdas : std::vector<std::vector<double>>{
           {0.4, 0.0, 0.0}, {0.3, 0.3, 0.0}, {0.2, 0.2, 0.2}, {0.0, 0.0, 0.0}}) {
    spec.lambdas = lambdas;
    double brute = brute_event_prob(spec, k, 3, 0.45);
    CHECK(exact_event_prob(spec, k, 3, 0.45) ==
          doctest::Approx(brute).epsilon(1e-11));
  }

  spec.lambdas = {0.6, 0.5, 0.0};
  CHECK_THROWS_WITH_AS(exact_event_prob(spec, k, 3, 0.45),
                       "infeasible constraints", std::invalid_argument);
}

TEST_CASE("monte carlo estimator") {
  auto k = ConnectionKernel::constant(1.0);

  EventSpec certain;
  certain.threshold_mass = 10.0;
  auto sure = mc_event_prob(certain, k, 5, 0.2, 2000, 42);
  CHECK(sure.estimate == 1.0);
  CHECK(sure.hits == 2000);
  CHECK(sure.hi > 0.999);

  EventSpec impossible;
  impossible.threshold_mass = 0.0;
  auto zero = mc_event_prob(impossible, k, 5, 0.2, 2000, 42);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.lo <= 1e-12);

  // Same seed, different worker counts: identical tallies.
  EventSpec tail;
  tail.threshold_mass = 1.0;
  auto t1 = mc_event_prob(tail, k, 10, 0.15, 4000, 7, 1);
  auto t4 = mc_event_prob(tail, k, 10, 0.15, 4000, 7, 4);
  CHECK(t1.hits == t4.hits);
  CHECK(t1.estimate == t4.estimate);

  // Wilson interval covers the exact value.
  double exact = exact_event_prob(tail, k, 10, 0.15);
  auto est = mc_event_prob(tail, k, 10, 0.15, 20000, 3);
  CHECK(est.lo <= exact);
  CHECK(est.hi >= exact);
  CHECK(est.lo < est.hi);

  CHECK_THROWS_AS(mc_event_prob(tail, k, 10, 0.15, 0, 3), std::invalid_argument);
}

TEST_CASE("chernoff bound dominates the exact tail") {
  for (auto& k : {ConnectionKernel::constant(1.0),
                  ConnectionKernel::cosine(1.0, 0.6)}) {
    for (double m_thr : {1.2, 1.5, 2.0, 3.0})
      for (double a : {0.1, 0.5, 1.0, 2.0}) {
        double bound = chernoff_bound(k, 30, 0.2, 2, a, m_thr);
        double exact = exact_upper_tail(k, 30, 0.2, 2, m_thr);
        CHECK(bound >= exact);
      }
  }
  auto k = ConnectionKernel::constant(1.0);
  CHECK(exact_upper_tail(k, 30, 0.2, 0, 0.0) == 1.0);
  // The exact tail is nonincreasing in the threshold.
  double prev = 1.0;
  for (double m_thr : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    double cur = exact_upper_tail(k, 30, 0.2, 0, m_thr);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  CHECK_THROWS_WITH_AS(chernoff_bound(k, 30, 0.2, 0, 0.0, 1.0),
                       "a must be positive", std::invalid_argument);
  CHECK_THROWS_WITH_AS(chernoff_bound(k, 30, 0.2, 0, -1.0, 1.0),
                       "a must be positive", std::invalid_argument);
}

TEST_CASE("ldp scan against the closed-form self-loop tail") {
  auto k = ConnectionKernel::constant(1.0);
  EventSpec lonely;
  lonely.self_loop_only = true;
  SparsitySchedule sched{1.0, 0.5};
  auto res = ldp_scan(lonely, k, sched, {10, 100, 1000});
  CHECK(res.measure_speed_exponent == doctest::Approx(2.0));
  REQUIRE(res.rows.size() == 3);
  double prev_gap = 1e300;
  for (const auto& row : res.rows) {
    const int N = 2 * row.n + 1;
    CHECK(row.rho == doctest::Approx(sched.rho(row.n)));
    CHECK(row.speed == doctest::Approx(row.rho * N));
    CHECK(row.logp ==
          doctest::Approx(2 * row.n * std::log1p(-row.rho)).epsilon(1e-12));
    CHECK(row.normalized == doctest::Approx(row.logp / row.speed));
    CHECK(row.predicted == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(row.gap < 0.0);  // log(1-rho)/rho < -1, converging up
    CHECK(std::abs(row.gap) < prev_gap);
    prev_gap = std::abs(row.gap);
    CHECK(!row.zero_prob);
  }
  CHECK(res.csv().rfind("n,rho,speed,logp,normalized,predicted,gap", 0) == 0);

  CHECK_THROWS_AS(ldp_scan(lonely, k, sched, {100, 100}), std::invalid_argument);
  CHECK_THROWS_AS(ldp_scan(lonely, k, sched, {100, 50}), std::invalid_argument);
}

TEST_CASE("ldp scan stays finite when probabilities underflow doubles") {
  auto k = ConnectionKernel::constant(1.0);
  EventSpec lonely;
  lonely.self_loop_only = true;
  SparsitySchedule sched{0.9, 0.2};  // heavy rho, probabilities collapse fast
  auto res = ldp_scan(lonely, k, sched, {5, 5000});
  for (const auto& row : res.rows) {
    CHECK(!row.zero_prob);
    CHECK(std::isfinite(row.normalized));
  }
  // The large row is far beyond double range; the log path survives.
  CHECK(std::exp(res.rows[1].logp) == 0.0);
}
