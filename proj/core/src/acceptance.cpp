#include "ldpnet/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ldpnet/dynamics.hpp"
#include "ldpnet/fields.hpp"
#include "ldpnet/graph.hpp"
#include "ldpnet/ldp.hpp"
#include "ldpnet/measures.hpp"
#include "ldpnet/pushforward.hpp"
#include "ldpnet/rates.hpp"
#include "ldpnet/rng.hpp"

namespace ldpnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConnectionKernel random_kernel(SubstreamRng& rng) {
  switch (rng.below(4)) {
    case 0:
      return ConnectionKernel::constant(rng.uniform(0.3, 3.0));
    case 1: {
      double base = rng.uniform(0.5, 2.0);
      return ConnectionKernel::cosine(base, base * rng.uniform(0.1, 0.8));
    }
    case 2:
      return ConnectionKernel::exp_cosine(rng.uniform(0.2, 1.5));
    default: {
      int q = 2 + static_cast<int>(rng.below(3));
      std::vector<std::vector<double>> block(q, std::vector<double>(q));
      for (auto& row : block)
        for (double& v : row) v = rng.uniform(0.3, 3.0);
      return ConnectionKernel::piecewise(std::move(block));
    }
  }
}

CircleDensity random_density(SubstreamRng& rng, int bins) {
  CircleDensity z;
  z.values.resize(bins);
  for (double& v : z.values) v = 0.05 + rng.uniform();
  double m = circle_mean(std::span<const double>(z.values));
  for (double& v : z.values) v /= m;
  return z;
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

using Clock = std::chrono::steady_clock;

// ---- criterion bodies ----

CriterionResult crit_rate_minimizer(const AcceptanceOptions& opt) {
  CriterionResult r{1, "rate-minimizer", true, "", 0};
  SubstreamRng rng(opt.seed, stream::kTest, 1);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    auto kernel = random_kernel(rng);
    double alpha = rng.uniform(-kPi, kPi);
    auto C = kernel.row(alpha, opt.bins);
    double cbar = circle_mean(std::span<const double>(C));
    CircleDensity zeta;
    zeta.values.resize(opt.bins);
    for (int b = 0; b < opt.bins; ++b) zeta.values[b] = C[b] / cbar;
    double v = std::abs(rate_node(kernel, alpha, zeta).value);
    worst = std::max(worst, v);
  }
  r.pass = worst <= 1e-10;
  r.detail = "max |rate at minimizer| = " + fmt(worst);
  return r;
}

CriterionResult crit_scalar_duality(const AcceptanceOptions& opt) {
  CriterionResult r{2, "scalar-duality", true, "", 0};
  SubstreamRng rng(opt.seed, stream::kTest, 2);
  double worst_a = 0.0, worst_g = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto kernel = random_kernel(rng);
    double alpha = rng.uniform(-kPi, kPi);
    auto zeta = random_density(rng, opt.bins);
    auto os = optimal_scale(kernel, alpha, zeta);

    // Golden-section oracle on [1e-6, 1e3]; the objective is strictly convex.
    const double gr = 0.6180339887498949;
    double lo = 1e-6, hi = 1e3;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = scale_objective(kernel, alpha, zeta, x1);
    double f2 = scale_objective(kernel, alpha, zeta, x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = scale_objective(kernel, alpha, zeta, x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = scale_objective(kernel, alpha, zeta, x2);
      }
    }
    const double amin = 0.5 * (lo + hi);
    worst_a = std::max(worst_a, std::abs(amin - os.a_star));
    const double node = rate_node(kernel, alpha, zeta).value;
    worst_g = std::max(worst_g, std::abs(os.check - node));
  }
  r.pass = worst_a <= 1e-6 && worst_g <= 1e-10;
  r.detail = "max |argmin - a*| = " + fmt(worst_a) +
             ", max |objective gap| = " + fmt(worst_g);
  return r;
}

CriterionResult crit_legendre(const AcceptanceOptions& opt) {
  CriterionResult r{3, "legendre-pairing", true, "", 0};
  SubstreamRng rng(opt.seed, stream::kTest, 3);
  double worst_dom = -kInf, worst_eq = 0.0;
  for (int i = 0; i < opt.legendre_pairs; ++i) {
    auto kernel = random_kernel(rng);
    double alpha = rng.uniform(-kPi, kPi);
    MassDensity gamma;
    gamma.values.resize(opt.bins);
    for (double& v : gamma.values)
      v = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 3.0);
    GridFunction h;
    h.values.resize(opt.bins);
    for (double& v : h.values) v = rng.uniform(-3.0, 2.0);

    const double rp = rate_plus(kernel, alpha, gamma);
    worst_dom = std::max(worst_dom, legendre_gap(kernel, alpha, gamma, h) - rp);
    auto hstar = optimal_test_function(kernel, alpha, gamma);
    worst_eq = std::max(
        worst_eq, std::abs(legendre_gap(kernel, alpha, gamma, hstar) - rp));
  }
  r.pass = worst_dom <= 1e-10 && worst_eq <= 1e-8;
  r.detail = "max domination excess = " + fmt(worst_dom) +
             ", max |pairing - rate| at h* = " + fmt(worst_eq);
  return r;
}

CriterionResult crit_degree_tail(const AcceptanceOptions&) {
  CriterionResult r{4, "degree-tail-scaling", true, "", 0};
  auto kernel = ConnectionKernel::constant(1.0);
  EventSpec spec;
  spec.kind = EventSpec::Kind::kDegreeTail;
  spec.self_loop_only = true;
  SparsitySchedule sched{1.0, 0.5};
  auto scan = ldp_scan(spec, kernel, sched, {100, 1000, 10000}, 64);
  double final_gap = std::abs(scan.rows.back().normalized - (-1.0));
  bool monotone = true;
  for (size_t i = 1; i < scan.rows.size(); ++i)
    if (std::abs(scan.rows[i].gap) >= std::abs(scan.rows[i - 1].gap))
      monotone = false;
  r.pass = final_gap <= 0.01 && monotone;
  r.detail = "gap at n=1e4 = " + fmt(final_gap) +
             (monotone ? ", gaps monotone" : ", gaps NOT monotone");
  return r;
}

CriterionResult crit_chernoff(const AcceptanceOptions&) {
  CriterionResult r{5, "chernoff-domination", true, "", 0};
  auto kernel = ConnectionKernel::cosine(1.0, 0.4);
  const int n = 1000;
  const double rho = 0.1;
  const double as[5] = {0.25, 0.5, 1.0, 2.0, 4.0};
  const double ms[5] = {1.2, 1.5, 2.0, 3.0, 5.0};
  double worst_ratio = kInf;
  int violations = 0;
  for (double m : ms) {
    const double exact = exact_upper_tail(kernel, n, rho, 0, m);
    for (double a : as) {
      const double bound = chernoff_bound(kernel, n, rho, 0, a, m);
      if (bound < exact) ++violations;
      if (exact > 0.0) worst_ratio = std::min(worst_ratio, bound / exact);
    }
  }
  r.pass = violations == 0;
  r.detail = violations == 0
                 ? "bound dominates on 5x5 grid, min bound/exact = " +
                       fmt(worst_ratio)
                 : fmt(violations) + " grid points violated";
  return r;
}

CriterionResult crit_euler_order(const AcceptanceOptions& opt) {
  CriterionResult r{6, "euler-order", true, "", 0};
  auto kernel = ConnectionKernel::cosine(1.0, 0.3);
  auto g = sample_graph(kernel, 200, 0.05, opt.seed);
  auto fields = make_field("rotor", {{"omega", 1.0}, {"K", 0.8}}, 2);
  auto lift = make_lift("circle_embed", {{"r", 1.0}}, 2);
  auto init = InitialCondition::from_lift(lift, g.positions);
  const double T = 1.0;

  auto ref = simulate(g, init, fields, T, 4096, Scheme::kRk4);
  auto sup_err = [&](const TrajectoryBundle& tb) {
    double e = 0.0;
    for (int node = 0; node < tb.nodes; ++node)
      for (size_t s = 0; s < tb.times.size(); ++s)
        e = std::max(e, euclidean(tb.state_vec(node, static_cast<int>(s)),
                                  ref.at_time(node, tb.times[s])));
    return e;
  };

  std::vector<double> errs;
  for (int m = 8; m <= 256; m *= 2)
    errs.push_back(sup_err(simulate(g, init, fields, T, m, Scheme::kEuler)));
  double rmin = kInf, rmax = 0.0;
  for (size_t i = 1; i < errs.size(); ++i) {
    double ratio = errs[i - 1] / errs[i];
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }
  r.pass = rmin >= 1.7 && rmax <= 2.3;
  r.detail = "halving ratios in [" + fmt(rmin) + ", " + fmt(rmax) + "]";
  return r;
}

CriterionResult crit_factorization(const AcceptanceOptions& opt) {
  CriterionResult r{7, "psi-factorization", true, "", 0};
  SubstreamRng rng(opt.seed, stream::kTest, 7);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const int n = 1 + static_cast<int>(rng.below(24));  // 3..49 nodes
    const double rho = rng.uniform(0.2, 0.8);
    auto kernel = ConnectionKernel::constant(1.0);
    auto g = sample_graph(kernel, n, rho, opt.seed + i, true);
    const bool planar = (i % 2) == 0;
    auto fields = planar
                      ? make_field("kuramoto", {{"omega", 0.5}, {"K", 1.0}}, 1)
                      : make_field("rotor", {{"omega", 1.0}, {"K", 0.7}}, 2);
    auto lift = planar ? make_lift("cosine", {{"a", 1.0}}, 1)
                       : make_lift("circle_embed", {{"r", 1.0}}, 2);
    auto init = InitialCondition::from_lift(lift, g.positions);
    PushforwardConfig cfg;
    cfg.T = 1.0;
    cfg.m = 1 + (i % 3);
    worst = std::max(worst, factorization_check(g, init, fields, cfg).gap);
  }
  r.pass = worst <= 1e-9;
  r.detail = "max route gap = " + fmt(worst);
  return r;
}

CriterionResult crit_mc_oracle(const AcceptanceOptions& opt) {
  CriterionResult r{8, "mc-oracle-agreement", true, "", 0};
  auto kernel = ConnectionKernel::constant(1.0);
  const int n = 100;
  const double rho = 0.1;
  EventSpec spec;
  spec.kind = EventSpec::Kind::kDegreeTail;
  spec.threshold_mass = 1.0;
  const double exact = exact_event_prob(spec, kernel, n, rho);
  int covered = 0;
  for (int s = 0; s < opt.mc_seeds; ++s) {
    auto est = mc_event_prob(spec, kernel, n, rho, opt.mc_trials,
                             opt.seed + 1000 + s, opt.threads);
    if (est.lo <= exact && exact <= est.hi) ++covered;
  }
  r.pass = covered >= (opt.mc_seeds * 18) / 20;
  r.detail = "Wilson coverage " + fmt(covered) + "/" + fmt(opt.mc_seeds) +
             ", exact p = " + fmt(exact);
  return r;
}

CriterionResult crit_arc_event(const AcceptanceOptions& opt) {
  CriterionResult r{9, "arc-event-closed-form", true, "", 0};
  auto kernel = ConnectionKernel::constant(1.0);
  const double p = 0.25, lam = 0.5;
  // Arc of normalized length 1/4 aligned with the grid.
  std::vector<ArcConstraint> cons{{-kPi, -kPi / 2, lam}};
  const double numeric =
      arc_event_rate(kernel, 0.0, cons, opt.bins, opt.seed);
  const double kl = lam * std::log(lam / p) +
                    (1 - lam) * std::log((1 - lam) / (1 - p));
  const double closed = 1.0 - std::exp(-kl);
  r.pass = std::abs(numeric - closed) <= 1e-3;
  r.detail = "numeric " + fmt(numeric) + " vs closed form " + fmt(closed);
  return r;
}

// Exhaustive-coupling oracle: both measures expanded to equal-size uniform
// supports, minimum over all permutations.
double perm_ot(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  const size_t k = a.size();
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  double best = kInf;
  do {
    double c = 0.0;
    for (size_t i = 0; i < k; ++i) c += euclidean(a[i], b[idx[i]]);
    best = std::min(best, c / k);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

CriterionResult crit_ot_oracle(const AcceptanceOptions& opt) {
  CriterionResult r{10, "ot-brute-force", true, "", 0};
  SubstreamRng rng(opt.seed, stream::kTest, 10);
  double worst = 0.0, worst_ax = 0.0;
  for (int i = 0; i < opt.ot_instances; ++i) {
    const int k = 1 + static_cast<int>(rng.below(6));
    auto cloud = [&](int count) {
      std::vector<Vec> pts;
      for (int c = 0; c < count; ++c)
        pts.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
      return pts;
    };
    auto pa = cloud(k), pb = cloud(k), pc = cloud(k);
    auto ma = AtomMeasure::uniform(pa);
    auto mb = AtomMeasure::uniform(pb);
    auto mc = AtomMeasure::uniform(pc);
    const double dab = wasserstein(ma, mb);
    worst = std::max(worst, std::abs(dab - perm_ot(pa, pb)));
    worst_ax = std::max(worst_ax, std::abs(dab - wasserstein(mb, ma)));
    worst_ax = std::max(worst_ax, wasserstein(ma, ma));
    worst_ax = std::max(
        worst_ax, dab - wasserstein(ma, mc) - wasserstein(mc, mb));
  }

  // Nested distance vs an independent recursive oracle on equal-degree
  // graphs (complete, ring, self-loop-only), depth 2.
  for (int i = 0; i < opt.ot_instances / 10; ++i) {
    const int N = 5;
    GraphSample g;
    g.n = 2;
    g.rho = 1.0;
    g.kernel_id = "oracle";
    g.positions = positions(2);
    g.adjacency.resize(N);
    const int shape = i % 3;
    for (int s = 0; s < N; ++s) {
      if (shape == 0) {
        for (int k2 = 0; k2 < N; ++k2) g.adjacency[s].push_back(k2);
      } else if (shape == 1) {
        int prev = (s + N - 1) % N;
        g.adjacency[s] = {std::min(prev, s), std::max(prev, s)};
      } else {
        g.adjacency[s] = {s};
      }
    }
    auto gp = std::make_shared<GraphSample>(g);
    auto states = [&] {
      std::vector<Vec> st;
      for (int s = 0; s < N; ++s)
        st.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      return st;
    };
    DepthMeasure P{2, gp, states()};
    DepthMeasure Q{2, gp, states()};
    const double fast = nested_wasserstein(P, Q);

    // Oracle: permutation OT at every level of the recursion.
    auto level_cost = [&](const std::vector<std::vector<double>>* prior,
                          int a, int b) {
      const auto& na = gp->adjacency[a];
      const auto& nb = gp->adjacency[b];
      std::vector<Vec> xa, xb;
      for (int t : na) xa.push_back(P.states[t]);
      for (int t : nb) xb.push_back(Q.states[t]);
      if (!prior) return perm_ot(xa, xb);
      // permutation OT with augmented cost
      std::vector<int> idx(na.size());
      std::iota(idx.begin(), idx.end(), 0);
      double best = kInf;
      do {
        double c = 0.0;
        for (size_t t = 0; t < na.size(); ++t)
          c += euclidean(xa[t], xb[idx[t]]) + (*prior)[na[t]][nb[idx[t]]];
        best = std::min(best, c / na.size());
      } while (std::next_permutation(idx.begin(), idx.end()));
      return best;
    };
    std::vector<std::vector<double>> d0(N, std::vector<double>(N));
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) d0[a][b] = level_cost(nullptr, a, b);
    std::vector<std::vector<double>> d1(N, std::vector<double>(N));
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) d1[a][b] = level_cost(&d0, a, b);
    std::vector<int> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    double oracle = kInf;
    do {
      double c = 0.0;
      for (int a = 0; a < N; ++a)
        c += euclidean(P.states[a], Q.states[idx[a]]) + d1[a][idx[a]];
      oracle = std::min(oracle, c / N);
    } while (std::next_permutation(idx.begin(), idx.end()));
    worst = std::max(worst, std::abs(fast - oracle));
  }

  r.pass = worst <= 1e-9 && worst_ax <= 1e-9;
  r.detail = "max |solver - enumeration| = " + fmt(worst) +
             ", max axiom violation = " + fmt(worst_ax);
  return r;
}

}  // namespace

std::vector<std::pair<int, std::string>> acceptance_list() {
  return {{1, "rate-minimizer"},
          {2, "scalar-duality"},
          {3, "legendre-pairing"},
          {4, "degree-tail-scaling"},
          {5, "chernoff-domination"},
          {6, "euler-order"},
          {7, "psi-factorization"},
          {8, "mc-oracle-agreement"},
          {9, "arc-event-closed-form"},
          {10, "ot-brute-force"}};
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::vector<int>& only) {
  using Body = CriterionResult (*)(const AcceptanceOptions&);
  const Body bodies[10] = {
      crit_rate_minimizer, crit_scalar_duality, crit_legendre,
      crit_degree_tail,    crit_chernoff,       crit_euler_order,
      crit_factorization,  crit_mc_oracle,      crit_arc_event,
      crit_ot_oracle};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), id) == only.end())
      continue;
    auto t0 = Clock::now();
    CriterionResult res;
    try {
      res = bodies[id - 1](opt);
    } catch (const std::exception& e) {
      res.id = id;
      res.name = acceptance_list()[id - 1].second;
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace ldpnet
