#include "ldpnet/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ldpnet/rng.hpp"

namespace ldpnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWilsonZ = 1.959963984540054;

// Off-diagonal edge probabilities for node j's in-row, by source slot.
std::vector<double> row_params(const ConnectionKernel& kernel, int n,
                               double rho, int slot) {
  const int N = 2 * n + 1;
  const auto pos = positions(n);
  std::vector<double> p;
  p.reserve(N - 1);
  for (int k = 0; k < N; ++k) {
    if (k == slot) continue;
    p.push_back(std::min(1.0, rho * kernel(pos[slot], pos[k])));
  }
  return p;
}

// Poisson-binomial pmf of sum of Bernoulli(p_i), truncated after `cap`
// counts when cap >= 0 (tail mass dropped).
std::vector<double> pbin_pmf(const std::vector<double>& probs, int cap = -1) {
  const int full = static_cast<int>(probs.size());
  const int top = cap < 0 ? full : std::min(cap, full);
  std::vector<double> dp(top + 1, 0.0);
  dp[0] = 1.0;
  int reach = 0;
  for (double p : probs) {
    reach = std::min(reach + 1, top);
    for (int k = reach; k >= 1; --k) dp[k] = dp[k] * (1.0 - p) + dp[k - 1] * p;
    dp[0] *= (1.0 - p);
  }
  return dp;
}

double kahan_sum(const std::vector<double>& v, int lo, int hi) {
  double s = 0.0, c = 0.0;
  for (int i = lo; i <= hi && i < static_cast<int>(v.size()); ++i) {
    if (i < 0) continue;
    double y = v[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

int arc_of(const std::vector<Arc>& arcs, double theta) {
  for (size_t i = 0; i < arcs.size(); ++i)
    if (theta >= arcs[i].lo && theta < arcs[i].hi) return static_cast<int>(i);
  // Right-closed wrap: pi belongs to the arc whose hi is pi.
  for (size_t i = 0; i < arcs.size(); ++i)
    if (theta == arcs[i].hi) return static_cast<int>(i);
  return -1;
}

}  // namespace

int EventSpec::count_threshold(int n, double rho) const {
  if (self_loop_only) return 1;
  return static_cast<int>(
      std::floor(threshold_mass * rho * (2 * n + 1) + 1e-12));
}

std::string EventSpec::to_json() const {
  std::ostringstream out;
  if (kind == Kind::kDegreeTail) {
    out << "{\"kind\": \"degree-tail\", \"j\": " << j
        << ", \"threshold_mass\": " << threshold_mass
        << ", \"self_loop_only\": " << (self_loop_only ? "true" : "false")
        << "}";
  } else {
    out << "{\"kind\": \"arc-occupancy\", \"j\": " << j << ", \"arcs\": [";
    for (size_t i = 0; i < arcs.size(); ++i)
      out << (i ? ", " : "") << "[" << arcs[i].lo << ", " << arcs[i].hi << "]";
    out << "], \"lambdas\": [";
    for (size_t i = 0; i < lambdas.size(); ++i)
      out << (i ? ", " : "") << lambdas[i];
    out << "]}";
  }
  return out.str();
}

std::vector<std::vector<double>> arc_count_law(const ConnectionKernel& kernel,
                                               int n, double rho, int j,
                                               const std::vector<Arc>& arcs) {
  if (n > 20000) throw std::invalid_argument("size cap");
  if (arcs.empty()) throw std::invalid_argument("arcs must partition the circle");
  double len = 0.0;
  for (const auto& a : arcs) len += a.hi - a.lo;
  if (std::abs(len - kTwoPi) > 1e-9)
    throw std::invalid_argument("arcs must partition the circle");

  const int N = 2 * n + 1;
  const int slot = j + n;
  const auto pos = positions(n);
  std::vector<std::vector<double>> params(arcs.size());
  for (int k = 0; k < N; ++k) {
    if (k == slot) continue;
    int a = arc_of(arcs, pos[k]);
    if (a < 0) throw std::invalid_argument("arcs must partition the circle");
    params[a].push_back(std::min(1.0, rho * kernel(pos[slot], pos[k])));
  }

  std::vector<std::vector<double>> law(arcs.size());
  const int self_arc = arc_of(arcs, pos[slot]);
  for (size_t a = 0; a < arcs.size(); ++a) {
    auto pmf = pbin_pmf(params[a]);
    if (static_cast<int>(a) == self_arc) pmf.insert(pmf.begin(), 0.0);
    law[a] = std::move(pmf);
  }
  return law;
}

double exact_event_logp(const EventSpec& spec, const ConnectionKernel& kernel,
                        int n, double rho) {
  if (n > 20000) throw std::invalid_argument("size cap");
  const int N = 2 * n + 1;
  const int slot = spec.j + n;

  if (spec.kind == EventSpec::Kind::kDegreeTail) {
    const int thr = spec.count_threshold(n, rho);
    if (thr < 1) return -kInf;  // self-loop forces count >= 1
    auto probs = row_params(kernel, n, rho, slot);
    if (thr == 1) {
      // P(no off-diagonal edge) in log space.
      double s = 0.0;
      for (double p : probs) {
        if (p >= 1.0) return -kInf;
        s += std::log1p(-p);
      }
      return s;
    }
    auto dp = pbin_pmf(probs, thr - 1);
    double p = kahan_sum(dp, 0, thr - 1);
    return p > 0.0 ? std::log(p) : -kInf;
  }

  // Arc occupancy: enumerate counts of the constrained arcs; fold arcs with
  // lambda = 0 plus the uncovered remainder into one unconstrained "rest"
  // distribution, whose admissible range follows from the thresholds.
  if (spec.arcs.size() != spec.lambdas.size())
    throw std::invalid_argument("arcs/lambdas size mismatch");
  double lam_sum = 0.0;
  for (double l : spec.lambdas) lam_sum += l;
  if (lam_sum >= 1.0 + 1e-12)
    throw std::invalid_argument("infeasible constraints");

  const auto pos = positions(n);
  std::vector<std::vector<double>> cons_params;
  std::vector<double> cons_lambda;
  std::vector<double> rest_params;
  std::vector<int> cons_self;  // 1 if the self-loop sits in this arc
  int rest_self = 1;
  for (int k = 0; k < N; ++k) {
    double pk = k == slot ? -1.0
                          : std::min(1.0, rho * kernel(pos[slot], pos[k]));
    int hit = -1;
    for (size_t a = 0; a < spec.arcs.size(); ++a)
      if (pos[k] >= spec.arcs[a].lo && pos[k] < spec.arcs[a].hi &&
          spec.lambdas[a] > 0.0) {
        hit = static_cast<int>(a);
        break;
      }
    if (hit < 0) {
      if (k != slot) rest_params.push_back(pk);
      continue;
    }
    // One entry per constrained arc, in arc order.
    while (cons_params.size() <= static_cast<size_t>(hit)) {
      cons_params.emplace_back();
      cons_lambda.push_back(0.0);
      cons_self.push_back(0);
    }
    cons_lambda[hit] = spec.lambdas[hit];
    if (k == slot) {
      cons_self[hit] = 1;
      rest_self = 0;
    } else {
      cons_params[hit].push_back(pk);
    }
  }
  // Drop unused placeholder entries (arcs with lambda = 0 never got a slot).
  std::vector<std::vector<double>> carc;
  std::vector<double> clam;
  std::vector<int> cself;
  for (size_t a = 0; a < cons_params.size(); ++a)
    if (cons_lambda[a] > 0.0) {
      carc.push_back(std::move(cons_params[a]));
      clam.push_back(cons_lambda[a]);
      cself.push_back(cons_self[a]);
    }

  if (clam.empty()) return 0.0;  // trivially certain, log 1

  size_t joint = 1;
  for (const auto& v : carc) {
    joint *= v.size() + 2;
    if (joint > 20'000'000u) throw std::invalid_argument("enumeration cap");
  }

  std::vector<std::vector<double>> pmfs;
  for (size_t a = 0; a < carc.size(); ++a) {
    auto pmf = pbin_pmf(carc[a]);
    if (cself[a]) pmf.insert(pmf.begin(), 0.0);
    pmfs.push_back(std::move(pmf));
  }
  auto rest_pmf = pbin_pmf(rest_params);
  if (rest_self) rest_pmf.insert(rest_pmf.begin(), 0.0);
  std::vector<double> rest_cdf(rest_pmf.size());
  {
    double s = 0.0, c = 0.0;
    for (size_t i = 0; i < rest_pmf.size(); ++i) {
      double y = rest_pmf[i] - c;
      double t = s + y;
      c = (t - s) - y;
      s = t;
      rest_cdf[i] = std::min(1.0, s);
    }
  }

  // Recursive sweep over the joint support of the constrained counts.
  const int A = static_cast<int>(pmfs.size());
  std::vector<int> counts(A, 0);
  double total = 0.0, comp = 0.0;
  std::function<void(int, double)> rec = [&](int a, double w) {
    if (w == 0.0) return;
    if (a == A) {
      // Constraints: counts[i] >= clam[i] * T with T = S + R.
      long long S = 0;
      for (int c : counts) S += c;
      double rmax = kInf;
      for (int i = 0; i < A; ++i)
        rmax = std::min(rmax, counts[i] / clam[i] - static_cast<double>(S));
      if (rmax < -1e-12) return;
      int rtop = static_cast<int>(std::min(
          static_cast<double>(rest_cdf.size()) - 1, std::floor(rmax + 1e-9)));
      if (rtop < 0) return;
      double y = w * rest_cdf[rtop] - comp;
      double t = total + y;
      comp = (t - total) - y;
      total = t;
      return;
    }
    for (size_t c = 0; c < pmfs[a].size(); ++c) {
      counts[a] = static_cast<int>(c);
      rec(a + 1, w * pmfs[a][c]);
    }
  };
  rec(0, 1.0);
  return total > 0.0 ? std::log(std::min(1.0, total)) : -kInf;
}

double exact_event_prob(const EventSpec& spec, const ConnectionKernel& kernel,
                        int n, double rho) {
  double lp = exact_event_logp(spec, kernel, n, rho);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

namespace {

bool event_holds(const EventSpec& spec, const std::vector<int>& row,
                 const std::vector<double>& pos, int n, double rho) {
  if (spec.kind == EventSpec::Kind::kDegreeTail)
    return static_cast<int>(row.size()) <= spec.count_threshold(n, rho);
  const double T = static_cast<double>(row.size());
  for (size_t a = 0; a < spec.arcs.size(); ++a) {
    if (spec.lambdas[a] <= 0.0) continue;
    int cnt = 0;
    for (int k : row)
      if (pos[k] >= spec.arcs[a].lo && pos[k] < spec.arcs[a].hi) ++cnt;
    if (cnt + 1e-12 < spec.lambdas[a] * T) return false;
  }
  return true;
}

}  // namespace

McEstimate mc_event_prob(const EventSpec& spec, const ConnectionKernel& kernel,
                         int n, double rho, long long trials, uint64_t seed,
                         int threads) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int slot = spec.j + n;
  const auto pos = positions(n);

  auto count_range = [&](long long lo, long long hi) {
    long long hits = 0;
    for (long long t = lo; t < hi; ++t) {
      auto row = sample_in_row(kernel, n, rho, seed, slot,
                               static_cast<uint64_t>(t), true);
      if (event_holds(spec, row, pos, n, rho)) ++hits;
    }
    return hits;
  };

  long long hits = 0;
  threads = std::max(1, threads);
  if (threads == 1 || trials < 1000) {
    hits = count_range(0, trials);
  } else {
    std::vector<long long> part(threads, 0);
    std::vector<std::thread> pool;
    const long long chunk = (trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        const long long lo = w * chunk;
        const long long hi = std::min(trials, lo + chunk);
        if (lo < hi) part[w] = count_range(lo, hi);
      });
    for (auto& th : pool) th.join();
    for (long long h : part) hits += h;
  }

  McEstimate est;
  est.hits = hits;
  est.trials = trials;
  est.estimate = static_cast<double>(hits) / trials;
  const double z2 = kWilsonZ * kWilsonZ;
  const double nn = static_cast<double>(trials);
  const double center = (est.estimate + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half =
      kWilsonZ *
      std::sqrt(est.estimate * (1 - est.estimate) / nn + z2 / (4 * nn * nn)) /
      (1 + z2 / nn);
  est.lo = std::max(0.0, center - half);
  est.hi = std::min(1.0, center + half);
  return est;
}

double chernoff_bound(const ConnectionKernel& kernel, int n, double rho, int j,
                      double a, double m_thr) {
  if (a <= 0.0) throw std::invalid_argument("a must be positive");
  const int N = 2 * n + 1;
  const double em1 = std::expm1(a);
  auto probs = row_params(kernel, n, rho, j + n);
  double logb = -rho * N * a * m_thr + a;  // e^a from the self-loop
  for (double p : probs) logb += std::log1p(p * em1);
  return std::exp(logb);
}

double exact_upper_tail(const ConnectionKernel& kernel, int n, double rho,
                        int j, double m_thr) {
  const int N = 2 * n + 1;
  const int f = static_cast<int>(std::floor(m_thr * rho * N + 1e-12));
  if (f < 1) return 1.0;  // count >= 1 always
  auto probs = row_params(kernel, n, rho, j + n);
  // Full pmf, tail summed directly: 1 - CDF would bottom out at round-off
  // while the true tail can be exponentially smaller.
  auto dp = pbin_pmf(probs);
  return kahan_sum(dp, f, static_cast<int>(dp.size()) - 1);
}

ScanResult ldp_scan(const EventSpec& spec, const ConnectionKernel& kernel,
                    const SparsitySchedule& schedule,
                    const std::vector<int>& n_grid, int rate_bins,
                    uint64_t seed) {
  for (size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("n grid must be increasing");

  ScanResult res;
  double prev_speed = 0.0;
  for (int n : n_grid) {
    ScanRow row;
    row.n = n;
    row.rho = schedule.rho(n);
    row.speed = row.rho * (2 * n + 1);
    if (row.speed <= prev_speed)
      throw std::invalid_argument("speeds must increase along the grid");
    prev_speed = row.speed;

    const double alpha = positions(n)[spec.j + n];
    if (spec.kind == EventSpec::Kind::kDegreeTail) {
      row.predicted = -kernel_mass(kernel, alpha, rate_bins);
    } else {
      std::vector<ArcConstraint> cons;
      for (size_t a = 0; a < spec.arcs.size(); ++a)
        cons.push_back({spec.arcs[a].lo, spec.arcs[a].hi, spec.lambdas[a]});
      row.predicted = -arc_event_rate(kernel, alpha, cons, rate_bins, seed);
    }

    row.logp = exact_event_logp(spec, kernel, n, row.rho);
    row.zero_prob = row.logp == -kInf;
    row.normalized = row.zero_prob ? -kInf : row.logp / row.speed;
    row.gap = row.normalized - row.predicted;
    res.rows.push_back(row);
  }
  return res;
}

std::string ScanResult::csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "n,rho,speed,logp,normalized,predicted,gap\n";
  for (const auto& r : rows)
    out << r.n << "," << r.rho << "," << r.speed << "," << r.logp << ","
        << r.normalized << "," << r.predicted << "," << r.gap << "\n";
  return out.str();
}

}  // namespace ldpnet
