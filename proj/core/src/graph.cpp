#include "ldpnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ldpnet/rng.hpp"

namespace ldpnet {

double SparsitySchedule::rho(int n) const {
  return c * std::pow(2.0 * n + 1.0, -beta);
}

bool SparsitySchedule::admissible(int n_lo, int n_hi) const {
  if (beta <= 0.0 || beta >= 1.0 || c <= 0.0) return false;
  // rho decreasing toward 0 and N*rho increasing along the grid.
  double r_lo = rho(n_lo), r_hi = rho(n_hi);
  double s_lo = (2.0 * n_lo + 1.0) * r_lo, s_hi = (2.0 * n_hi + 1.0) * r_hi;
  return r_hi < r_lo && s_hi > s_lo && r_lo <= 1.0;
}

std::vector<double> positions(int n) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  const int N = 2 * n + 1;
  std::vector<double> theta(N);
  for (int j = -n; j <= n; ++j)
    theta[j + n] = wrap_angle(kTwoPi * j / N);
  return theta;
}

namespace {

// One in-row: self-loop plus Bernoulli(min(1, rho*C)) off-diagonal entries,
// drawn with geometric skipping under the envelope rho*C_ub.
std::vector<int> draw_row(const ConnectionKernel& kernel,
                          const std::vector<double>& theta, double rho,
                          int slot, SubstreamRng rng, bool allow_clip) {
  const int N = static_cast<int>(theta.size());
  const double pmax = std::min(1.0, rho * kernel.upper_bound());
  if (rho * kernel.upper_bound() > 1.0 && !allow_clip)
    throw std::invalid_argument("probability overflow");

  std::vector<int> row;
  if (pmax >= 1.0) {
    row.reserve(N);
    for (int k = 0; k < N; ++k) {
      if (k == slot) {
        row.push_back(k);
        continue;
      }
      double p = std::min(1.0, rho * kernel(theta[slot], theta[k]));
      if (p >= 1.0 || rng.bernoulli(p)) row.push_back(k);
    }
    return row;
  }

  row.push_back(slot);
  if (pmax <= 0.0) return row;
  const double log1mp = std::log1p(-pmax);
  int k = -1;
  while (true) {
    double u = rng.uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    double skip = std::floor(std::log(u) / log1mp);
    if (skip >= static_cast<double>(N - k)) break;  // past the row end
    k += 1 + static_cast<int>(skip);
    if (k >= N) break;
    if (k == slot) continue;
    double p = std::min(1.0, rho * kernel(theta[slot], theta[k]));
    if (rng.uniform() * pmax < p) row.push_back(k);
  }
  std::sort(row.begin(), row.end());
  return row;
}

}  // namespace

GraphSample sample_graph(const ConnectionKernel& kernel, int n, double rho,
                         uint64_t seed, bool allow_clip, int threads) {
  if (rho <= 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in (0, 1]");
  GraphSample g;
  g.n = n;
  g.rho = rho;
  g.seed = seed;
  g.kernel_id = kernel.id();
  g.positions = positions(n);
  const int N = g.size();
  g.adjacency.resize(N);

  auto work = [&](int lo, int hi) {
    for (int slot = lo; slot < hi; ++slot)
      g.adjacency[slot] =
          draw_row(kernel, g.positions, rho, slot,
                   SubstreamRng(seed, stream::kGraph, slot), allow_clip);
  };
  if (threads <= 1 || N < 256) {
    work(0, N);
  } else {
    std::vector<std::thread> pool;
    int chunk = (N + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      int lo = t * chunk, hi = std::min(N, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return g;
}

std::vector<int> sample_in_row(const ConnectionKernel& kernel, int n,
                               double rho, uint64_t seed, int slot,
                               uint64_t trial, bool allow_clip) {
  auto theta = positions(n);
  SubstreamRng rng(seed, stream::kMonteCarlo,
                   SubstreamRng::mix(trial) ^ static_cast<uint64_t>(slot));
  return draw_row(kernel, theta, rho, slot, rng, allow_clip);
}

int DegreeProfile::total() const {
  int t = 0;
  for (int c : histogram) t += c;
  return t;
}

DegreeProfile degree_profile(const GraphSample& g) {
  DegreeProfile p;
  const int N = g.size();
  p.min = N + 1;
  long long sum = 0;
  int maxdeg = 0;
  for (int s = 0; s < N; ++s) maxdeg = std::max(maxdeg, g.degree(s));
  p.histogram.assign(maxdeg + 1, 0);
  for (int s = 0; s < N; ++s) {
    int d = g.degree(s);
    p.min = std::min(p.min, d);
    p.max = std::max(p.max, d);
    sum += d;
    ++p.histogram[d];
  }
  p.mean = static_cast<double>(sum) / N;
  return p;
}

std::string serialize_graph(const GraphSample& g) {
  std::ostringstream out;
  char rbuf[64];
  std::snprintf(rbuf, sizeof rbuf, "%a", g.rho);
  out << "ldpnet-graph v1 n=" << g.n << " rho=" << rbuf << " seed=" << g.seed
      << " kernel=" << g.kernel_id << "\n";
  for (int s = 0; s < g.size(); ++s) {
    out << (s - g.n) << ":";
    for (int k : g.adjacency[s]) out << " " << (k - g.n);
    out << "\n";
  }
  return out.str();
}

GraphSample parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string magic, ver;
  GraphSample g;
  in >> magic >> ver;
  if (magic != "ldpnet-graph" || ver != "v1")
    throw std::invalid_argument("bad graph header");
  std::string tok;
  std::string rho_hex;
  while (in >> tok && tok.find('=') != std::string::npos) {
    auto eq = tok.find('=');
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n") g.n = std::stoi(val);
    else if (key == "rho") rho_hex = val;
    else if (key == "seed") g.seed = std::stoull(val);
    else if (key == "kernel") { g.kernel_id = val; break; }
  }
  g.rho = std::strtod(rho_hex.c_str(), nullptr);
  g.positions = positions(g.n);
  const int N = g.size();
  g.adjacency.resize(N);
  // First node line may already be buffered in `tok` if kernel= was last.
  std::string line;
  std::getline(in, line);  // rest of header line
  for (int s = 0; s < N; ++s) {
    if (!std::getline(in, line)) throw std::invalid_argument("truncated graph");
    std::istringstream ls(line);
    int j;
    char colon;
    ls >> j >> colon;
    if (j != s - g.n || colon != ':')
      throw std::invalid_argument("bad node line");
    int k;
    while (ls >> k) g.adjacency[s].push_back(k + g.n);
  }
  check_graph(g);
  return g;
}

void check_graph(const GraphSample& g) {
  const int N = g.size();
  if (static_cast<int>(g.adjacency.size()) != N ||
      static_cast<int>(g.positions.size()) != N)
    throw std::invalid_argument("graph size mismatch");
  for (int s = 1; s < N; ++s)
    if (g.positions[s] <= g.positions[s - 1])
      throw std::invalid_argument("positions not strictly increasing");
  for (int s = 0; s < N; ++s) {
    const auto& row = g.adjacency[s];
    if (!std::binary_search(row.begin(), row.end(), s))
      throw std::invalid_argument("missing self-loop");
    if (!std::is_sorted(row.begin(), row.end()))
      throw std::invalid_argument("adjacency not sorted");
    for (int k : row)
      if (k < 0 || k >= N) throw std::invalid_argument("neighbor out of range");
  }
}

}  // namespace ldpnet
