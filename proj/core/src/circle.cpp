#include "ldpnet/circle.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ldpnet {

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r > kPi) r -= kTwoPi;
  if (r <= -kPi) r += kTwoPi;
  return r;
}

std::vector<double> grid_midpoints(int bins) {
  if (bins < 1) throw std::invalid_argument("degenerate grid");
  std::vector<double> mids(bins);
  const double w = kTwoPi / bins;
  for (int i = 0; i < bins; ++i) mids[i] = -kPi + (i + 0.5) * w;
  return mids;
}

double circle_mean(std::span<const double> f) {
  if (f.empty()) throw std::invalid_argument("degenerate grid");
  // Kahan summation: densities are often sums of ~2^14 near-equal terms.
  double sum = 0.0, c = 0.0;
  for (double v : f) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(f.size());
}

GridFunction sample_on_grid(const std::function<double(double)>& f, int bins) {
  GridFunction g;
  g.values.reserve(bins);
  for (double t : grid_midpoints(bins)) g.values.push_back(f(t));
  return g;
}

double kernel_mass(const ConnectionKernel& kernel, double alpha, int bins) {
  return circle_mean(kernel.row(alpha, bins));
}

DensityDiagnostics validate_density(std::span<const double> values,
                                    bool probability) {
  DensityDiagnostics d;
  d.probability = probability;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      d.finite = false;
      continue;
    }
    if (values[i] < 0.0) d.negative_bins.push_back(static_cast<int>(i));
    if (values[i] == 0.0) d.zero_bins.push_back(static_cast<int>(i));
  }
  if (d.finite && probability && !values.empty())
    d.normalization_error = std::abs(circle_mean(values) - 1.0);
  return d;
}

double xlog_ratio(double x, double c) {
  if (x == 0.0) return 0.0;
  return x * std::log(x / c);
}

ConnectionKernel::ConnectionKernel(std::string id, Fn eval, double lower_bound,
                                   double upper_bound,
                                   std::vector<double> arc_edges)
    : id_(std::move(id)),
      eval_(std::move(eval)),
      lower_(lower_bound),
      upper_(upper_bound),
      arc_edges_(std::move(arc_edges)) {
  if (lower_ <= 0.0 || upper_ < lower_)
    throw std::invalid_argument("kernel bounds must satisfy 0 < lb <= ub");
}

int ConnectionKernel::arc_index(double alpha) const {
  if (arc_edges_.empty()) return -1;
  double a = wrap_angle(alpha);
  for (size_t i = 0; i < arc_edges_.size(); ++i)
    if (a <= arc_edges_[i]) return static_cast<int>(i);
  return 0;  // wrap: a > last edge means first arc starts past pi
}

std::vector<double> ConnectionKernel::row(double alpha, int bins) const {
  std::vector<double> r;
  r.reserve(bins);
  for (double t : grid_midpoints(bins)) r.push_back(eval_(alpha, t));
  return r;
}

ConnectionKernel ConnectionKernel::constant(double c) {
  return ConnectionKernel(
      "constant", [c](double, double) { return c; }, c, c, {kPi});
}

ConnectionKernel ConnectionKernel::cosine(double base, double amp) {
  if (base <= std::abs(amp))
    throw std::invalid_argument("cosine kernel needs base > |amp|");
  return ConnectionKernel(
      "cosine",
      [base, amp](double a, double t) { return base + amp * std::cos(t - a); },
      base - std::abs(amp), base + std::abs(amp));
}

ConnectionKernel ConnectionKernel::exp_cosine(double kappa) {
  return ConnectionKernel(
      "exp_cosine",
      [kappa](double a, double t) { return std::exp(kappa * std::cos(t - a)); },
      std::exp(-std::abs(kappa)), std::exp(std::abs(kappa)));
}

ConnectionKernel ConnectionKernel::piecewise(
    std::vector<std::vector<double>> block) {
  const int q = static_cast<int>(block.size());
  if (q < 1) throw std::invalid_argument("piecewise kernel needs >= 1 arc");
  double lo = block[0][0], hi = block[0][0];
  for (const auto& r : block) {
    if (static_cast<int>(r.size()) != q)
      throw std::invalid_argument("piecewise kernel block must be square");
    for (double v : r) {
      if (v <= 0.0)
        throw std::invalid_argument("piecewise kernel values must be positive");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  std::vector<double> edges(q);
  for (int i = 0; i < q; ++i) edges[i] = -kPi + kTwoPi * (i + 1) / q;
  auto arc_of = [q](double a) {
    double x = (wrap_angle(a) + kPi) / kTwoPi;  // in (0, 1]
    int i = static_cast<int>(x * q);
    if (i >= q) i = q - 1;
    return i;
  };
  return ConnectionKernel(
      "piecewise",
      [block = std::move(block), arc_of](double a, double t) {
        return block[arc_of(a)][arc_of(t)];
      },
      lo, hi, std::move(edges));
}

ConnectionKernel ConnectionKernel::table(std::vector<double> values, int bins) {
  if (static_cast<int>(values.size()) != bins * bins)
    throw std::invalid_argument("table kernel needs bins*bins values");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (v <= 0.0)
      throw std::invalid_argument("table kernel values must be positive");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  auto bin_of = [bins](double a) {
    double x = (wrap_angle(a) + kPi) / kTwoPi;
    int i = static_cast<int>(x * bins);
    if (i >= bins) i = bins - 1;
    return i;
  };
  return ConnectionKernel(
      "table",
      [values = std::move(values), bins, bin_of](double a, double t) {
        return values[static_cast<size_t>(bin_of(a)) * bins + bin_of(t)];
      },
      lo, hi);
}

}  // namespace ldpnet
