#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ldpnet {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Canonical representative in (-pi, pi].
double wrap_angle(double a);

// Midpoints of M uniform bins of (-pi, pi], ordered.
std::vector<double> grid_midpoints(int bins);

// Value grid on M uniform bins; entries unconstrained (a bounded test
// function sampled at bin midpoints).
struct GridFunction {
  std::vector<double> values;

  int bins() const { return static_cast<int>(values.size()); }
};

// Probability density zeta against d(theta)/(2pi): circle_mean(zeta) == 1.
struct CircleDensity {
  std::vector<double> values;

  int bins() const { return static_cast<int>(values.size()); }
};

// Nonnegative density of a positive measure; total mass unconstrained.
struct MassDensity {
  std::vector<double> values;

  int bins() const { return static_cast<int>(values.size()); }
};

struct DensityDiagnostics {
  bool finite = true;
  std::vector<int> negative_bins;
  std::vector<int> zero_bins;
  double normalization_error = 0.0;  // |circle_mean - 1|, probability case only
  bool probability = false;

  bool valid(double norm_tol = 1e-12) const {
    return finite && negative_bins.empty() &&
           (!probability || normalization_error <= norm_tol);
  }
};

// Connection kernel C(alpha, theta) on the torus, bounded away from 0 and
// infinity. When arc_edges is nonempty it lists the right endpoints of a
// partition of (-pi, pi] into arcs within which C is constant in alpha.
class ConnectionKernel {
 public:
  using Fn = std::function<double(double alpha, double theta)>;

  ConnectionKernel(std::string id, Fn eval, double lower_bound,
                   double upper_bound, std::vector<double> arc_edges = {});

  double operator()(double alpha, double theta) const {
    return eval_(alpha, theta);
  }
  const std::string& id() const { return id_; }
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  bool has_arcs() const { return !arc_edges_.empty(); }
  const std::vector<double>& arc_edges() const { return arc_edges_; }
  int arc_index(double alpha) const;

  // Row C(alpha, theta_i) sampled at grid midpoints.
  std::vector<double> row(double alpha, int bins) const;

  static ConnectionKernel constant(double c);
  // base + amp * cos(theta - alpha); requires base > |amp|.
  static ConnectionKernel cosine(double base, double amp);
  // exp(kappa * cos(theta - alpha))
  static ConnectionKernel exp_cosine(double kappa);
  // Q x Q block values over equal arcs: C(alpha, theta) = v[arc(alpha)][arc(theta)].
  static ConnectionKernel piecewise(std::vector<std::vector<double>> block);
  // bins x bins table over grid midpoints, nearest-bin lookup.
  static ConnectionKernel table(std::vector<double> values, int bins);

 private:
  std::string id_;
  Fn eval_;
  double lower_, upper_;
  std::vector<double> arc_edges_;
};

// (1/2pi) integral over the circle realized as the midpoint-rule mean.
double circle_mean(std::span<const double> f);
inline double circle_mean(const GridFunction& f) { return circle_mean(std::span<const double>(f.values)); }

// Sample f(theta) at the M bin midpoints.
GridFunction sample_on_grid(const std::function<double(double)>& f, int bins);

// c-bar(alpha) = circle_mean of C(alpha, .)
double kernel_mass(const ConnectionKernel& kernel, double alpha, int bins);

DensityDiagnostics validate_density(std::span<const double> values,
                                    bool probability);
inline DensityDiagnostics validate_density(const CircleDensity& d) {
  return validate_density(std::span<const double>(d.values), true);
}
inline DensityDiagnostics validate_density(const MassDensity& d) {
  return validate_density(std::span<const double>(d.values), false);
}

// x * log(x / c) with the 0 log 0 = 0 convention.
double xlog_ratio(double x, double c);

}  // namespace ldpnet
