#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldpnet/circle.hpp"
#include "ldpnet/fields.hpp"
#include "ldpnet/graph.hpp"

namespace ldpnet {

// Schema violation; `path` names the offending field ("graph.seed").
struct ConfigError : std::runtime_error {
  std::string path;
  ConfigError(std::string p, const std::string& what)
      : std::runtime_error(p + ": " + what), path(std::move(p)) {}
};

struct KernelSpec {
  std::string type = "constant";  // constant | cosine | exp_cosine | piecewise
  double c = 1.0;
  double base = 1.0;
  double amp = 0.0;
  double kappa = 1.0;
  std::vector<std::vector<double>> block;

  ConnectionKernel build() const;
};

struct ModelConfig {
  int d = 1;
  std::string field = "zero";
  std::map<std::string, double> params;
  std::string lift = "constant";
  std::map<std::string, double> lift_params;
  double c_ini = 1.0;
  double T = 1.0;
};

struct GraphConfig {
  int n = 1;
  std::vector<int> n_grid;  // optional scan grid
  std::optional<double> rho;
  SparsitySchedule schedule;
  bool use_schedule = false;
  uint64_t seed = 0;
  bool allow_clip = false;

  double rho_at(int nn) const;
};

struct RunConfig {
  int bins = 1024;
  int euler_m = 64;
  double tol = 1e-3;
  long long trials = 100000;
  int threads = 1;
};

struct OutputConfig {
  std::string dir = "out";
};

struct ExperimentConfig {
  KernelSpec kernel;
  ModelConfig model;
  GraphConfig graph;
  RunConfig run;
  OutputConfig outputs;

  VectorFieldPair build_field() const;
  LiftMap build_lift() const;
};

// Parses and validates against the schema; throws ConfigError with the field
// path on the first violation. Every referenced registry name must exist and
// the seed must be present (no implicit entropy).
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct RunManifest {
  std::string config_hash;
  std::string version;
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::vector<std::pair<std::string, std::string>> file_checksums;

  std::string to_json() const;
};

}  // namespace ldpnet
