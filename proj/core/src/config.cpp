#include "ldpnet/config.hpp"

#include <sstream>

#include "json.hpp"
#include "ldpnet/io.hpp"

namespace ldpnet {

namespace {

using nlohmann::json;

std::string join(const std::string& a, const std::string& b) {
  return a.empty() ? b : a + "." + b;
}

const json& need(const json& j, const std::string& path,
                 const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(path, key), "missing field");
  return *it;
}

double need_number(const json& j, const std::string& path,
                   const std::string& key) {
  const json& v = need(j, path, key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected number");
  return v.get<double>();
}

double opt_number(const json& j, const std::string& path,
                  const std::string& key, double dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_number()) throw ConfigError(join(path, key), "expected number");
  return it->get<double>();
}

std::string opt_string(const json& j, const std::string& path,
                       const std::string& key, const std::string& dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_string()) throw ConfigError(join(path, key), "expected string");
  return it->get<std::string>();
}

std::map<std::string, double> opt_params(const json& j, const std::string& path,
                                         const std::string& key) {
  std::map<std::string, double> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_object()) throw ConfigError(join(path, key), "expected object");
  for (auto& [k, v] : it->items()) {
    if (!v.is_number())
      throw ConfigError(join(join(path, key), k), "expected number");
    out[k] = v.get<double>();
  }
  return out;
}

}  // namespace

ConnectionKernel KernelSpec::build() const {
  if (type == "constant") return ConnectionKernel::constant(c);
  if (type == "cosine") return ConnectionKernel::cosine(base, amp);
  if (type == "exp_cosine") return ConnectionKernel::exp_cosine(kappa);
  if (type == "piecewise") return ConnectionKernel::piecewise(block);
  throw ConfigError("kernel.type", "unknown kernel: " + type);
}

double GraphConfig::rho_at(int nn) const {
  if (use_schedule) return schedule.rho(nn);
  if (rho) return *rho;
  throw ConfigError("graph.rho", "missing field");
}

VectorFieldPair ExperimentConfig::build_field() const {
  try {
    return make_field(model.field, model.params, model.d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model.field", e.what());
  }
}

LiftMap ExperimentConfig::build_lift() const {
  try {
    return make_lift(model.lift, model.lift_params, model.d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model.lift", e.what());
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "expected object");

  ExperimentConfig cfg;

  const json& kj = need(j, "", "kernel");
  if (!kj.is_object()) throw ConfigError("kernel", "expected object");
  cfg.kernel.type = opt_string(kj, "kernel", "type", "constant");
  cfg.kernel.c = opt_number(kj, "kernel", "c", 1.0);
  cfg.kernel.base = opt_number(kj, "kernel", "base", 1.0);
  cfg.kernel.amp = opt_number(kj, "kernel", "amp", 0.0);
  cfg.kernel.kappa = opt_number(kj, "kernel", "kappa", 1.0);
  if (auto it = kj.find("block"); it != kj.end()) {
    if (!it->is_array()) throw ConfigError("kernel.block", "expected array");
    for (const auto& row : *it) {
      if (!row.is_array())
        throw ConfigError("kernel.block", "expected array of arrays");
      std::vector<double> r;
      for (const auto& v : row) {
        if (!v.is_number())
          throw ConfigError("kernel.block", "expected number");
        r.push_back(v.get<double>());
      }
      cfg.kernel.block.push_back(std::move(r));
    }
  }
  cfg.kernel.build();  // registry check, throws on bad parameters

  if (auto it = j.find("model"); it != j.end()) {
    const json& mj = *it;
    if (!mj.is_object()) throw ConfigError("model", "expected object");
    cfg.model.d = static_cast<int>(opt_number(mj, "model", "d", 1));
    if (cfg.model.d < 1) throw ConfigError("model.d", "must be >= 1");
    cfg.model.field = opt_string(mj, "model", "field", "zero");
    cfg.model.params = opt_params(mj, "model", "params");
    cfg.model.lift = opt_string(mj, "model", "lift", "constant");
    cfg.model.lift_params = opt_params(mj, "model", "lift_params");
    cfg.model.c_ini = opt_number(mj, "model", "c_ini", 1.0);
    cfg.model.T = opt_number(mj, "model", "T", 1.0);
    if (cfg.model.T <= 0.0) throw ConfigError("model.T", "must be positive");
    cfg.build_field();
    cfg.build_lift();
  }

  const json& gj = need(j, "", "graph");
  if (!gj.is_object()) throw ConfigError("graph", "expected object");
  cfg.graph.n = static_cast<int>(need_number(gj, "graph", "n"));
  if (cfg.graph.n < 0) throw ConfigError("graph.n", "must be >= 0");
  const json& sj = need(gj, "graph", "seed");
  if (!sj.is_number_integer() && !sj.is_number_unsigned())
    throw ConfigError("graph.seed", "expected integer");
  cfg.graph.seed = sj.get<uint64_t>();
  if (auto it = gj.find("rho"); it != gj.end()) {
    if (!it->is_number()) throw ConfigError("graph.rho", "expected number");
    cfg.graph.rho = it->get<double>();
    if (*cfg.graph.rho <= 0.0 || *cfg.graph.rho > 1.0)
      throw ConfigError("graph.rho", "must be in (0, 1]");
  }
  if (auto it = gj.find("schedule"); it != gj.end()) {
    if (!it->is_object()) throw ConfigError("graph.schedule", "expected object");
    cfg.graph.schedule.c = opt_number(*it, "graph.schedule", "c", 1.0);
    cfg.graph.schedule.beta = opt_number(*it, "graph.schedule", "beta", 0.5);
    if (cfg.graph.schedule.beta <= 0.0 || cfg.graph.schedule.beta >= 1.0)
      throw ConfigError("graph.schedule.beta", "must be in (0, 1)");
    cfg.graph.use_schedule = true;
  }
  if (!cfg.graph.rho && !cfg.graph.use_schedule)
    throw ConfigError("graph.rho", "missing field");
  if (auto it = gj.find("n_grid"); it != gj.end()) {
    if (!it->is_array()) throw ConfigError("graph.n_grid", "expected array");
    for (const auto& v : *it) {
      if (!v.is_number_integer())
        throw ConfigError("graph.n_grid", "expected integer entries");
      cfg.graph.n_grid.push_back(v.get<int>());
    }
    for (size_t i = 1; i < cfg.graph.n_grid.size(); ++i)
      if (cfg.graph.n_grid[i] <= cfg.graph.n_grid[i - 1])
        throw ConfigError("graph.n_grid", "must be strictly increasing");
  }
  if (auto it = gj.find("allow_clip"); it != gj.end()) {
    if (!it->is_boolean())
      throw ConfigError("graph.allow_clip", "expected boolean");
    cfg.graph.allow_clip = it->get<bool>();
  }

  if (auto it = j.find("run"); it != j.end()) {
    const json& rj = *it;
    if (!rj.is_object()) throw ConfigError("run", "expected object");
    cfg.run.bins = static_cast<int>(opt_number(rj, "run", "bins", 1024));
    if (cfg.run.bins < 2) throw ConfigError("run.bins", "must be >= 2");
    cfg.run.euler_m = static_cast<int>(opt_number(rj, "run", "euler_m", 64));
    if (cfg.run.euler_m < 1) throw ConfigError("run.euler_m", "must be >= 1");
    cfg.run.tol = opt_number(rj, "run", "tol", 1e-3);
    if (cfg.run.tol <= 0.0) throw ConfigError("run.tol", "must be positive");
    cfg.run.trials =
        static_cast<long long>(opt_number(rj, "run", "trials", 100000));
    if (cfg.run.trials < 1) throw ConfigError("run.trials", "must be >= 1");
    cfg.run.threads = static_cast<int>(opt_number(rj, "run", "threads", 1));
    if (cfg.run.threads < 1) throw ConfigError("run.threads", "must be >= 1");
  }

  if (auto it = j.find("outputs"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("outputs", "expected object");
    cfg.outputs.dir = opt_string(*it, "outputs", "dir", "out");
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

std::string RunManifest::to_json() const {
  json j;
  j["schema"] = "ldpnet-manifest-v1";
  j["config_hash"] = config_hash;
  j["version"] = version;
  auto& st = j["stages"] = json::object();
  for (const auto& [name, secs] : stage_seconds) st[name] = secs;
  auto& fs = j["files"] = json::object();
  for (const auto& [name, sum] : file_checksums) fs[name] = sum;
  return j.dump(2);
}

}  // namespace ldpnet
