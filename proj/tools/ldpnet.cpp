// Experiment driver: sampling, simulation, rate evaluation, scaling scans,
// push-forward checks, and the built-in verification suite.
//
// Exit codes: 0 success, 1 verification failure, 2 config schema violation,
// 3 size/runtime cap breach, 4 numerical contract violation.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ldpnet/acceptance.hpp"
#include "ldpnet/config.hpp"
#include "ldpnet/dynamics.hpp"
#include "ldpnet/io.hpp"
#include "ldpnet/ldp.hpp"
#include "ldpnet/measures.hpp"
#include "ldpnet/pushforward.hpp"
#include "ldpnet/rates.hpp"

namespace {

using namespace ldpnet;

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string config_path;
  std::string out_dir;
  long long seed_override = -1;
  int threads = 0;
};

struct Stage {
  RunManifest manifest;
  std::chrono::steady_clock::time_point t0;
  std::string name;

  void begin(const std::string& n) {
    name = n;
    t0 = std::chrono::steady_clock::now();
  }
  void end() {
    manifest.stage_seconds.emplace_back(
        name, std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count());
  }
};

ExperimentConfig load(const Common& c, Stage& stage) {
  std::string text = read_file(c.config_path);
  stage.manifest.config_hash = fnv1a_hex(text);
  stage.manifest.version = kVersion;
  ExperimentConfig cfg = parse_config(text);
  if (c.seed_override >= 0)
    cfg.graph.seed = static_cast<uint64_t>(c.seed_override);
  if (const char* env = std::getenv("LDPNET_OUT"); env && *env)
    cfg.outputs.dir = env;
  if (!c.out_dir.empty()) cfg.outputs.dir = c.out_dir;
  if (c.threads > 0) cfg.run.threads = c.threads;
  return cfg;
}

void emit(Stage& stage, const std::string& dir, const std::string& name,
          const std::string& content) {
  const std::string path = dir + "/" + name;
  atomic_write(path, content);
  stage.manifest.file_checksums.emplace_back(name, fnv1a_hex(content));
}

void finish(Stage& stage, const std::string& dir) {
  atomic_write(dir + "/run_manifest.json", stage.manifest.to_json());
}

int cmd_sample_graph(const Common& c) {
  Stage stage;
  ExperimentConfig cfg = load(c, stage);
  stage.begin("sample-graph");
  auto kernel = cfg.kernel.build();
  auto g = sample_graph(kernel, cfg.graph.n, cfg.graph.rho_at(cfg.graph.n),
                        cfg.graph.seed, cfg.graph.allow_clip, cfg.run.threads);
  auto prof = degree_profile(g);
  std::ostringstream deg;
  deg << "degree,count\n";
  for (size_t k = 0; k < prof.histogram.size(); ++k)
    if (prof.histogram[k] > 0) deg << k << "," << prof.histogram[k] << "\n";
  stage.end();
  emit(stage, cfg.outputs.dir, "graph.txt", serialize_graph(g));
  emit(stage, cfg.outputs.dir, "degrees.csv", deg.str());
  finish(stage, cfg.outputs.dir);
  std::cout << "sampled " << g.size() << " nodes, mean degree " << prof.mean
            << "\n";
  return 0;
}

int cmd_simulate(const Common& c) {
  Stage stage;
  ExperimentConfig cfg = load(c, stage);
  stage.begin("simulate");
  auto kernel = cfg.kernel.build();
  auto g = sample_graph(kernel, cfg.graph.n, cfg.graph.rho_at(cfg.graph.n),
                        cfg.graph.seed, cfg.graph.allow_clip, cfg.run.threads);
  auto fields = cfg.build_field();
  auto init = InitialCondition::from_lift(cfg.build_lift(), g.positions);
  auto traj = simulate(g, init, fields, cfg.model.T, cfg.run.euler_m,
                       Scheme::kEuler);
  if (!check_apriori_bound(traj, init, fields))
    throw std::logic_error("a priori trajectory bound violated");
  stage.end();
  emit(stage, cfg.outputs.dir, "trajectories.csv", trajectory_csv(traj));
  auto nu = build_nested(std::make_shared<GraphSample>(std::move(g)), init);
  emit(stage, cfg.outputs.dir, "initial_measure.json", nested_to_json(nu));
  finish(stage, cfg.outputs.dir);
  std::cout << "simulated " << traj.nodes << " nodes, " << traj.steps()
            << " steps\n";
  return 0;
}

int cmd_rates(const Common& c) {
  Stage stage;
  ExperimentConfig cfg = load(c, stage);
  stage.begin("rates");
  auto kernel = cfg.kernel.build();
  std::ostringstream csv;
  csv.precision(17);
  csv << "alpha,kernel,value,mass_term,exponential_term,a_star\n";
  CircleDensity uniform;
  uniform.values.assign(cfg.run.bins, 1.0);
  for (double alpha : grid_midpoints(16)) {
    auto rv = rate_node(kernel, alpha, uniform, cfg.run.bins);
    auto os = optimal_scale(kernel, alpha, uniform);
    csv << alpha << "," << kernel.id() << "," << rv.value << ","
        << rv.mass_term << "," << rv.exponential_term << "," << os.a_star
        << "\n";
  }
  stage.end();
  emit(stage, cfg.outputs.dir, "rates.csv", csv.str());
  finish(stage, cfg.outputs.dir);
  std::cout << "rates written\n";
  return 0;
}

int cmd_ldp_scan(const Common& c) {
  Stage stage;
  ExperimentConfig cfg = load(c, stage);
  stage.begin("ldp-scan");
  auto kernel = cfg.kernel.build();
  EventSpec spec;
  spec.kind = EventSpec::Kind::kDegreeTail;
  spec.self_loop_only = true;
  std::vector<int> grid = cfg.graph.n_grid;
  if (grid.empty()) grid = {cfg.graph.n};
  SparsitySchedule sched =
      cfg.graph.use_schedule
          ? cfg.graph.schedule
          : SparsitySchedule{cfg.graph.rho_at(cfg.graph.n), 0.0};
  auto scan = ldp_scan(spec, kernel, sched, grid, cfg.run.bins,
                       cfg.graph.seed);
  stage.end();
  emit(stage, cfg.outputs.dir, "ldp_scan.csv", scan.csv());
  emit(stage, cfg.outputs.dir, "ldp_event.json", spec.to_json());
  finish(stage, cfg.outputs.dir);
  std::cout << "scan rows: " << scan.rows.size() << "\n";
  return 0;
}

int cmd_pushforward_check(const Common& c) {
  Stage stage;
  ExperimentConfig cfg = load(c, stage);
  stage.begin("pushforward-check");
  auto kernel = cfg.kernel.build();
  auto g = sample_graph(kernel, cfg.graph.n, cfg.graph.rho_at(cfg.graph.n),
                        cfg.graph.seed, cfg.graph.allow_clip);
  auto fields = cfg.build_field();
  auto init = InitialCondition::from_lift(cfg.build_lift(), g.positions);
  auto gp = std::make_shared<GraphSample>(g);
  auto nu = build_nested(gp, init);

  PushforwardConfig pcfg;
  pcfg.T = cfg.model.T;
  pcfg.m = std::min(cfg.run.euler_m, 3);
  auto fact = factorization_check(g, init, fields, pcfg);
  auto ladder = euler_ladder(nu, fields, cfg.model.T, 8, 5);
  stage.end();
  emit(stage, cfg.outputs.dir, "factorization.json", fact.to_json());
  emit(stage, cfg.outputs.dir, "euler_ladder.json", ladder.to_json());
  finish(stage, cfg.outputs.dir);
  if (fact.gap > 1e-9)
    throw std::logic_error("factorization gap above contract");
  std::cout << "factorization gap " << fact.gap << ", ladder slope "
            << ladder.slope << "\n";
  return 0;
}

int cmd_verify(const Common& c, bool list_only, const std::vector<int>& only) {
  if (list_only) {
    for (auto& [id, name] : acceptance_list())
      std::cout << id << " " << name << "\n";
    return 0;
  }
  AcceptanceOptions opt;
  if (!c.config_path.empty()) {
    Stage stage;
    ExperimentConfig cfg = load(c, stage);
    opt.bins = cfg.run.bins;
    opt.mc_trials = cfg.run.trials;
    opt.seed = cfg.graph.seed;
    opt.threads = cfg.run.threads;
  }
  if (c.threads > 0) opt.threads = c.threads;
  if (c.seed_override >= 0) opt.seed = static_cast<uint64_t>(c.seed_override);

  bool all_pass = true;
  for (const auto& r : run_acceptance(opt, only)) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion-" << r.id << " "
              << r.name << ": " << r.detail << " [";
    std::cout.precision(2);
    std::cout << std::fixed << r.seconds << "s]\n";
    std::cout.unsetf(std::ios::fixed);
    std::cout.precision(6);
  }
  return all_pass ? 0 : 1;
}

int classify_and_report(const std::exception& e) {
  const std::string what = e.what();
  std::cerr << "error: " << what << "\n";
  if (what.find("cap") != std::string::npos ||
      what.find("overflow") != std::string::npos)
    return 3;
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"particle-system and rare-event toolkit"};
  app.require_subcommand(1);

  Common c;
  app.add_option("--config", c.config_path, "JSON config path")
      ->envname("LDPNET_CONFIG");
  app.add_option("--seed", c.seed_override, "override graph.seed");
  app.add_option("--out", c.out_dir, "override output directory");
  app.add_option("--threads", c.threads, "worker thread count");

  auto* sg = app.add_subcommand("sample-graph", "sample and persist a graph");
  auto* sim = app.add_subcommand("simulate", "integrate the coupled system");
  auto* rt = app.add_subcommand("rates", "evaluate rate functions on a grid");
  auto* scan = app.add_subcommand("ldp-scan", "normalized log-prob scan");
  auto* pf = app.add_subcommand("pushforward-check",
                                "factorization and step-size ladder");
  auto* vf = app.add_subcommand("verify", "run the acceptance suite");
  bool list_only = false;
  std::vector<int> only;
  vf->add_flag("--list", list_only, "list criterion ids and exit");
  vf->add_option("--criterion", only, "run only these criterion ids");

  CLI11_PARSE(app, argc, argv);

  auto need_config = [&]() -> bool {
    if (c.config_path.empty()) {
      std::cerr << "error: --config is required\n";
      return false;
    }
    return true;
  };

  try {
    if (sg->parsed()) return need_config() ? cmd_sample_graph(c) : 2;
    if (sim->parsed()) return need_config() ? cmd_simulate(c) : 2;
    if (rt->parsed()) return need_config() ? cmd_rates(c) : 2;
    if (scan->parsed()) return need_config() ? cmd_ldp_scan(c) : 2;
    if (pf->parsed()) return need_config() ? cmd_pushforward_check(c) : 2;
    if (vf->parsed()) return cmd_verify(c, list_only, only);
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << e.path << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    return classify_and_report(e);
  }
  return 0;
}
