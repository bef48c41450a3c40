#include "eqloc/cli.hpp"

#include "eqloc/error.hpp"
#include "eqloc/format.hpp"
#include "eqloc/ingest.hpp"
#include "eqloc/plan.hpp"
#include "eqloc/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace eqloc::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct InputOptions {
  std::string instance_dir;
  std::string blocks;
  std::string sites;
  std::string distances;
};

struct RunConfig {
  double epsilon = kDefaultEpsilon;
  double walk_speed = kDefaultWalkSpeedMPerMin;
  std::vector<std::string> objectives{"kolm-pollak"};
  std::string solver = "auto";
  std::uint64_t enumeration_limit = ExactConfig{}.enumeration_limit;
  std::uint64_t node_limit = ExactConfig{}.node_limit;
  double time_limit_s = ExactConfig{}.time_limit_s;
  unsigned restarts = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  // Execution only: results must not depend on it, so it is not echoed.
  unsigned workers = 1;

  SolverPolicy policy() const {
    SolverPolicy p;
    p.kind = parse_solver(solver);
    p.exact.enumeration_limit = enumeration_limit;
    p.exact.node_limit = node_limit;
    p.exact.time_limit_s = time_limit_s;
    p.heuristic.restarts = restarts;
    p.heuristic.seed = seed;
    p.set_workers(workers);
    return p;
  }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void add_run_options(CLI::App& cmd, RunConfig& cfg, bool solver_options) {
  cmd.add_option("--epsilon", cfg.epsilon, "Inequality aversion (negative)")->capture_default_str();
  cmd.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd.add_option("--out-dir", cfg.out_dir, "Directory for output files");
  if (!solver_options) return;
  cmd.add_option("--walk-speed", cfg.walk_speed, "Walking speed in meters per minute")->capture_default_str();
  cmd.add_option("--solver", cfg.solver, "auto | exact | heuristic")
      ->check(CLI::IsMember({"auto", "exact", "heuristic"}))
      ->capture_default_str();
  cmd.add_option("--enumeration-limit", cfg.enumeration_limit, "Largest C(n,k) solved by enumeration")
      ->capture_default_str();
  cmd.add_option("--node-limit", cfg.node_limit, "Branch-and-bound node limit")->capture_default_str();
  cmd.add_option("--time-limit", cfg.time_limit_s, "Branch-and-bound time limit (s)")->capture_default_str();
  cmd.add_option("--restarts", cfg.restarts, "Seeded random restarts for the heuristic")->capture_default_str();
  cmd.add_option("--workers", cfg.workers, "Solver worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
}

void add_input_options(CLI::App& cmd, InputOptions& in) {
  cmd.add_option("--instance", in.instance_dir, "Instance directory (blocks.csv, sites.csv, distances.csv)");
  cmd.add_option("--blocks", in.blocks, "Blocks CSV");
  cmd.add_option("--sites", in.sites, "Sites CSV or GeoJSON");
  cmd.add_option("--distances", in.distances, "Distance matrix CSV");
}

Instance load(const InputOptions& in) {
  if (!in.instance_dir.empty()) {
    if (!in.blocks.empty() || !in.sites.empty() || !in.distances.empty()) {
      throw UsageError("--instance cannot be combined with --blocks/--sites/--distances");
    }
    return load_instance_dir(in.instance_dir);
  }
  if (in.blocks.empty() || in.sites.empty()) throw UsageError("give --instance DIR or both --blocks and --sites");
  const auto dist = in.distances.empty() ? std::nullopt : std::optional<std::string>(in.distances);
  return load_instance(in.blocks, in.sites, dist);
}

ordered_json input_json(const InputOptions& in) {
  ordered_json j;
  if (!in.instance_dir.empty()) {
    j["instance"] = in.instance_dir;
  } else {
    j["blocks"] = in.blocks;
    j["sites"] = in.sites;
    j["distances"] = in.distances.empty() ? ordered_json(nullptr) : ordered_json(in.distances);
  }
  return j;
}

ordered_json config_json(const std::string& command, const RunConfig& cfg, bool solver_options) {
  ordered_json j;
  j["command"] = command;
  j["epsilon"] = cfg.epsilon;
  if (solver_options) {
    j["walk_speed_m_per_min"] = cfg.walk_speed;
    j["objectives"] = cfg.objectives;
    j["solver"] = cfg.solver;
    j["enumeration_limit"] = cfg.enumeration_limit;
    j["node_limit"] = cfg.node_limit;
    j["time_limit_s"] = cfg.time_limit_s;
    j["restarts"] = cfg.restarts;
  }
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  return j;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

// Banner line plus run_config.json in the output directory.
void echo_config(std::ostream& out, const ordered_json& config) {
  out << "config: " << config.dump() << '\n';
  const auto dir = config.value("out_dir", std::string());
  if (!dir.empty()) {
    fs::create_directories(dir);
    write_file(dir, "run_config.json", config.dump(2) + "\n");
  }
}

std::string site_list(const Instance& instance, const std::vector<SiteIndex>& sites) {
  std::string s;
  for (SiteIndex i : sites) {
    if (!s.empty()) s += ' ';
    s += instance.sites()[i].id;
  }
  return s.empty() ? "-" : s;
}

void print_profile(std::ostream& out, const std::string& prefix, const AccessProfile& p) {
  out << prefix << "ede_m: " << fmt::fixed3(p.ede) << '\n'
      << prefix << "weighted_mean_m: " << fmt::fixed3(p.weighted_mean) << '\n'
      << prefix << "q1_m: " << fmt::fixed3(p.quartiles.q1) << '\n'
      << prefix << "median_m: " << fmt::fixed3(p.quartiles.median) << '\n'
      << prefix << "q3_m: " << fmt::fixed3(p.quartiles.q3) << '\n'
      << prefix << "max_m: " << fmt::fixed3(p.max) << '\n';
}

void print_instance(std::ostream& out, const Instance& instance) {
  out << "instance: " << instance.name() << '\n'
      << "blocks: " << instance.num_blocks() << '\n'
      << "existing_sites: " << instance.existing_sites().size() << '\n'
      << "candidate_sites: " << instance.candidate_sites().size() << '\n'
      << "distance_source: " << to_string(instance.distance_source()) << '\n'
      << "population: " << fmt::fixed3(instance.total_population()) << '\n';
  if (instance.distance_source() == DistanceSource::haversine) {
    out << "note: distances are great-circle approximations, not network distances\n";
  }
}

void print_context(std::ostream& out, const KappaContext& ctx) {
  out << "epsilon: " << fmt::fixed3(ctx.epsilon) << '\n'
      << "alpha_per_km: " << fmt::fixed3(ctx.alpha * 1000.0) << '\n'
      << "kappa_per_km: " << fmt::fixed3(ctx.kappa * 1000.0) << '\n';
}

// Baseline-only summary for perfect-access instances, where alpha is undefined.
void print_perfect_access(std::ostream& out, const Instance& instance) {
  const auto base = baseline_distances(instance);
  out << "note: every resident already has zero distance; EDE is 0 and no optimization is needed\n";
  out << "ede_m: 0.000\n"
      << "weighted_mean_m: " << fmt::fixed3(weighted_mean(base, instance.populations())) << '\n';
}

int cmd_ede(const InputOptions& in, const RunConfig& cfg, std::ostream& out) {
  auto config = config_json("ede", cfg, false);
  config["input"] = input_json(in);
  const Instance instance = load(in);
  std::ostringstream text;
  echo_config(text, config);
  print_instance(text, instance);
  try {
    const auto ctx = calibrate(instance, cfg.epsilon);
    print_context(text, ctx);
    print_profile(text, "", make_profile(baseline_distances(instance), instance.populations(), ctx));
  } catch (const DegenerateDistances&) {
    print_perfect_access(text, instance);
  }
  out << text.str();
  if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "ede.txt", text.str());
  return kSuccess;
}

int cmd_locate(const InputOptions& in, const RunConfig& cfg, std::size_t k, std::ostream& out) {
  auto config = config_json("locate", cfg, true);
  config["input"] = input_json(in);
  config["k"] = k;
  std::vector<Objective> objectives;
  for (const auto& o : cfg.objectives) {
    const Objective parsed = parse_objective(o);
    if (std::find(objectives.begin(), objectives.end(), parsed) == objectives.end()) objectives.push_back(parsed);
  }
  const auto policy = cfg.policy();
  const Instance instance = load(in);

  std::ostringstream text;
  echo_config(text, config);
  print_instance(text, instance);
  if (k > instance.candidate_sites().size()) {
    throw BudgetExceedsCandidates("budget k = " + std::to_string(k) + " exceeds the " +
                                  std::to_string(instance.candidate_sites().size()) + " candidate sites");
  }
  std::optional<KappaContext> ctx;
  try {
    ctx = calibrate(instance, cfg.epsilon);
  } catch (const DegenerateDistances&) {
    print_perfect_access(text, instance);
    out << text.str();
    if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "locate.txt", text.str());
    return kSuccess;
  }
  print_context(text, *ctx);

  std::vector<SitingPlan> plans;
  for (Objective o : objectives) plans.push_back(solve_q1(instance, *ctx, k, o, policy));
  const auto report = compare(plans.front().before, plans);
  print_profile(text, "before_", plans.front().before);
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& plan = plans[i];
    const auto& label = report.methods[i].label;
    text << "plan " << label << ": k=" << plan.k << " solver=" << to_string(plan.solver_used)
         << " proof=" << to_string(plan.proof) << '\n'
         << "  new_sites: " << site_list(instance, plan.chosen_sites) << '\n'
         << "  ede_m: " << fmt::fixed3(plan.before.ede) << " -> " << fmt::fixed3(plan.after.ede) << '\n'
         << "  weighted_mean_m: " << fmt::fixed3(plan.before.weighted_mean) << " -> "
         << fmt::fixed3(plan.after.weighted_mean) << '\n'
         << "  blocks improved/unchanged/worsened: " << report.methods[i].improved << '/'
         << report.methods[i].unchanged << '/' << report.methods[i].worsened << '\n'
         << "  worst_quartile_reduction_person_m: " << fmt::fixed3(report.methods[i].worst_quartile_reduction)
         << '\n';
  }

  if (!cfg.out_dir.empty()) {
    for (std::size_t i = 0; i < plans.size(); ++i) {
      const auto& label = report.methods[i].label;
      write_file(cfg.out_dir, "plan_" + label + "_sites.csv", export_sites_csv(instance, plans[i]));
      write_file(cfg.out_dir, "plan_" + label + "_blocks.csv", export_plan(instance, plans[i], ExportFormat::csv));
      if (instance.has_coordinates()) {
        write_file(cfg.out_dir, "plan_" + label + ".geojson", export_plan(instance, plans[i], ExportFormat::geojson));
      }
    }
    write_file(cfg.out_dir, "comparison_summary.csv", comparison_summary_csv(report));
    write_file(cfg.out_dir, "comparison_blocks.csv", comparison_blocks_csv(instance, report));
    if (!instance.has_coordinates()) text << "note: no coordinates; GeoJSON export skipped\n";
    write_file(cfg.out_dir, "locate.txt", text.str());
  }
  out << text.str();
  return kSuccess;
}

int cmd_target(const InputOptions& in, const RunConfig& cfg, std::optional<double> target_m,
               std::optional<double> target_min, std::ostream& out) {
  if (target_m.has_value() == target_min.has_value()) throw UsageError("give exactly one of --target-m and --target-min");
  if (!(cfg.walk_speed > 0.0)) throw UsageError("--walk-speed must be positive");
  const double target = target_m ? *target_m : *target_min * cfg.walk_speed;
  if (!(target > 0.0)) throw UsageError("target must be positive");

  auto config = config_json("target", cfg, true);
  config["input"] = input_json(in);
  config["target_m"] = target;
  if (target_min) config["target_min"] = *target_min;
  const auto policy = cfg.policy();
  const Instance instance = load(in);

  std::ostringstream text;
  echo_config(text, config);
  print_instance(text, instance);
  text << "target_m: " << fmt::fixed3(target) << '\n';
  std::optional<KappaContext> ctx;
  try {
    ctx = calibrate(instance, cfg.epsilon);
  } catch (const DegenerateDistances&) {
    print_perfect_access(text, instance);
    text << "result: 0 additional stores (minimal)\n";
    out << text.str();
    if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "target.txt", text.str());
    return kSuccess;
  }
  print_context(text, *ctx);
  const auto plan = solve_q2(instance, *ctx, target, policy);
  text << "baseline_ede_m: " << fmt::fixed3(plan.plan.before.ede) << '\n';
  for (const auto& p : plan.probes) {
    text << "probe k=" << p.k << " ede_m=" << fmt::fixed3(p.ede) << " feasible=" << (p.feasible ? "yes" : "no")
         << " proof=" << to_string(p.proof) << '\n';
  }
  if (plan.minimal_k) {
    text << "result: " << *plan.minimal_k << " additional stores (" << to_string(plan.certificate) << ")\n"
         << "new_sites: " << site_list(instance, plan.chosen_sites) << '\n'
         << "achieved_ede_m: " << fmt::fixed3(plan.achieved_ede) << '\n';
  } else {
    text << "result: INFEASIBLE (all " << instance.candidate_sites().size()
         << " candidates open reach ede_m=" << fmt::fixed3(plan.achieved_ede) << ")\n";
  }

  if (!cfg.out_dir.empty()) {
    std::ostringstream summary;
    summary << "target_m,minimal_k,certificate,baseline_ede_m,achieved_ede_m\n"
            << fmt::fixed3(target) << ',' << (plan.minimal_k ? std::to_string(*plan.minimal_k) : std::string())
            << ',' << to_string(plan.certificate) << ',' << fmt::fixed3(plan.plan.before.ede) << ','
            << fmt::fixed3(plan.achieved_ede) << '\n';
    write_file(cfg.out_dir, "target_plan.csv", summary.str());
    write_file(cfg.out_dir, "target_sites.csv", export_sites_csv(instance, plan.plan));
    write_file(cfg.out_dir, "target_blocks.csv", export_plan(instance, plan, ExportFormat::csv));
    if (instance.has_coordinates()) {
      write_file(cfg.out_dir, "target.geojson", export_plan(instance, plan, ExportFormat::geojson));
    }
    write_file(cfg.out_dir, "target.txt", text.str());
  }
  out << text.str();
  return plan.minimal_k ? kSuccess : kInfeasibleTarget;
}

int cmd_synth(SynthSpec spec, const std::string& population, const std::string& placement, const RunConfig& cfg,
              std::ostream& out) {
  if (cfg.out_dir.empty()) throw UsageError("synth needs --out-dir");
  spec.population = population == "uniform" ? PopulationModel::uniform : PopulationModel::radial_decay;
  spec.placement = placement == "center" ? StorePlacement::center : StorePlacement::random;
  spec.seed = cfg.seed;
  Instance instance = [&] {
    try {
      return generate_synthetic(spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("bad synthetic spec: ") + e.what());
    }
  }();

  auto config = config_json("synth", cfg, false);
  ordered_json s;
  s["grid"] = spec.grid;
  s["spacing_m"] = spec.spacing_m;
  s["population"] = to_string(spec.population);
  s["base_population"] = spec.base_population;
  s["decay_m"] = spec.decay_m;
  s["jitter"] = spec.jitter;
  s["existing_stores"] = spec.existing_stores;
  s["placement"] = to_string(spec.placement);
  s["candidate_stride"] = spec.candidate_stride;
  s["name"] = spec.name;
  config["spec"] = s;

  std::ostringstream text;
  echo_config(text, config);
  save_instance(instance, cfg.out_dir);
  print_instance(text, instance);
  text << "wrote: blocks.csv sites.csv distances.csv instance.json\n";
  out << text.str();
  return kSuccess;
}

int cmd_rank(const std::vector<std::string>& entries, const RunConfig& cfg, std::ostream& out) {
  auto config = config_json("rank", cfg, false);
  config["instances"] = entries;
  std::vector<RankInput> inputs;
  for (const auto& entry : entries) {
    std::string name;
    std::string dir = entry;
    if (const auto eq = entry.find('='); eq != std::string::npos) {
      name = entry.substr(0, eq);
      dir = entry.substr(eq + 1);
    }
    const Instance instance = load_instance_dir(dir);
    if (name.empty()) name = instance.name();
    const auto base = baseline_distances(instance);
    AccessProfile profile;
    try {
      profile = make_profile(base, instance.populations(), calibrate(instance, cfg.epsilon));
    } catch (const DegenerateDistances&) {
      profile.distances = base;
      profile.populations = instance.populations();
      profile.ede = 0.0;
      profile.weighted_mean = 0.0;
    }
    inputs.push_back(RankInput{name, std::move(profile), instance.total_population()});
  }
  const auto table = rank(inputs);
  std::ostringstream text;
  echo_config(text, config);
  const auto csv = rank_csv(table);
  text << csv;
  out << text.str();
  if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "rank.csv", csv);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equitable amenity siting with the Kolm-Pollak EDE", "eqloc"};
  app.require_subcommand(1);

  RunConfig cfg;
  InputOptions in;

  auto* ede = app.add_subcommand("ede", "Baseline EDE and access statistics");
  add_input_options(*ede, in);
  add_run_options(*ede, cfg, false);

  std::size_t k = 0;
  auto* locate = app.add_subcommand("locate", "Site k new amenities");
  add_input_options(*locate, in);
  add_run_options(*locate, cfg, true);
  locate->add_option("--k", k, "Number of new sites")->required();
  locate->add_option("--objective", cfg.objectives, "kolm-pollak | mean (repeatable)")
      ->check(CLI::IsMember({"kolm-pollak", "kolm_pollak", "ede", "mean"}));

  std::optional<double> target_m;
  std::optional<double> target_min;
  auto* target = app.add_subcommand("target", "Fewest new amenities reaching a target EDE");
  add_input_options(*target, in);
  add_run_options(*target, cfg, true);
  target->add_option("--target-m", target_m, "Target EDE in meters");
  target->add_option("--target-min", target_min, "Target EDE in walking minutes");

  SynthSpec spec;
  std::string population = "uniform";
  std::string placement = "center";
  auto* synth = app.add_subcommand("synth", "Generate a synthetic grid city");
  add_run_options(*synth, cfg, false);
  synth->add_option("--grid", spec.grid, "Blocks per side")->capture_default_str();
  synth->add_option("--spacing", spec.spacing_m, "Block spacing in meters")->capture_default_str();
  synth->add_option("--population", population, "uniform | radial-decay")
      ->check(CLI::IsMember({"uniform", "radial-decay"}))
      ->capture_default_str();
  synth->add_option("--base-pop", spec.base_population, "Population per block (center block for radial-decay)")
      ->capture_default_str();
  synth->add_option("--decay", spec.decay_m, "Radial decay distance in meters")->capture_default_str();
  synth->add_option("--jitter", spec.jitter, "Multiplicative population noise in [0, 1)")->capture_default_str();
  synth->add_option("--stores", spec.existing_stores, "Existing stores")->capture_default_str();
  synth->add_option("--placement", placement, "center | random")
      ->check(CLI::IsMember({"center", "random"}))
      ->capture_default_str();
  synth->add_option("--candidate-stride", spec.candidate_stride, "Blocks per candidate group side")
      ->capture_default_str();
  synth->add_option("--name", spec.name, "Instance name")->capture_default_str();

  std::vector<std::string> entries;
  auto* rank_cmd = app.add_subcommand("rank", "Rank instances by baseline EDE");
  add_run_options(*rank_cmd, cfg, false);
  rank_cmd->add_option("--instance", entries, "[NAME=]DIR, repeatable")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    for (auto* sub : app.get_subcommands()) {
      err << "error: " << e.what() << "\n" << sub->help();
      return kInputError;
    }
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*ede) return cmd_ede(in, cfg, out);
    if (*locate) return cmd_locate(in, cfg, k, out);
    if (*target) return cmd_target(in, cfg, target_m, target_min, out);
    if (*synth) return cmd_synth(spec, population, placement, cfg, out);
    if (*rank_cmd) return cmd_rank(entries, cfg, out);
  } catch (const BudgetExceedsCandidates& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ValidationError& e) {
    err << "error: invalid instance: " << e.what() << '\n';
    return kInputError;
  } catch (const MissingCoordinates& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace eqloc::cli
