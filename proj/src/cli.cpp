#include "cyclophase/cli.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

namespace cyclophase {

namespace {

constexpr double kPi = std::numbers::pi;

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open \"" + path + "\" for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidInputError("cannot write \"" + path + "\"");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(RunManifest& manifest, const std::string& path,
          const std::string& bytes) {
  write_file(path, bytes);
  manifest.outputs.emplace_back(path, fnv1a_checksum(bytes));
}

void finish_manifest(const RunManifest& manifest) {
  write_file(manifest.outputs.front().first + ".manifest.json",
             dump(manifest_to_json(manifest)));
}

// worst absolute disagreement between the closed form and the permutation
// sum over all coincidence patterns
template <typename StateT>
double oracle_deviation(const CyclicConfig& config,
                        const std::vector<StateT>& states) {
  const InterferometerRows rows = build_cyclic_rows(config);
  const auto oracle = full_distribution(rows, states, true, OracleOptions{});
  const std::vector<double> closed = coincidence_distribution(config, states);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < closed.size(); ++idx)
    worst = std::max(worst, std::abs(oracle[idx].second - closed[idx]));
  return worst;
}

std::vector<double> random_phases(int n, std::mt19937_64& rng) {
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (double& phi : phases) phi = uniform_in(rng, -kPi, kPi);
  return phases;
}

int verify_corrupt_rows(const VerifyOptions& options, RunManifest& manifest,
                        std::ostream& log) {
  Json report;
  bool rejected = false;
  std::string message = "accepted a non-unitary network";
  try {
    const InterferometerRows good = build_cyclic_rows(CyclicConfig(2));
    const InterferometerRows bad(good.matrix() * 1.01);
    (void)bad;
  } catch (const InvalidInterferometerError& error) {
    rejected = true;
    message = error.what();
  }
  report["corrupt_rows"] = Json{{"rejected", rejected}, {"error", message}};
  report["passed"] = false;
  log << "verify: corrupted rows -> " << message << "\n";
  emit(manifest, options.out, dump(report));
  finish_manifest(manifest);
  return 1;
}

CLI::Option* seed_flag(CLI::App* cmd, std::uint64_t& seed) {
  return cmd->add_option("--seed", seed,
                         "seed for all stochastic operations");
}

// config-file keys across all subcommands; unknown keys are rejected,
// known keys that the active subcommand lacks are ignored
const std::set<std::string>& config_vocabulary() {
  static const std::set<std::string> keys = {
      "seed",       "out",         "d",       "theta-min",
      "theta-max",  "theta-steps", "max-n",   "trials",
      "restarts",   "dim",         "samples", "corrupt-rows",
      "theta"};
  return keys;
}

Json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot read config \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Json config;
  try {
    config = Json::parse(buffer.str());
  } catch (const Json::exception& error) {
    throw InvalidInputError(std::string("config: ") + error.what());
  }
  if (!config.is_object())
    throw InvalidInputError("config: top level must be a JSON object");
  for (const auto& item : config.items())
    if (config_vocabulary().count(item.key()) == 0)
      throw InvalidInputError("config: unknown key \"" + item.key() + "\"");
  return config;
}

template <typename T>
void merge_key(const Json& config, const CLI::App& cmd, const std::string& key,
               T& target) {
  if (!config.contains(key)) return;
  if (cmd.get_option("--" + key)->count() > 0) return;  // flags win
  try {
    target = config.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InvalidInputError("config: bad value for \"" + key + "\"");
  }
}

}  // namespace

std::string fnv1a_checksum(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

Json manifest_to_json(const RunManifest& manifest) {
  Json outputs;
  for (const auto& [path, checksum] : manifest.outputs)
    outputs[path] = checksum;
  return Json{{"command", manifest.command},
              {"version", manifest.version},
              {"seed", manifest.seed},
              {"parameters", manifest.parameters},
              {"outputs", std::move(outputs)}};
}

int cmd_verify(const VerifyOptions& options, std::ostream& log) {
  if (options.max_n < 2 || options.max_n > 8)
    throw InvalidInputError("verify: max-n must lie in [2, 8]");
  if (options.trials < 1)
    throw InvalidInputError("verify: need at least one trial");

  RunManifest manifest;
  manifest.command = "verify";
  manifest.seed = options.seed;
  manifest.parameters = Json{{"max-n", options.max_n},
                             {"trials", options.trials},
                             {"seed", options.seed},
                             {"corrupt-rows", options.corrupt_rows},
                             {"out", options.out}};
  if (options.corrupt_rows)
    return verify_corrupt_rows(options, manifest, log);

  std::mt19937_64 rng(options.seed);
  bool failed = false;
  Json report;
  report["deviation_threshold"] = kVerifyDeviationTol;
  Json per_n = Json::array();
  for (int n = 2; n <= options.max_n; ++n) {
    double worst_pure = 0.0;
    double worst_mixed = 0.0;
    for (int trial = 0; trial < options.trials; ++trial) {
      const CyclicConfig config(n, random_phases(n, rng));
      std::vector<PureState> pure;
      for (int k = 0; k < n; ++k) pure.push_back(random_pure_state(2, rng));
      worst_pure = std::max(worst_pure, oracle_deviation(config, pure));
    }
    for (int trial = 0; trial < options.trials; ++trial) {
      const CyclicConfig config(n, random_phases(n, rng));
      std::vector<MixedState> mixed;
      for (int k = 0; k < n; ++k)
        mixed.push_back(random_mixed_state(2, 2, rng));
      worst_mixed = std::max(worst_mixed, oracle_deviation(config, mixed));
    }
    per_n.push_back(Json{{"n", n},
                         {"worst_deviation_pure", worst_pure},
                         {"worst_deviation_mixed", worst_mixed}});
    log << "N=" << n << " worst deviation: pure "
        << format_double(worst_pure) << ", mixed "
        << format_double(worst_mixed) << "\n";
    failed |= worst_pure > kVerifyDeviationTol;
    failed |= worst_mixed > kVerifyDeviationTol;
  }
  report["per_n"] = std::move(per_n);

  // identical inputs: every odd-weight coincidence is a two-photon
  // interference zero
  const PureState photon = random_pure_state(2, rng);
  const std::vector<PureState> identical = {photon, photon};
  const auto hom = full_distribution(build_cyclic_rows(CyclicConfig(2)),
                                     identical, true, OracleOptions{});
  double hom_worst = 0.0;
  for (std::size_t idx = 0; idx < hom.size(); ++idx)
    if (std::popcount(idx) % 2 == 1)
      hom_worst = std::max(hom_worst, hom[idx].second);
  report["hong_ou_mandel_max_odd_probability"] = hom_worst;
  failed |= hom_worst > 1e-12;

  bool rejects_invalid = false;
  try {
    const InterferometerRows good = build_cyclic_rows(CyclicConfig(2));
    const InterferometerRows bad(good.matrix() * 1.01);
    (void)bad;
  } catch (const InvalidInterferometerError&) {
    rejects_invalid = true;
  }
  report["rejects_invalid_rows"] = rejects_invalid;
  failed |= !rejects_invalid;

  report["passed"] = !failed;
  log << "verify: " << (failed ? "FAIL" : "PASS") << "\n";
  emit(manifest, options.out, dump(report));
  finish_manifest(manifest);
  return failed ? 1 : 0;
}

int cmd_scan(const ScanOptions& options, std::ostream& log) {
  if (options.d_list.empty())
    throw InvalidInputError("scan: need at least one d");
  for (int d : options.d_list)
    if (d < 1) throw InvalidInputError("scan: every d must be >= 1");
  if (options.theta_steps < 1)
    throw InvalidInputError("scan: need at least one grid point");
  if (options.theta_min < 0.0 || options.theta_max > kPi / 2 ||
      options.theta_min > options.theta_max)
    throw InvalidInputError("scan: grid must lie inside [0, pi/2]");
  if (options.theta_steps == 1 && options.theta_min != options.theta_max)
    throw InvalidInputError("scan: a single grid point needs equal bounds");

  RunManifest manifest;
  manifest.command = "scan";
  manifest.seed = options.seed;
  manifest.parameters = Json{{"d", options.d_list},
                             {"theta-min", options.theta_min},
                             {"theta-max", options.theta_max},
                             {"theta-steps", options.theta_steps},
                             {"seed", options.seed},
                             {"out", options.out}};

  const auto theta_at = [&](int k) {
    if (options.theta_steps == 1) return options.theta_min;
    return options.theta_min + (options.theta_max - options.theta_min) * k /
                                   (options.theta_steps - 1);
  };

  std::vector<ScanRow> rows;
  rows.reserve(options.d_list.size() *
               static_cast<std::size_t>(options.theta_steps));
  double limit_max = -10.0;
  double limit_argmax = 0.0;
  for (int d : options.d_list) {
    double best = -10.0;
    double best_theta = 0.0;
    for (int k = 0; k < options.theta_steps; ++k) {
      ScanRow row;
      row.theta = theta_at(k);
      row.d = d;
      row.report = chsh_curve_value(row.theta, d);
      row.zeno_limit = chsh_zeno_limit(row.theta);
      if (row.report.i_chsh > best) {
        best = row.report.i_chsh;
        best_theta = row.theta;
      }
      if (row.zeno_limit > limit_max) {
        limit_max = row.zeno_limit;
        limit_argmax = row.theta;
      }
      rows.push_back(std::move(row));
    }
    log << "d=" << d << " max I=" << format_double(best) << " at theta="
        << format_double(best_theta) << "\n";
  }
  emit(manifest, options.out, scan_csv(rows));

  const Json sidecar{
      {"reference_lines",
       Json{{"classical_bound", 2.0},
            {"quantum_bound", 2.0 * std::sqrt(2.0)}}},
      {"zeno_limit_max", limit_max},
      {"zeno_limit_argmax_theta", limit_argmax}};
  emit(manifest, options.out + ".meta.json", dump(sidecar));
  finish_manifest(manifest);
  log << "scan: " << rows.size() << " rows -> " << options.out << "\n";
  return 0;
}

int cmd_optimize(const OptimizeOptions& options, std::ostream& log) {
  const OptimizationReport report =
      optimize_chsh_d1(options.restarts, options.seed);
  const double scan_max =
      random_state_scan(options.dim, options.samples, options.seed);

  const bool restart_ok = report.best_value <= 2.0 + 1e-6;
  const bool scan_ok = scan_max <= 2.0;
  Json j = optimization_report_to_json(report);
  j["within_local_bound"] = restart_ok;
  j["random_state_scan"] = Json{{"dim", options.dim},
                                {"samples", options.samples},
                                {"max_i_chsh", scan_max},
                                {"within_local_bound", scan_ok}};

  RunManifest manifest;
  manifest.command = "optimize";
  manifest.seed = options.seed;
  manifest.parameters = Json{{"restarts", options.restarts},
                             {"dim", options.dim},
                             {"samples", options.samples},
                             {"seed", options.seed},
                             {"out", options.out}};
  emit(manifest, options.out, dump(j));
  finish_manifest(manifest);
  log << "optimize: best=" << format_double(report.best_value)
      << " scan max=" << format_double(scan_max) << " ("
      << (restart_ok && scan_ok ? "within" : "BEYOND")
      << " the local bound)\n";
  return restart_ok && scan_ok ? 0 : 1;
}

int cmd_trajectories(const TrajectoryOptions& options, std::ostream& log) {
  const TrajectoryParams params(options.theta, options.d);

  std::vector<TrajectoryPoint> points;
  points.push_back({"w1", "anchor", 0.0, anchor_w1(params.theta)});
  points.push_back({"w2", "anchor", 0.0, anchor_w2(params.theta)});
  struct Named {
    const char* name;
    BlochVector (*at)(double, double);
  };
  const Named trajectories[4] = {{"x1", &trajectory_x1},
                                 {"x2", &trajectory_x2},
                                 {"y1", &trajectory_y1},
                                 {"y2", &trajectory_y2}};
  for (const Named& trajectory : trajectories) {
    for (int k = 1; k <= params.d; ++k) {
      const double t = kPi * k / (params.d + 1);
      points.push_back({trajectory.name, "sample", t,
                        trajectory.at(params.theta, t)});
    }
    for (int k = 0; k <= 100; ++k) {
      const double t = kPi * (k / 100.0);
      points.push_back(
          {trajectory.name, "grid", t, trajectory.at(params.theta, t)});
    }
  }

  RunManifest manifest;
  manifest.command = "trajectories";
  manifest.seed = options.seed;
  manifest.parameters = Json{{"theta", options.theta},
                             {"d", options.d},
                             {"seed", options.seed},
                             {"out", options.out}};
  emit(manifest, options.out, trajectories_csv(points));
  finish_manifest(manifest);
  log << "trajectories: " << points.size() << " points -> " << options.out
      << "\n";
  return 0;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"cyclic-interferometer geometric-phase toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  VerifyOptions verify_options;
  ScanOptions scan_options;
  OptimizeOptions optimize_options;
  TrajectoryOptions trajectory_options;
  std::string config_path;

  CLI::App* verify = app.add_subcommand(
      "verify", "closed form vs permutation-sum oracle consistency");
  verify->add_option("--max-n", verify_options.max_n,
                     "largest photon number checked");
  verify->add_option("--trials", verify_options.trials,
                     "random draws per photon number and state kind");
  verify->add_flag("--corrupt-rows", verify_options.corrupt_rows,
                   "feed a non-unitary network in and report the rejection");
  seed_flag(verify, verify_options.seed);
  verify->add_option("--out", verify_options.out, "report path");

  CLI::App* scan = app.add_subcommand(
      "scan", "CHSH value over the anchor-latitude grid");
  scan->add_option("--d", scan_options.d_list, "photons per trajectory")
      ->delimiter(',');
  scan->add_option("--theta-min", scan_options.theta_min, "grid start");
  scan->add_option("--theta-max", scan_options.theta_max, "grid end");
  scan->add_option("--theta-steps", scan_options.theta_steps, "grid points");
  seed_flag(scan, scan_options.seed);
  scan->add_option("--out", scan_options.out, "CSV path");

  CLI::App* optimize = app.add_subcommand(
      "optimize", "search for single-sample CHSH violations");
  optimize->add_option("--restarts", optimize_options.restarts,
                       "simplex restarts");
  optimize->add_option("--dim", optimize_options.dim,
                       "internal dimension of the Haar scan");
  optimize->add_option("--samples", optimize_options.samples,
                       "Haar-random draws");
  seed_flag(optimize, optimize_options.seed);
  optimize->add_option("--out", optimize_options.out, "report path");

  CLI::App* trajectories = app.add_subcommand(
      "trajectories", "Bloch-sphere points of the four trajectories");
  trajectories->add_option("--theta", trajectory_options.theta,
                           "anchor latitude");
  trajectories->add_option("--d", trajectory_options.d,
                           "sampled states per trajectory");
  seed_flag(trajectories, trajectory_options.seed);
  trajectories->add_option("--out", trajectory_options.out, "CSV path");

  for (CLI::App* cmd : {verify, scan, optimize, trajectories})
    cmd->add_option("--config", config_path,
                    "JSON file with flag values; explicit flags win");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      if (verify->get_option("--config")->count() > 0) {
        const Json config = load_config(config_path);
        merge_key(config, *verify, "max-n", verify_options.max_n);
        merge_key(config, *verify, "trials", verify_options.trials);
        merge_key(config, *verify, "seed", verify_options.seed);
        merge_key(config, *verify, "corrupt-rows",
                  verify_options.corrupt_rows);
        merge_key(config, *verify, "out", verify_options.out);
      }
      return cmd_verify(verify_options, std::cout);
    }
    if (scan->parsed()) {
      if (scan->get_option("--config")->count() > 0) {
        const Json config = load_config(config_path);
        merge_key(config, *scan, "d", scan_options.d_list);
        merge_key(config, *scan, "theta-min", scan_options.theta_min);
        merge_key(config, *scan, "theta-max", scan_options.theta_max);
        merge_key(config, *scan, "theta-steps", scan_options.theta_steps);
        merge_key(config, *scan, "seed", scan_options.seed);
        merge_key(config, *scan, "out", scan_options.out);
      }
      return cmd_scan(scan_options, std::cout);
    }
    if (optimize->parsed()) {
      if (optimize->get_option("--config")->count() > 0) {
        const Json config = load_config(config_path);
        merge_key(config, *optimize, "restarts", optimize_options.restarts);
        merge_key(config, *optimize, "dim", optimize_options.dim);
        merge_key(config, *optimize, "samples", optimize_options.samples);
        merge_key(config, *optimize, "seed", optimize_options.seed);
        merge_key(config, *optimize, "out", optimize_options.out);
      }
      return cmd_optimize(optimize_options, std::cout);
    }
    if (trajectories->get_option("--config")->count() > 0) {
      const Json config = load_config(config_path);
      merge_key(config, *trajectories, "theta", trajectory_options.theta);
      merge_key(config, *trajectories, "d", trajectory_options.d);
      merge_key(config, *trajectories, "seed", trajectory_options.seed);
      merge_key(config, *trajectories, "out", trajectory_options.out);
    }
    return cmd_trajectories(trajectory_options, std::cout);
  } catch (const CapacityError& error) {
    std::cerr << "capacity exceeded: " << error.what() << "\n";
    return 3;
  } catch (const UndefinedPhaseError& error) {
    std::cerr << "invalid input: " << error.what() << "\n";
    return 2;
  } catch (const InvalidInputError& error) {
    std::cerr << "invalid input: " << error.what() << "\n";
    return 2;
  } catch (const Json::exception& error) {
    std::cerr << "invalid input: " << error.what() << "\n";
    return 2;
  }
}

}  // namespace cyclophase
