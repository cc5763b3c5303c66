// Command-line front end: the four subcommands, the run manifest written
// next to every output, and the argv entry point with its exit-code map.
#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cyclophase/serialization.hpp"

namespace cyclophase {

// Everything needed to reproduce a run: rerunning the recorded command
// with the recorded parameters and version regenerates outputs with the
// recorded checksums, byte for byte.
struct RunManifest {
  std::string command;
  Json parameters;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<std::pair<std::string, std::string>> outputs;
};

Json manifest_to_json(const RunManifest& manifest);

// "fnv1a64:" followed by 16 hex digits
std::string fnv1a_checksum(const std::string& bytes);

inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr double kVerifyDeviationTol = 1e-9;

struct VerifyOptions {
  int max_n = 4;
  int trials = 20;
  std::uint64_t seed = kDefaultSeed;
  bool corrupt_rows = false;
  std::string out = "verify.json";
};

struct ScanOptions {
  std::vector<int> d_list = {1, 2, 3, 4, 5, 500};
  double theta_min = 0.0;
  double theta_max = std::numbers::pi / 2;
  int theta_steps = 201;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "scan.csv";
};

struct OptimizeOptions {
  int restarts = 200;
  Eigen::Index dim = 3;
  std::int64_t samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "optimize.json";
};

struct TrajectoryOptions {
  double theta = std::acos(0.25);  // the maximal-violation latitude
  int d = 3;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "trajectories.csv";
};

// Closed form against the permutation-sum oracle for N = 2..max_n with
// random states and phases, two-photon interference zeros, and rejection
// of non-orthonormal rows. Exit 1 on any deviation beyond
// kVerifyDeviationTol; with corrupt_rows set, feeds a deliberately
// non-unitary network in and reports the resulting rejection as exit 1.
int cmd_verify(const VerifyOptions& options, std::ostream& log);

// CHSH curves over the theta grid for every requested d, with the
// infinite-d limit column and a sidecar recording the reference bounds.
int cmd_scan(const ScanOptions& options, std::ostream& log);

// Random-restart search plus Haar sampling for the single-sample case;
// exit 1 if either ever beats the local bound.
int cmd_optimize(const OptimizeOptions& options, std::ostream& log);

// Sampled and continuous Bloch-sphere points of all four trajectories
// plus the anchors, for external plotting.
int cmd_trajectories(const TrajectoryOptions& options, std::ostream& log);

// Parse argv, merge an optional JSON config file (explicit flags win),
// dispatch. Exit codes: 0 success, 1 verification failure, 2 invalid
// input, 3 capacity exceeded.
int run_cli(int argc, const char* const* argv);

}  // namespace cyclophase
