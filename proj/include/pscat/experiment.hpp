#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pscat/multipoint.hpp"

namespace pscat::experiment {

enum class Command { Amplitude, Soperator, Kernel, Soliton, DeltaLimit, Ite, BoxBound };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

/// Malformed or inconsistent configuration; the message names the field (and the
/// line for syntax errors).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thresholds behind every verdict. All of them are echoed into the manifest.
struct Tolerances {
  double rank_threshold = 1e-8;
  double kernel_residual = 1e-10;
  double unitarity_d1 = 1e-10;
  double unitarity_d2 = 1e-8;
  double unitarity_d3 = 1e-6;
  double boundary_residual = 1e-10;
  double reciprocity = 1e-12;
  double soliton_transmission = 1e-12;
  double soliton_reflection = 1e-4;
  double soliton_ode_transparency = 1e-3;
  double delta_ratio_min = 0.4;
  double delta_ratio_max = 0.62;
  double ite_helmholtz = 1e-4;
  double ite_point = 1e-12;
  double ite_cauchy = 1e-14;

  std::map<std::string, double> as_map() const;
};

struct ExperimentConfig {
  Command command = Command::Soperator;
  nlohmann::json source;  // the parsed document, echoed into the manifest

  int dimension = 0;
  std::vector<PointScatterer> scatterers;
  bool allow_complex_alpha = false;
  std::vector<double> energies;
  std::size_t quadrature = 64;

  std::vector<double> kappas;  // soliton
  std::vector<double> normings;
  std::vector<double> k_sweep;  // soliton: k values for the ODE sweep

  std::vector<double> alphas;  // delta-limit
  std::vector<int> well_sizes;

  std::vector<Complex> complex_energies;  // ite
  std::vector<std::size_t> direction_counts;

  std::vector<long long> box_energies;  // box-bound
  std::vector<std::size_t> points_per_trial;
  std::size_t trials = 100;
  unsigned long long seed = 1;

  bool dump_basis = false;
  Tolerances tolerances;

  MultipointPotential potential() const;
};

/// Validates `doc` against the schema of `command`.
ExperimentConfig parse_config(Command command, const nlohmann::json& doc);
/// Reads and parses a config file; syntax errors report the line.
ExperimentConfig load_config(Command command, const std::string& path);

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunResult {
  int exit_code = 0;
  std::vector<Verdict> verdicts;
  std::vector<std::string> outputs;
  std::string manifest_path;
};

struct RunOptions {
  std::string out_dir = ".";
  unsigned threads = 1;
};

/// Executes the experiment, writes CSV files and manifest.json into out_dir.
/// exit_code: 0 all verdicts pass, 1 a verdict failed.
RunResult run(const ExperimentConfig& config, const RunOptions& options);

/// FNV-1a 64 of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

/// 17 significant digits, locale-independent.
std::string format_double(double v);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pscat::experiment
