// pscat: experiments on multipoint zero-range scatterers.
//
//   pscat <command> --config <path> [--out <dir>] [--threads <n>]
//
// Commands: amplitude, soperator, kernel, soliton, delta-limit, ite, box-bound.
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage or config error.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pscat/experiment.hpp"

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

const char* describe(pscat::experiment::Command c) {
  using pscat::experiment::Command;
  switch (c) {
    case Command::Amplitude: return "amplitude grids f, f+ with boundary and reciprocity checks";
    case Command::Soperator: return "singular values of S - I, rank law and unitarity";
    case Command::Kernel: return "explicit kernel basis of S - I";
    case Command::Soliton: return "transparency energies and ODE reflection check";
    case Command::DeltaLimit: return "narrow-well convergence to a point scatterer (d = 1)";
    case Command::Ite: return "interior transmission witnesses from vanishing plane-wave sums";
    case Command::BoxBound: return "multiplicity bound m - n on the Dirichlet square";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  namespace ex = pscat::experiment;

  CLI::App app{"Exactly solvable multipoint scattering experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;
  int soliton_n = 0;
  std::string soliton_kappas;

  std::vector<std::pair<CLI::App*, ex::Command>> subs;
  for (auto c : {ex::Command::Amplitude, ex::Command::Soperator, ex::Command::Kernel, ex::Command::Soliton,
                 ex::Command::DeltaLimit, ex::Command::Ite, ex::Command::BoxBound}) {
    CLI::App* sub = app.add_subcommand(ex::command_name(c), describe(c));
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--out", out_dir, "output directory (default: $PSCAT_OUT_DIR or .)");
    sub->add_option("--threads", threads, "worker threads for independent units")->check(CLI::PositiveNumber);
    if (c == ex::Command::Soliton) {
      sub->add_option("--N", soliton_n, "number of solitons (checked against --kappas)");
      sub->add_option("--kappas", soliton_kappas, "comma-separated kappa_j");
    }
    subs.emplace_back(sub, c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ex::Command command{};
  for (const auto& [sub, c] : subs)
    if (sub->parsed()) command = c;

  if (out_dir.empty()) {
    const char* env = std::getenv("PSCAT_OUT_DIR");
    out_dir = env ? env : ".";
  }

  try {
    ex::ExperimentConfig config;
    if (!config_path.empty()) {
      config = ex::load_config(command, config_path);
    } else if (command == ex::Command::Soliton && !soliton_kappas.empty()) {
      nlohmann::json doc;
      try {
        doc["kappas"] = parse_list(soliton_kappas);
      } catch (const std::exception&) {
        throw ex::ConfigError("option --kappas: expected comma-separated numbers");
      }
      config = ex::parse_config(command, doc);
    } else {
      throw ex::ConfigError("--config is required");
    }
    if (command == ex::Command::Soliton && soliton_n != 0 && static_cast<std::size_t>(soliton_n) != config.kappas.size())
      throw ex::ConfigError("option --N: " + std::to_string(soliton_n) + " does not match " +
                            std::to_string(config.kappas.size()) + " kappas");

    const ex::RunResult result = ex::run(config, {out_dir, threads});
    for (const auto& v : result.verdicts)
      std::cout << (v.passed ? "PASS  " : "FAIL  ") << v.name << "  (" << v.detail << ")\n";
    for (const auto& f : result.outputs) std::cout << "wrote " << f << '\n';
    std::cout << "manifest " << result.manifest_path << '\n';
    return result.exit_code;
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
