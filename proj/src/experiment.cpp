#include "pscat/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "pscat/greens.hpp"
#include "pscat/interior.hpp"
#include "pscat/scattering.hpp"
#include "pscat/soliton1d.hpp"
#include "pscat/soperator.hpp"

namespace pscat::experiment {

using nlohmann::json;

namespace {

const std::vector<std::pair<Command, std::string>>& command_table() {
  static const std::vector<std::pair<Command, std::string>> table = {
      {Command::Amplitude, "amplitude"}, {Command::Soperator, "soperator"},     {Command::Kernel, "kernel"},
      {Command::Soliton, "soliton"},     {Command::DeltaLimit, "delta-limit"}, {Command::Ite, "ite"},
      {Command::BoxBound, "box-bound"}};
  return table;
}

// ---- config parsing -------------------------------------------------------

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError("field '" + field + "': expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("field '" + field + "': must be finite");
  return x;
}

std::vector<double> as_number_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError("field '" + field + "': expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

long long as_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError("field '" + field + "': expected an integer");
  return v.get<long long>();
}

std::size_t as_count(const json& v, const std::string& field) {
  const long long x = as_integer(v, field);
  if (x < 1) throw ConfigError("field '" + field + "': must be a positive integer");
  return static_cast<std::size_t>(x);
}

const json& require(const json& doc, const std::string& field) {
  if (!doc.contains(field)) throw ConfigError("missing field '" + field + "'");
  return doc.at(field);
}

Complex as_complex(const json& v, const std::string& field) {
  if (v.is_number()) return {as_number(v, field), 0.0};
  if (v.is_array() && v.size() == 2) return {as_number(v[0], field + "[0]"), as_number(v[1], field + "[1]")};
  throw ConfigError("field '" + field + "': expected a number or a [re, im] pair");
}

void check_keys(const json& doc, const std::set<std::string>& allowed) {
  for (const auto& item : doc.items())
    if (!allowed.contains(item.key())) throw ConfigError("unknown field '" + item.key() + "'");
}

void parse_potential(const json& doc, ExperimentConfig& cfg, bool require_alpha) {
  const json& dim = require(doc, "dimension");
  const long long d = as_integer(dim, "dimension");
  if (d < 1 || d > 3) throw ConfigError("field 'dimension': must be 1, 2 or 3");
  cfg.dimension = static_cast<int>(d);
  if (doc.contains("experimental_complex_alpha")) {
    if (!doc["experimental_complex_alpha"].is_boolean())
      throw ConfigError("field 'experimental_complex_alpha': expected true or false");
    cfg.allow_complex_alpha = doc["experimental_complex_alpha"].get<bool>();
  }
  const json& list = require(doc, "scatterers");
  if (!list.is_array()) throw ConfigError("field 'scatterers': expected a list");
  for (std::size_t j = 0; j < list.size(); ++j) {
    const std::string where = "scatterers[" + std::to_string(j) + "]";
    const json& s = list[j];
    if (!s.is_object()) throw ConfigError("field '" + where + "': expected an object");
    check_keys(s, {"position", "alpha", "alpha_imag"});
    if (!s.contains("position")) throw ConfigError("missing field '" + where + ".position'");
    const auto pos = as_number_list(s["position"], where + ".position");
    if (pos.size() != static_cast<std::size_t>(d))
      throw ConfigError("field '" + where + ".position': expected " + std::to_string(d) + " coordinates");
    PointScatterer p;
    for (std::size_t c = 0; c < pos.size(); ++c) p.position[c] = pos[c];
    if (s.contains("alpha"))
      p.alpha = as_number(s["alpha"], where + ".alpha");
    else if (require_alpha)
      throw ConfigError("missing field '" + where + ".alpha'");
    if (s.contains("alpha_imag")) {
      if (!cfg.allow_complex_alpha)
        throw ConfigError("field '" + where + ".alpha_imag': requires experimental_complex_alpha = true");
      p.alpha = Complex(p.alpha.real(), as_number(s["alpha_imag"], where + ".alpha_imag"));
    }
    cfg.scatterers.push_back(p);
  }
  try {
    (void)cfg.potential();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("field 'scatterers': ") + e.what());
  }
}

void parse_energies(const json& doc, ExperimentConfig& cfg) {
  const int given = doc.contains("energy") + doc.contains("energies") + doc.contains("energy_sweep");
  if (given == 0) throw ConfigError("missing field 'energies' (or 'energy' / 'energy_sweep')");
  if (given > 1) throw ConfigError("fields 'energy', 'energies', 'energy_sweep' are mutually exclusive");
  if (doc.contains("energy")) {
    cfg.energies = {as_number(doc["energy"], "energy")};
  } else if (doc.contains("energies")) {
    cfg.energies = as_number_list(doc["energies"], "energies");
  } else {
    const json& sweep = doc["energy_sweep"];
    if (!sweep.is_object()) throw ConfigError("field 'energy_sweep': expected an object");
    check_keys(sweep, {"from", "to", "count"});
    const double from = as_number(require(sweep, "from"), "energy_sweep.from");
    const double to = as_number(require(sweep, "to"), "energy_sweep.to");
    const std::size_t count = as_count(require(sweep, "count"), "energy_sweep.count");
    for (std::size_t i = 0; i < count; ++i)
      cfg.energies.push_back(count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  if (cfg.energies.empty()) throw ConfigError("field 'energies': must not be empty");
  for (std::size_t i = 0; i < cfg.energies.size(); ++i)
    if (!(cfg.energies[i] > 0.0)) throw ConfigError("field 'energies[" + std::to_string(i) + "]': energy must be positive");
}

void parse_tolerances(const json& doc, ExperimentConfig& cfg) {
  if (!doc.contains("tolerances")) return;
  const json& t = doc["tolerances"];
  if (!t.is_object()) throw ConfigError("field 'tolerances': expected an object");
  Tolerances& tol = cfg.tolerances;
  const std::map<std::string, double*> slots = {
      {"rank_threshold", &tol.rank_threshold},
      {"kernel_residual", &tol.kernel_residual},
      {"unitarity_d1", &tol.unitarity_d1},
      {"unitarity_d2", &tol.unitarity_d2},
      {"unitarity_d3", &tol.unitarity_d3},
      {"boundary_residual", &tol.boundary_residual},
      {"reciprocity", &tol.reciprocity},
      {"soliton_transmission", &tol.soliton_transmission},
      {"soliton_reflection", &tol.soliton_reflection},
      {"soliton_ode_transparency", &tol.soliton_ode_transparency},
      {"delta_ratio_min", &tol.delta_ratio_min},
      {"delta_ratio_max", &tol.delta_ratio_max},
      {"ite_helmholtz", &tol.ite_helmholtz},
      {"ite_point", &tol.ite_point},
      {"ite_cauchy", &tol.ite_cauchy}};
  for (const auto& item : t.items()) {
    auto it = slots.find(item.key());
    if (it == slots.end()) throw ConfigError("unknown field 'tolerances." + item.key() + "'");
    const double v = as_number(item.value(), "tolerances." + item.key());
    if (!(v > 0.0)) throw ConfigError("field 'tolerances." + item.key() + "': must be positive");
    *it->second = v;
  }
}

std::size_t default_quadrature(int d) { return d == 3 ? 288 : (d == 2 ? 64 : 2); }

// ---- output helpers --------------------------------------------------------

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(long long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

void write_csv(const std::filesystem::path& path, const Csv& csv) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(csv.header);
  for (const auto& r : csv.rows) line(r);
}

// Runs fn(i) for i in [0, count) on up to `threads` workers; the first exception is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const RunOptions& opt) : cfg_(cfg), opt_(opt), dir_(opt.out_dir) {
    std::filesystem::create_directories(dir_);
  }

  void verdict(std::string name, bool passed, std::string detail) {
    result_.verdicts.push_back({std::move(name), passed, std::move(detail)});
  }

  void emit(const std::string& name, const Csv& csv) {
    write_csv(dir_ / name, csv);
    result_.outputs.push_back(name);
  }

  RunResult finish(const std::map<std::string, double>& thresholds) {
    result_.exit_code = std::all_of(result_.verdicts.begin(), result_.verdicts.end(), [](const Verdict& v) { return v.passed; }) ? 0 : 1;
    json manifest;
    manifest["tool"] = "pscat";
    manifest["version"] = kVersion;
    manifest["command"] = command_name(cfg_.command);
    manifest["config_hash"] = config_hash(cfg_.source);
    manifest["config"] = cfg_.source;
    manifest["thresholds"] = thresholds;
    manifest["outputs"] = result_.outputs;
    json verdicts = json::array();
    for (const auto& v : result_.verdicts)
      verdicts.push_back({{"name", v.name}, {"status", v.passed ? "PASS" : "FAIL"}, {"detail", v.detail}});
    manifest["verdicts"] = verdicts;
    manifest["exit_code"] = result_.exit_code;
    const auto path = dir_ / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << manifest.dump(2) << '\n';
    result_.manifest_path = path.string();
    return result_;
  }

  const ExperimentConfig& cfg() const { return cfg_; }
  unsigned threads() const { return opt_.threads; }

 private:
  const ExperimentConfig& cfg_;
  const RunOptions& opt_;
  std::filesystem::path dir_;
  RunResult result_;
};

double unitarity_tolerance(const Tolerances& t, int d) {
  return d == 1 ? t.unitarity_d1 : (d == 2 ? t.unitarity_d2 : t.unitarity_d3);
}

// Directions on a circle through e1: the plane for d = 2, the x-z great circle for d = 3.
std::vector<std::pair<double, Vec>> grid_directions(int d, std::size_t m) {
  std::vector<std::pair<double, Vec>> out;
  if (d == 1) return {{0.0, Vec{1.0, 0.0, 0.0}}, {kPi, Vec{-1.0, 0.0, 0.0}}};
  for (std::size_t i = 0; i < m; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
    if (d == 2)
      out.push_back({t, Vec{std::cos(t), std::sin(t), 0.0}});
    else
      out.push_back({t, Vec{std::sin(t), 0.0, std::cos(t)}});
  }
  return out;
}

std::map<std::string, double> pick(const Tolerances& t, std::initializer_list<const char*> keys) {
  const auto all = t.as_map();
  std::map<std::string, double> out;
  for (const char* k : keys) out[k] = all.at(k);
  return out;
}

// ---- commands ----------------------------------------------------------------

RunResult run_amplitude(Runner& r) {
  const auto& cfg = r.cfg();
  const auto pot = cfg.potential();
  const int d = cfg.dimension;
  const auto dirs = grid_directions(d, cfg.quadrature);
  const std::size_t ne = cfg.energies.size();
  std::vector<Csv> tables(ne);
  std::vector<double> boundary(ne, 0.0);
  std::vector<double> reciprocity(ne, 0.0);
  std::vector<std::string> failure(ne);

  parallel_for(ne, r.threads(), [&](std::size_t e) {
    const double energy = cfg.energies[e];
    const double kappa = std::sqrt(energy);
    Csv& csv = tables[e];
    csv.header = {"theta_in", "theta_out", "Re(f)", "Im(f)", "Re(f+)", "Im(f+)"};
    try {
      const Complex c = greens::amplitude_normalization(d, kappa);
      const ChargeSolver solver(pot, kappa);
      double fmax = 0.0;
      double worst_rec = 0.0;
      for (const auto& [tin, din] : dirs) {
        const ChargeSolution sol = solver.solve(kappa * din);
        boundary[e] = std::max(boundary[e], boundary_residual(pot, sol));
        for (const auto& [tout, dout] : dirs) {
          const Complex f = amplitude_f(pot, sol, kappa * dout);
          const Complex fp = c * f;
          csv.add({fmt(tin), fmt(tout), fmt(f.real()), fmt(f.imag()), fmt(fp.real()), fmt(fp.imag())});
          const Complex swapped = amplitude_f(pot, solver.solve(-kappa * dout), -kappa * din);
          fmax = std::max(fmax, std::abs(f));
          worst_rec = std::max(worst_rec, std::abs(f - swapped));
        }
      }
      reciprocity[e] = fmax > 0.0 ? worst_rec / fmax : 0.0;
    } catch (const NumericalError& ex) {
      failure[e] = ex.what();
    }
  });

  const auto& tol = cfg.tolerances;
  for (std::size_t e = 0; e < ne; ++e) {
    const std::string tag = "E=" + fmt(cfg.energies[e]);
    if (!failure[e].empty()) {
      r.verdict("amplitude " + tag, false, failure[e]);
      continue;
    }
    r.emit("amplitude_E" + std::to_string(e) + ".csv", tables[e]);
    r.verdict("boundary conditions " + tag, boundary[e] < tol.boundary_residual, "max residual " + sci(boundary[e]));
    r.verdict("reciprocity f(k,l)=f(-l,-k) " + tag, reciprocity[e] < tol.reciprocity, "relative defect " + sci(reciprocity[e]));
  }
  return r.finish(pick(tol, {"boundary_residual", "reciprocity"}));
}

RunResult run_soperator(Runner& r) {
  const auto& cfg = r.cfg();
  const auto pot = cfg.potential();
  const auto quad = build_quadrature(cfg.dimension, cfg.quadrature);
  const auto& tol = cfg.tolerances;
  const std::size_t ne = cfg.energies.size();
  std::vector<SingularSpectrumReport> reports(ne);
  std::vector<double> defect(ne, 0.0);
  std::vector<std::string> failure(ne);

  parallel_for(ne, r.threads(), [&](std::size_t e) {
    try {
      const auto s = build_soperator(pot, cfg.energies[e], quad);
      reports[e] = singular_spectrum(s, pot.size(), tol.rank_threshold);
      if (pot.self_adjoint()) defect[e] = unitarity_defect(s);
    } catch (const NumericalError& ex) {
      failure[e] = ex.what();
    }
  });

  for (std::size_t e = 0; e < ne; ++e) {
    const std::string tag = "E=" + fmt(cfg.energies[e]);
    if (!failure[e].empty()) {
      r.verdict("rank(S-1) <= n " + tag, false, failure[e]);
      continue;
    }
    const auto& rep = reports[e];
    Csv csv;
    csv.header = {"index", "sigma", "sigma/sigma1"};
    const double s1 = rep.sigma.empty() ? 0.0 : rep.sigma.front();
    for (std::size_t i = 0; i < rep.sigma.size(); ++i)
      csv.add({fmt(i), fmt(rep.sigma[i]), fmt(s1 > 0.0 ? rep.sigma[i] / s1 : 0.0)});
    r.emit("soperator_E" + std::to_string(e) + ".csv", csv);
    r.verdict("rank(S-1) <= n " + tag, rep.rank_law_holds(),
              "rank " + std::to_string(rep.rank_estimate) + ", n " + std::to_string(pot.size()) + ", sigma_{n+1}/sigma_1 " +
                  sci(rep.tail_ratio()));
    if (pot.self_adjoint()) {
      const double limit = unitarity_tolerance(tol, cfg.dimension);
      r.verdict("unitarity " + tag, defect[e] < limit, "||S*S - I|| " + sci(defect[e]));
    }
  }
  return r.finish(pick(tol, {"rank_threshold", "unitarity_d1", "unitarity_d2", "unitarity_d3"}));
}

RunResult run_kernel(Runner& r) {
  const auto& cfg = r.cfg();
  const auto pot = cfg.potential();
  const auto quad = build_quadrature(cfg.dimension, cfg.quadrature);
  const auto& tol = cfg.tolerances;
  const std::size_t ne = cfg.energies.size();
  std::vector<KernelBasis> kernels(ne);
  std::vector<std::string> failure(ne);
  parallel_for(ne, r.threads(), [&](std::size_t e) {
    try {
      kernels[e] = kernel_basis(pot, cfg.energies[e], quad);
    } catch (const NumericalError& ex) {
      failure[e] = ex.what();
    }
  });

  Csv table;
  table.header = {"energy", "M", "n", "rank_q", "dimension", "residual"};
  const std::size_t m = quad.size();
  for (std::size_t e = 0; e < ne; ++e) {
    const std::string tag = "E=" + fmt(cfg.energies[e]);
    if (!failure[e].empty()) {
      r.verdict("kernel " + tag, false, failure[e]);
      continue;
    }
    const auto& kb = kernels[e];
    const std::size_t dim = kb.basis.cols();
    table.add({fmt(cfg.energies[e]), fmt(m), fmt(pot.size()), fmt(kb.rank_q), fmt(dim), fmt(kb.residual)});
    r.verdict("kernel dimension = M - n " + tag, dim + pot.size() == m,
              "dimension " + std::to_string(dim) + ", M " + std::to_string(m) + ", rank(Q) " + std::to_string(kb.rank_q));
    r.verdict("kernel residual " + tag, kb.residual < tol.kernel_residual, "max ||(S-1)u|| " + sci(kb.residual));
    if (cfg.dump_basis) {
      Csv basis;
      for (std::size_t c = 0; c < dim; ++c) {
        basis.header.push_back("Re(u" + std::to_string(c) + ")");
        basis.header.push_back("Im(u" + std::to_string(c) + ")");
      }
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::string> row;
        for (std::size_t c = 0; c < dim; ++c) {
          row.push_back(fmt(kb.basis(i, c).real()));
          row.push_back(fmt(kb.basis(i, c).imag()));
        }
        basis.add(std::move(row));
      }
      r.emit("kernel_basis_E" + std::to_string(e) + ".csv", basis);
    }
  }
  r.emit("kernel.csv", table);
  return r.finish(pick(tol, {"kernel_residual"}));
}

RunResult run_soliton(Runner& r) {
  const auto& cfg = r.cfg();
  const auto& tol = cfg.tolerances;
  const soliton::SolitonSpectrum spec(cfg.kappas, cfg.normings);
  const std::size_t n = spec.size();
  const std::size_t expected = (n - 1) / 2;

  std::vector<double> energies;
  try {
    energies = soliton::transparency_energies(spec);
  } catch (const NumericalError& ex) {
    r.verdict("transparency energies", false, ex.what());
  }
  Csv table;
  table.header = {"N", "count"};
  for (std::size_t i = 0; i < energies.size(); ++i) table.header.push_back("E_" + std::to_string(i + 1));
  std::vector<std::string> row = {fmt(n), fmt(energies.size())};
  for (double e : energies) row.push_back(fmt(e));
  table.add(row);
  r.emit("soliton_energies.csv", table);
  r.verdict("count = floor((N-1)/2)", energies.size() == expected,
            "found " + std::to_string(energies.size()) + ", expected " + std::to_string(expected));

  double worst_t = 0.0;
  for (double e : energies) worst_t = std::max(worst_t, std::abs(soliton::transmission_T(spec, std::sqrt(e)) - 1.0));
  r.verdict("|T(k_m) - 1| by product formula", worst_t < tol.soliton_transmission, "max " + sci(worst_t));

  double kmax = 0.0;
  for (double k : cfg.k_sweep) kmax = std::max(kmax, k);
  for (double e : energies) kmax = std::max(kmax, std::sqrt(e));
  const double h = std::min(0.01, 2.0 * kPi / (40.0 * kmax));
  const auto sampled = soliton::sample_nsoliton(spec, h);

  const std::size_t nk = cfg.k_sweep.size();
  std::vector<soliton::Scattering1D> sweep(nk);
  parallel_for(nk, r.threads(), [&](std::size_t i) { sweep[i] = soliton::scatter1d_numeric(sampled, cfg.k_sweep[i]); });
  Csv csv;
  csv.header = {"k", "Re(T)", "Im(T)", "Re(T_num)", "Im(T_num)", "|R|"};
  double worst_r = 0.0;
  for (std::size_t i = 0; i < nk; ++i) {
    const Complex t = soliton::transmission_T(spec, cfg.k_sweep[i]);
    csv.add({fmt(cfg.k_sweep[i]), fmt(t.real()), fmt(t.imag()), fmt(sweep[i].transmission.real()),
             fmt(sweep[i].transmission.imag()), fmt(std::abs(sweep[i].reflection))});
    worst_r = std::max(worst_r, std::abs(sweep[i].reflection));
  }
  r.emit("soliton_sweep.csv", csv);
  r.verdict("reflectionless |R(k)| (ODE)", worst_r < tol.soliton_reflection, "max " + sci(worst_r));

  double worst_ode = 0.0;
  for (double e : energies)
    worst_ode = std::max(worst_ode, std::abs(soliton::scatter1d_numeric(sampled, std::sqrt(e)).transmission - 1.0));
  r.verdict("|T_num(k_m) - 1| (ODE)", worst_ode < tol.soliton_ode_transparency, "max " + sci(worst_ode));
  return r.finish(pick(tol, {"soliton_transmission", "soliton_reflection", "soliton_ode_transparency"}));
}

RunResult run_delta_limit(Runner& r) {
  const auto& cfg = r.cfg();
  const auto& tol = cfg.tolerances;
  const std::size_t na = cfg.alphas.size();
  const std::size_t nn = cfg.well_sizes.size();
  std::vector<double> errors(na * nn);
  parallel_for(na * nn, r.threads(), [&](std::size_t i) {
    errors[i] = soliton::delta_limit_error(cfg.alphas[i / nn], cfg.well_sizes[i % nn]);
  });
  Csv csv;
  csv.header = {"alpha", "N", "error"};
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t j = 0; j < nn; ++j) csv.add({fmt(cfg.alphas[a]), fmt(cfg.well_sizes[j]), fmt(errors[a * nn + j])});
    for (std::size_t j = 1; j < nn; ++j) {
      const double ratio = errors[a * nn + j] / errors[a * nn + j - 1];
      r.verdict("first-order convergence alpha=" + fmt(cfg.alphas[a]) + " N=" + fmt(cfg.well_sizes[j]),
                ratio >= tol.delta_ratio_min && ratio <= tol.delta_ratio_max, "error ratio " + fmt(ratio));
    }
  }
  r.emit("delta_limit.csv", csv);
  return r.finish(pick(tol, {"delta_ratio_min", "delta_ratio_max"}));
}

RunResult run_ite(Runner& r) {
  const auto& cfg = r.cfg();
  const auto& tol = cfg.tolerances;
  const auto pot = cfg.potential();
  std::vector<Vec> points;
  for (const auto& s : pot.scatterers()) points.push_back(s.position);
  const double radius = interior::domain_radius(points);
  const auto inner = interior::interior_samples(cfg.dimension, radius, 40, points, 0.05);
  const auto outer = interior::boundary_samples(cfg.dimension, radius, 64);

  struct Unit {
    Complex energy;
    std::size_t m;
  };
  std::vector<Unit> units;
  for (Complex e : cfg.complex_energies)
    for (std::size_t m : cfg.direction_counts) units.push_back({e, m});
  std::vector<std::size_t> dims(units.size());
  std::vector<interior::IteResiduals> res(units.size());
  parallel_for(units.size(), r.threads(), [&](std::size_t u) {
    const auto family = interior::vanishing_herglotz_basis(cfg.dimension, points, units[u].energy, units[u].m);
    dims[u] = family.witness_dimension();
    for (std::size_t c = 0; c < dims[u]; ++c) {
      const auto one = interior::verify_ite_pair(pot, family, c, inner, outer);
      res[u].helmholtz = std::max(res[u].helmholtz, one.helmholtz);
      res[u].point = std::max(res[u].point, one.point);
      res[u].cauchy = std::max(res[u].cauchy, one.cauchy);
    }
  });
  Csv csv;
  csv.header = {"Re(E)", "Im(E)", "M", "n", "witness_dimension", "helmholtz_res", "point_res", "cauchy_res"};
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& [e, m] = units[u];
    csv.add({fmt(e.real()), fmt(e.imag()), fmt(m), fmt(points.size()), fmt(dims[u]), fmt(res[u].helmholtz),
             fmt(res[u].point), fmt(res[u].cauchy)});
    const std::string tag = "E=" + fmt(e.real()) + (e.imag() != 0.0 ? "+" + fmt(e.imag()) + "i" : "") + " M=" + fmt(m);
    r.verdict("witness dimension = M - n " + tag, dims[u] + points.size() == m, "dimension " + std::to_string(dims[u]));
    r.verdict("ITE residuals " + tag,
              res[u].helmholtz < tol.ite_helmholtz && res[u].point < tol.ite_point && res[u].cauchy < tol.ite_cauchy,
              "helmholtz " + sci(res[u].helmholtz) + ", point " + sci(res[u].point) + ", cauchy " + sci(res[u].cauchy));
  }
  r.emit("ite.csv", csv);
  return r.finish(pick(tol, {"ite_helmholtz", "ite_point", "ite_cauchy"}));
}

RunResult run_box_bound(Runner& r) {
  const auto& cfg = r.cfg();
  Csv csv;
  csv.header = {"E", "m", "n", "trial", "bound"};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(0.0, kPi);
  for (long long energy : cfg.box_energies) {
    const auto entry = interior::box_eigenspace(energy);
    const std::size_t m = entry.multiplicity();
    for (std::size_t n : cfg.points_per_trial) {
      const std::string tag = "E=" + std::to_string(energy) + " m=" + std::to_string(m) + " n=" + std::to_string(n);
      if (n >= m) {
        r.verdict("bound >= m - n " + tag, false, "needs n < m");
        continue;
      }
      std::size_t ok = 0;
      std::size_t least = m;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        std::vector<Vec> pts;
        for (std::size_t j = 0; j < n; ++j) {
          double x = 0.0;
          double y = 0.0;
          while (x <= 0.0) x = coord(rng);
          while (y <= 0.0) y = coord(rng);
          pts.push_back({x, y, 0.0});
        }
        const std::size_t bound = interior::multiplicity_lower_bound(entry, pts);
        csv.add({fmt(energy), fmt(m), fmt(n), fmt(t), fmt(bound)});
        ok += bound + n >= m;
        least = std::min(least, bound);
      }
      r.verdict("bound >= m - n " + tag, ok == cfg.trials,
                std::to_string(ok) + "/" + std::to_string(cfg.trials) + " trials, smallest bound " + std::to_string(least));
    }
  }
  r.emit("box_bound.csv", csv);
  return r.finish({});
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& [c, n] : command_table())
    if (n == name) return c;
  return std::nullopt;
}

std::string command_name(Command c) {
  for (const auto& [cc, n] : command_table())
    if (cc == c) return n;
  return "?";
}

std::map<std::string, double> Tolerances::as_map() const {
  return {{"rank_threshold", rank_threshold},
          {"kernel_residual", kernel_residual},
          {"unitarity_d1", unitarity_d1},
          {"unitarity_d2", unitarity_d2},
          {"unitarity_d3", unitarity_d3},
          {"boundary_residual", boundary_residual},
          {"reciprocity", reciprocity},
          {"soliton_transmission", soliton_transmission},
          {"soliton_reflection", soliton_reflection},
          {"soliton_ode_transparency", soliton_ode_transparency},
          {"delta_ratio_min", delta_ratio_min},
          {"delta_ratio_max", delta_ratio_max},
          {"ite_helmholtz", ite_helmholtz},
          {"ite_point", ite_point},
          {"ite_cauchy", ite_cauchy}};
}

MultipointPotential ExperimentConfig::potential() const {
  if (scatterers.empty()) return MultipointPotential::empty(dimension);
  PotentialOptions options;
  options.allow_complex_alpha = allow_complex_alpha;
  return MultipointPotential(dimension, scatterers, options);
}

ExperimentConfig parse_config(Command command, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.command = command;
  cfg.source = doc;
  if (doc.contains("command")) {
    if (!doc["command"].is_string() || doc["command"].get<std::string>() != command_name(command))
      throw ConfigError("field 'command': does not match the requested command '" + command_name(command) + "'");
  }
  parse_tolerances(doc, cfg);

  const std::set<std::string> common = {"command", "tolerances"};
  auto allowed = [&](std::initializer_list<const char*> extra) {
    std::set<std::string> keys = common;
    keys.insert(extra.begin(), extra.end());
    check_keys(doc, keys);
  };

  switch (command) {
    case Command::Amplitude:
    case Command::Soperator:
    case Command::Kernel: {
      allowed({"dimension", "scatterers", "experimental_complex_alpha", "energy", "energies", "energy_sweep", "quadrature",
               "dump_basis"});
      parse_potential(doc, cfg, true);
      parse_energies(doc, cfg);
      cfg.quadrature = doc.contains("quadrature") ? as_count(doc["quadrature"], "quadrature") : default_quadrature(cfg.dimension);
      if (command != Command::Amplitude) {
        try {
          (void)build_quadrature(cfg.dimension, cfg.quadrature);
        } catch (const PreconditionError& e) {
          throw ConfigError(std::string("field 'quadrature': ") + e.what());
        }
      } else if (cfg.dimension > 1 && cfg.quadrature < 2) {
        throw ConfigError("field 'quadrature': need at least 2 directions");
      }
      if (doc.contains("dump_basis")) {
        if (command != Command::Kernel) throw ConfigError("field 'dump_basis': only valid for the kernel command");
        if (!doc["dump_basis"].is_boolean()) throw ConfigError("field 'dump_basis': expected true or false");
        cfg.dump_basis = doc["dump_basis"].get<bool>();
      }
      break;
    }
    case Command::Soliton: {
      allowed({"kappas", "normings", "k_sweep"});
      cfg.kappas = as_number_list(require(doc, "kappas"), "kappas");
      if (doc.contains("normings")) cfg.normings = as_number_list(doc["normings"], "normings");
      if (doc.contains("k_sweep")) {
        cfg.k_sweep = as_number_list(doc["k_sweep"], "k_sweep");
      } else {
        for (int i = 0; i < 50; ++i) cfg.k_sweep.push_back(0.1 * std::pow(100.0, i / 49.0));
      }
      for (double k : cfg.k_sweep)
        if (!(k > 0.0)) throw ConfigError("field 'k_sweep': wave numbers must be positive");
      try {
        (void)soliton::SolitonSpectrum(cfg.kappas, cfg.normings);
      } catch (const PreconditionError& e) {
        throw ConfigError(std::string("field 'kappas': ") + e.what());
      }
      break;
    }
    case Command::DeltaLimit: {
      allowed({"alphas", "well_sizes"});
      cfg.alphas = doc.contains("alphas") ? as_number_list(doc["alphas"], "alphas") : std::vector<double>{0.5, 1.0, 2.0};
      for (double a : cfg.alphas)
        if (a == 0.0) throw ConfigError("field 'alphas': alpha must be non-zero");
      if (doc.contains("well_sizes")) {
        const json& w = doc["well_sizes"];
        if (!w.is_array()) throw ConfigError("field 'well_sizes': expected a list of integers");
        for (std::size_t i = 0; i < w.size(); ++i) cfg.well_sizes.push_back(static_cast<int>(as_integer(w[i], "well_sizes[" + std::to_string(i) + "]")));
      } else {
        cfg.well_sizes = {100, 200};
      }
      for (std::size_t i = 0; i < cfg.well_sizes.size(); ++i) {
        if (cfg.well_sizes[i] < 10) throw ConfigError("field 'well_sizes': N must be at least 10");
        if (i > 0 && cfg.well_sizes[i] != 2 * cfg.well_sizes[i - 1])
          throw ConfigError("field 'well_sizes': each N must double the previous one");
      }
      break;
    }
    case Command::Ite: {
      allowed({"dimension", "scatterers", "complex_energies", "direction_counts"});
      parse_potential(doc, cfg, false);
      if (cfg.scatterers.empty()) throw ConfigError("field 'scatterers': needs at least one point");
      if (cfg.dimension == 1) throw ConfigError("field 'dimension': ite needs dimension 2 or 3");
      if (doc.contains("complex_energies")) {
        const json& list = doc["complex_energies"];
        if (!list.is_array()) throw ConfigError("field 'complex_energies': expected a list");
        for (std::size_t i = 0; i < list.size(); ++i) {
          const Complex e = as_complex(list[i], "complex_energies[" + std::to_string(i) + "]");
          if (e == 0.0) throw ConfigError("field 'complex_energies': energy must be non-zero");
          cfg.complex_energies.push_back(e);
        }
      } else {
        cfg.complex_energies = {Complex(1.0, 0.0), Complex(1.0, 0.5)};
      }
      if (doc.contains("direction_counts")) {
        const json& list = doc["direction_counts"];
        if (!list.is_array()) throw ConfigError("field 'direction_counts': expected a list");
        for (std::size_t i = 0; i < list.size(); ++i)
          cfg.direction_counts.push_back(as_count(list[i], "direction_counts[" + std::to_string(i) + "]"));
      } else {
        cfg.direction_counts = {8, 16, 32, 64};
      }
      for (std::size_t m : cfg.direction_counts)
        if (m <= cfg.scatterers.size()) throw ConfigError("field 'direction_counts': each M must exceed the number of points");
      break;
    }
    case Command::BoxBound: {
      allowed({"box_energies", "points_per_trial", "trials", "seed"});
      if (doc.contains("box_energies")) {
        const json& list = doc["box_energies"];
        if (!list.is_array()) throw ConfigError("field 'box_energies': expected a list of integers");
        for (std::size_t i = 0; i < list.size(); ++i) {
          const long long e = as_integer(list[i], "box_energies[" + std::to_string(i) + "]");
          if (e < 1) throw ConfigError("field 'box_energies': energies must be positive integers");
          cfg.box_energies.push_back(e);
        }
      } else {
        cfg.box_energies = {50, 325};
      }
      if (doc.contains("points_per_trial")) {
        const json& list = doc["points_per_trial"];
        if (!list.is_array()) throw ConfigError("field 'points_per_trial': expected a list of integers");
        for (std::size_t i = 0; i < list.size(); ++i)
          cfg.points_per_trial.push_back(as_count(list[i], "points_per_trial[" + std::to_string(i) + "]"));
      } else {
        cfg.points_per_trial = {1, 2};
      }
      if (doc.contains("trials")) cfg.trials = as_count(doc["trials"], "trials");
      if (doc.contains("seed")) cfg.seed = static_cast<unsigned long long>(as_integer(doc["seed"], "seed"));
      break;
    }
  }
  return cfg;
}

ExperimentConfig load_config(Command command, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError(path + ":" + std::to_string(line) + ": syntax error: " + e.what());
  }
  return parse_config(command, doc);
}

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  Runner runner(config, options);
  switch (config.command) {
    case Command::Amplitude:
      return run_amplitude(runner);
    case Command::Soperator:
      return run_soperator(runner);
    case Command::Kernel:
      return run_kernel(runner);
    case Command::Soliton:
      return run_soliton(runner);
    case Command::DeltaLimit:
      return run_delta_limit(runner);
    case Command::Ite:
      return run_ite(runner);
    case Command::BoxBound:
      return run_box_bound(runner);
  }
  return {};
}

std::string config_hash(const json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace pscat::experiment
