// nlmh: command-line driver for the nonlocal Model H simulator.
//
// Exit status: 0 success, 2 an asserted window was violated, 1 error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlmh/diagnostics.hpp"
#include "nlmh/dynamics.hpp"
#include "nlmh/error.hpp"
#include "nlmh/experiments.hpp"
#include "nlmh/io.hpp"
#include "nlmh/kernel.hpp"
#include "nlmh/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace nlmh;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWindow = 2;

// Grid used by the eps-sweeping subcommands unless --n or --config is given:
// the smallest power of two keeping eps = 0.05 at least 4 cells wide.
constexpr int kSweepGrid = 512;

struct Common {
  std::string out;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::optional<int> n;
  std::optional<double> dt;
  std::optional<double> t_end;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "output directory")->required();
  sub->add_option("--config", c.config, "JSON config file or run manifest");
  sub->add_option("--seed", c.seed, "override init.seed");
  sub->add_option("--eps", c.eps, "override kernel.epsilon (0 = local model)");
  sub->add_option("--n", c.n, "override grid.n");
  sub->add_option("--dt", c.dt, "override time.dt");
  sub->add_option("--t-end", c.t_end, "override time.t_end");
}

RunConfig load(const Common& c, std::optional<int> default_n = std::nullopt) {
  RunConfig cfg = c.config.empty() ? parse_config_text("") : parse_config(c.config);
  if (c.n)
    cfg.sim.grid = Grid(*c.n);
  else if (default_n && c.config.empty())
    cfg.sim.grid = Grid(*default_n);
  if (c.seed) cfg.init.seed = *c.seed;
  if (c.eps) cfg.sim.epsilon = *c.eps;
  if (c.dt) cfg.sim.dt = *c.dt;
  if (c.t_end) cfg.sim.t_end = *c.t_end;
  try {
    cfg.sim.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, e.what());
  }
  return cfg;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  os << j.dump(2) << '\n';
}

// The manifest is written before any work and rewritten on exit.
struct Manifest {
  fs::path path;
  ordered_json doc;
  bool done = false;

  Manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg)
      : path(dir / "manifest.json") {
    doc["command"] = command;
    doc["code_version"] = NLMH_VERSION;
    doc["formats"] = {{"snapshot", kSnapshotVersion}, {"csv", 1}};
    doc["resolved_config"] = config_to_json(cfg);
    doc["seed"] = cfg.init.seed;
    doc["started_at"] = utc_now();
    doc["finished_at"] = nullptr;
    doc["status"] = "running";
    doc["outputs"] = ordered_json::array();
    write_json(path, doc);
  }
  Manifest(const Manifest&) = delete;
  Manifest& operator=(const Manifest&) = delete;
  ~Manifest() {
    if (done) return;
    try {
      finish("error");
    } catch (...) {
    }
  }
  void output(const fs::path& p) { doc["outputs"].push_back(p.filename().string()); }
  void finish(const std::string& status) {
    doc["finished_at"] = utc_now();
    doc["status"] = status;
    done = true;
    write_json(path, doc);
  }
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "' in list");
    }
  }
  return out;
}

std::string snapshot_name(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "state_%06zu.nlch", step);
  return buf;
}

std::string eps_dir_name(double eps) { return "eps_" + format_real(eps); }

void report_line(bool ok, const std::string& what) {
  std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
}

// ---------------------------------------------------------------- run

int cmd_run(const Common& c, const std::string& restart, std::size_t snapshot_every) {
  const RunConfig cfg = load(c);
  const fs::path dir = prepare_out(c.out);
  Manifest m(dir, "run", cfg);
  m.doc["restart_from"] = restart.empty() ? ordered_json(nullptr) : ordered_json(restart);

  const SimState init = restart.empty() ? make_initial_data(cfg.sim.grid, cfg.init)
                                        : read_snapshot(restart, cfg.sim.grid.n());
  const std::optional<KernelSymbol> K = make_kernel(cfg.sim);
  const KernelSymbol* kp = K ? &*K : nullptr;

  const fs::path diag_path = dir / "diagnostics.csv";
  std::ofstream diag(diag_path, std::ios::trunc);
  if (!diag) throw Error(ErrorCode::IoError, "cannot write " + diag_path.string());
  diag << kDiagnosticsHeader << '\n';
  m.output(diag_path);

  const SimState final_state = run(
      cfg.sim, init,
      [&](const SimState& s, std::size_t step) {
        write_diagnostics_row(diag, record(s, cfg.sim, kp));
        if (snapshot_every > 0 && step % snapshot_every == 0) {
          write_snapshot(s, dir / snapshot_name(step));
          m.output(dir / snapshot_name(step));
        }
      },
      kp);
  diag.close();
  write_snapshot(final_state, dir / "final.nlch");
  m.output(dir / "final.nlch");
  m.finish("ok");
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Common& c, const std::string& eps_list, bool local_replica) {
  const RunConfig cfg = load(c, kSweepGrid);
  const fs::path dir = prepare_out(c.out);
  Manifest m(dir, "sweep", cfg);
  SweepPlan plan;
  plan.eps_list = parse_list(eps_list);
  plan.base_cfg = cfg.sim;
  plan.init = cfg.init;
  plan.local_replica = local_replica;
  m.doc["eps_list"] = plan.eps_list;
  write_json(m.path, m.doc);

  const SweepReport rep = solution_rate_sweep(plan);
  write_sweep_csv(dir, plan.eps_list, rep);
  m.output(dir / "rates.csv");
  m.output(dir / "fit.csv");
  write_diagnostics_csv(dir / "diagnostics.csv", rep.reference.diagnostics);
  m.output(dir / "diagnostics.csv");
  for (std::size_t i = 0; i < plan.eps_list.size(); ++i) {
    const fs::path sub = prepare_out((dir / eps_dir_name(plan.eps_list[i])).string());
    write_diagnostics_csv(sub / "diagnostics.csv", rep.runs[i].diagnostics);
    write_errors_csv(sub / "errors.csv", rep.errors[i]);
  }

  bool ok = true;
  for (std::size_t j = 0; j < kNormCount; ++j) {
    const bool in = rep.fits[j].slope >= 0.75 && rep.fits[j].slope <= 1.25;
    report_line(in, std::string("slope ") + kNormNames[j] + " = " + format_real(rep.fits[j].slope) +
                        " (window [0.75, 1.25])");
    ok = ok && in;
  }
  auto check_run = [&](const RunSummary& s, const std::string& name) {
    const bool good = s.energy_increases == 0 && s.max_mass_drift <= 1e-12 && s.min_separation >= 0.05;
    report_line(good, name + ": energy increases " + std::to_string(s.energy_increases) +
                          ", mass drift " + format_real(s.max_mass_drift) + ", separation " +
                          format_real(s.min_separation));
    ok = ok && good;
  };
  check_run(rep.reference, "local reference");
  for (const RunSummary& s : rep.runs) check_run(s, "eps=" + format_real(s.epsilon));
  m.finish(ok ? "ok" : "window_failed");
  return ok ? kExitOk : kExitWindow;
}

// ---------------------------------------------------------------- operator-test

int cmd_operator(const Common& c, const std::string& eps_list) {
  const RunConfig cfg = load(c, kSweepGrid);
  const fs::path dir = prepare_out(c.out);
  Manifest m(dir, "operator-test", cfg);
  const std::vector<double> eps = parse_list(eps_list);
  const Grid& g = cfg.sim.grid;
  const std::vector<ScalarField> fields = default_operator_fields(g);
  const OperatorRateReport rep = operator_rate_test(g, cfg.sim.kernel_profile, eps, fields);

  std::ofstream os(dir / "operator.csv", std::ios::trunc);
  os << "field,eps,defect,h3_norm\n";
  for (const auto& r : rep.rows)
    os << r.field << ',' << format_real(r.epsilon) << ',' << format_real(r.defect) << ','
       << format_real(r.h3_norm) << '\n';
  os.close();
  std::ofstream fit(dir / "fit.csv", std::ios::trunc);
  fit << "norm,slope,intercept,r2\n";
  fit << "operator_pooled," << format_real(rep.fit.slope) << ',' << format_real(rep.fit.intercept)
      << ',' << format_real(rep.fit.r_squared) << '\n';
  for (std::size_t f = 0; f < rep.per_field.size(); ++f)
    fit << "operator_field" << f << ',' << format_real(rep.per_field[f].slope) << ','
        << format_real(rep.per_field[f].intercept) << ',' << format_real(rep.per_field[f].r_squared)
        << '\n';
  fit.close();
  m.output(dir / "operator.csv");
  m.output(dir / "fit.csv");

  const bool ok = rep.fit.slope >= 0.85 && rep.fit.slope <= 1.15 && rep.fit.r_squared >= 0.99;
  report_line(ok, "pooled slope " + format_real(rep.fit.slope) + ", r2 " +
                      format_real(rep.fit.r_squared) + " (window [0.85, 1.15], r2 >= 0.99)");
  m.finish(ok ? "ok" : "window_failed");
  return ok ? kExitOk : kExitWindow;
}

// ---------------------------------------------------------------- stability-test

int cmd_stability(const Common& c, double d0) {
  const RunConfig cfg = load(c);
  const fs::path dir = prepare_out(c.out);
  Manifest m(dir, "stability-test", cfg);
  m.doc["d0"] = d0;
  write_json(m.path, m.doc);
  const StabilityReport rep = gronwall_stability_test(cfg.sim, cfg.init, cfg.init.seed, d0);

  std::ofstream os(dir / "stability.csv", std::ios::trunc);
  os << "t,distance_sq,distance_sq_half\n";
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    os << format_real(rep.times[i]) << ',' << format_real(rep.distance_sq[i]) << ','
       << format_real(rep.distance_sq_half[i]) << '\n';
  os.close();
  m.output(dir / "stability.csv");

  const bool ratio_ok = rep.halving_ratio >= 1.6 && rep.halving_ratio <= 2.4;
  report_line(ratio_ok, "halving ratio " + format_real(rep.halving_ratio) + " (window [1.6, 2.4])");
  report_line(rep.zero_perturbation_identical, "zero perturbation reproduces the trajectory");
  std::cout << "lambda " << format_real(rep.lambda) << '\n';
  m.doc["lambda"] = rep.lambda;
  m.doc["halving_ratio"] = rep.halving_ratio;
  const bool ok = ratio_ok && rep.zero_perturbation_identical;
  m.finish(ok ? "ok" : "window_failed");
  return ok ? kExitOk : kExitWindow;
}

// ---------------------------------------------------------------- poincare-test

int cmd_poincare(const Common& c, const std::string& eps_list, int samples,
                 std::optional<double> gamma) {
  const RunConfig cfg = load(c, kSweepGrid);
  const fs::path dir = prepare_out(c.out);
  Manifest m(dir, "poincare-test", cfg);
  const double gam = gamma ? *gamma : 1.0 / (2.0 * cfg.sim.potential.theta0);
  const std::vector<double> eps = parse_list(eps_list);
  const PoincareReport rep =
      poincare_sampling_test(cfg.sim.grid, cfg.sim.kernel_profile, eps, samples, gam, cfg.init.seed);

  std::ofstream os(dir / "poincare.csv", std::ios::trunc);
  os << "eps,c_gamma\n";
  for (const auto& r : rep.rows) os << format_real(r.epsilon) << ',' << format_real(r.c_gamma) << '\n';
  os.close();
  m.output(dir / "poincare.csv");

  const bool ok = std::isfinite(rep.spread) && rep.spread <= 10.0;
  report_line(ok, "C_gamma spread " + format_real(rep.spread) + " (at most 10)");
  m.finish(ok ? "ok" : "window_failed");
  return ok ? kExitOk : kExitWindow;
}

// ---------------------------------------------------------------- check-kernel

int cmd_check_kernel(const Common& c) {
  const RunConfig cfg = load(c);
  if (cfg.sim.is_local())
    throw Error(ErrorCode::InvalidArgument, "check-kernel needs eps > 0");
  const fs::path dir = prepare_out(c.out);
  Manifest man(dir, "check-kernel", cfg);
  const Grid& g = cfg.sim.grid;
  const double eps = cfg.sim.epsilon;
  const KernelSymbol K = build_kernel(g, eps, cfg.sim.kernel_profile);
  const double norm = kernel_normalization(g, eps, cfg.sim.kernel_profile);

  std::ostringstream os;
  os << "quantity,value\n";
  os << "n," << g.n() << '\n';
  os << "eps," << format_real(eps) << '\n';
  os << "amplitude," << format_real(K.amplitude()) << '\n';
  os << "j_mass," << format_real(K.j_mass()) << '\n';
  const double target = 2.0 / std::numbers::pi;
  os << "normalization_residual," << format_real(std::abs(norm - target) / target) << '\n';
  os << "min_sigma," << format_real(K.min_sigma()) << '\n';
  os << "\nk1,k2,sigma,k_sq,relative_defect\n";
  for (int m : {1, 2, 4, 8, 16}) {
    if (m >= g.n() / 2) break;
    for (const auto& [k1, k2] : {std::pair{m, 0}, std::pair{m, m}}) {
      const int row = k1;
      const double s = K.sigma_at(row, k2);
      const double kk = static_cast<double>(k1 * k1 + k2 * k2);
      os << k1 << ',' << k2 << ',' << format_real(s) << ',' << format_real(kk) << ','
         << format_real((s - kk) / kk) << '\n';
    }
  }
  std::cout << os.str();
  std::ofstream f(dir / "kernel.csv", std::ios::trunc);
  f << os.str();
  man.output(dir / "kernel.csv");
  man.finish("ok");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral simulator for local and nonlocal Model H on the 2-torus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(NLMH_VERSION));

  Common run_c, sweep_c, op_c, stab_c, poin_c, ker_c;
  std::string restart;
  std::size_t snapshot_every = 0;
  auto* run_cmd = app.add_subcommand("run", "single simulation");
  add_common(run_cmd, run_c);
  run_cmd->add_option("--restart", restart, "continue from a snapshot file");
  run_cmd->add_option("--snapshot-every", snapshot_every,
                      "also write a snapshot at recorded steps divisible by this (0 = final only)");

  std::string sweep_eps = "0.4,0.2,0.1,0.05";
  bool local_replica = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "local reference and eps runs in lockstep");
  add_common(sweep_cmd, sweep_c);
  sweep_cmd->add_option("--eps-list", sweep_eps, "comma separated, decreasing");
  sweep_cmd->add_flag("--local-replica", local_replica, "replace eps runs by local runs");

  std::string op_eps = "0.4,0.2,0.1,0.05";
  auto* op_cmd = app.add_subcommand("operator-test", "rate of the nonlocal operator defect");
  add_common(op_cmd, op_c);
  op_cmd->add_option("--eps-list", op_eps, "comma separated");

  double d0 = 1e-6;
  auto* stab_cmd = app.add_subcommand("stability-test", "perturbation growth and halving");
  add_common(stab_cmd, stab_c);
  stab_cmd->add_option("--d0", d0, "perturbation size");

  std::string poin_eps = "0.2,0.1,0.05";
  int samples = 100;
  std::optional<double> gamma;
  auto* poin_cmd = app.add_subcommand("poincare-test", "sampled Poincare constant across eps");
  add_common(poin_cmd, poin_c);
  poin_cmd->add_option("--eps-list", poin_eps, "comma separated");
  poin_cmd->add_option("--samples", samples, "random fields per eps");
  poin_cmd->add_option("--gamma", gamma, "defaults to 1/(2 theta0)");

  auto* ker_cmd = app.add_subcommand("check-kernel", "kernel amplitude, normalization, symbol");
  add_common(ker_cmd, ker_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*run_cmd) return cmd_run(run_c, restart, snapshot_every);
    if (*sweep_cmd) return cmd_sweep(sweep_c, sweep_eps, local_replica);
    if (*op_cmd) return cmd_operator(op_c, op_eps);
    if (*stab_cmd) return cmd_stability(stab_c, d0);
    if (*poin_cmd) return cmd_poincare(poin_c, poin_eps, samples, gamma);
    if (*ker_cmd) return cmd_check_kernel(ker_c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
