// misspec: simulation lab for parameter estimation under misspecified
// regularity: pseudo-MLE / Bayes / trajectory-fitting estimators, KL scans,
// argmax limit-law sampling, and Monte Carlo rate verification.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "misspec/errors.hpp"
#include "misspec/experiments.hpp"
#include "misspec/limit_laws.hpp"
#include "misspec/textio.hpp"

namespace {

using namespace misspec;

constexpr int kExitTargetFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;

std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
  if (const char* env = std::getenv("MISSPEC_OUT"); env && *env) return env;
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  return ".";
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidSpecError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<double> parse_ladder(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw InvalidSpecError("empty --ladder list");
  return out;
}

struct RunOptions {
  std::string preset_name;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string ladder_csv;
  int replications = -1;
  std::int64_t grid_n = -1;
  std::string estimators_csv;
  int threads = 0;
  bool emit_paths = false;
  bool dump_config = false;
};

RunConfig resolve_config(const RunOptions& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) {
    cfg = config_from_json(read_file(opt.config_path));
  } else if (!opt.preset_name.empty()) {
    cfg.scenario = preset(opt.preset_name);
  } else {
    throw InvalidSpecError("choose a scenario with --preset or --config");
  }
  Scenario& s = cfg.scenario;
  if (opt.seed_set) s.master_seed = opt.seed;
  if (!opt.ladder_csv.empty()) s.ladder = parse_ladder(opt.ladder_csv);
  if (opt.replications >= 0) s.replications = opt.replications;
  if (opt.grid_n > 0) s.base_steps = opt.grid_n;
  if (!opt.estimators_csv.empty()) {
    s.estimators = EstimatorSet{false, false, false};
    std::stringstream ss(opt.estimators_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "mle") s.estimators.mle = true;
      else if (item == "bayes") s.estimators.bayes = true;
      else if (item == "tfe") s.estimators.tfe = true;
      else throw InvalidSpecError("unknown estimator: " + item);
    }
  }
  if (opt.emit_paths) cfg.emit_paths = true;
  if (opt.threads > 0) cfg.threads = opt.threads;
  cfg.output_dir = resolve_out_dir(opt.out_dir, cfg.output_dir);
  return cfg;
}

int cmd_run(const RunOptions& opt) {
  const RunConfig cfg = resolve_config(opt);
  const Scenario& s = cfg.scenario;
  std::filesystem::create_directories(cfg.output_dir);

  if (opt.dump_config)
    write_file(cfg.output_dir + "/config.json", config_to_json(cfg));

  const int threads = resolve_threads(cfg.threads);
  const auto run = run_scenario(s, threads);
  const McReport& rep = run.report;

  write_file(cfg.output_dir + "/report.json", report_to_json(rep));
  write_file(cfg.output_dir + "/estimates.csv", records_to_csv(run.records));
  if (cfg.emit_paths)
    for (std::size_t rung = 0; rung < s.ladder.size(); ++rung)
      write_file(cfg.output_dir + "/path_rung" + std::to_string(rung) + ".csv",
                 path_to_csv(scenario_path(s, rung, 0)));

  std::printf("scenario %s  regime %s  theta_hat=%.6f  (theta0=%.6f)\n", rep.scenario.c_str(),
              rep.regime.c_str(), rep.theta_hat, rep.theta0);
  for (const auto& rung : rep.rungs)
    std::printf("  eps=%-8g n=%-7lld med|err|=%-12.6g boundary=%.2f%%%s\n", rung.eps,
                (long long)rung.grid_steps, rung.median_abs_err, 100.0 * rung.boundary_frac,
                rung.unreliable ? "  [unreliable-rung]" : "");
  if (rep.slope)
    std::printf("  slope=%.4f (stderr %.4f), theory %.4f\n", *rep.slope,
                rep.slope_stderr.value_or(0.0), rep.rate_exp);
  if (rep.ks_stat)
    std::printf("  ks=%.4f vs %s (n=%zu/%zu)\n", *rep.ks_stat, rep.ks_reference.c_str(),
                rep.ks_sample, rep.ks_reference_n);
  for (const auto& t : rep.targets)
    std::printf("  target %-12s %-10.4g %-10s %s%s\n", t.name.c_str(), t.value,
                t.constraint.c_str(), t.pass ? "pass" : "FAIL", t.gated ? "" : " (not gated)");
  if (!rep.gating_enabled) std::printf("  low-N: targets not evaluated\n");
  std::printf("  wall %.1fs, outputs in %s\n", rep.wall_seconds, cfg.output_dir.c_str());
  return rep.all_pass ? 0 : kExitTargetFail;
}

int cmd_presets() {
  for (const auto& name : preset_names())
    std::printf("%-24s %s\n", name.c_str(), preset_summary(name).c_str());
  return 0;
}

struct LimitSampleOptions {
  std::string law = "quadratic";
  double delta = 1.0, gamma = 1.0, kappa = 1.0;
  double trunc_u = 0.0, eta = 0.0;
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  std::string out_dir;
  int threads = 0;
};

int cmd_limit_sample(const LimitSampleOptions& opt) {
  ArgmaxLawSpec law;
  if (opt.law == "quadratic") law = ArgmaxLawSpec::quadratic(opt.delta, opt.gamma);
  else if (opt.law == "power") law = ArgmaxLawSpec::power(opt.kappa);
  else if (opt.law == "linear-cp") law = ArgmaxLawSpec::linear_cp(opt.delta);
  else throw InvalidSpecError("unknown law kind: " + opt.law);
  if (opt.trunc_u > 0.0) law.trunc_u = opt.trunc_u;
  if (opt.eta > 0.0) law.lattice_eta = opt.eta;
  law.validate();

  const auto sample =
      sample_argmax(law, opt.seed, opt.count, resolve_threads(opt.threads));
  const std::string dir = resolve_out_dir(opt.out_dir, "");
  std::filesystem::create_directories(dir);
  write_file(dir + "/samples.csv", samples_to_csv(sample.values));
  std::printf("%s: %zu samples, truncation-hit rate %.4f%% (U=%g, eta=%g)\n",
              law.describe().c_str(), sample.values.size(), 100.0 * sample.hit_rate(),
              law.trunc_u, law.lattice_eta);
  std::printf("samples.csv written to %s\n", dir.c_str());
  return 0;
}

struct KlScanOptions {
  std::string preset_name;
  std::string config_path;
  std::string out_dir;
  double theta0 = std::nan("");
};

int cmd_kl_scan(const KlScanOptions& opt) {
  Scenario s;
  if (!opt.config_path.empty()) s = config_from_json(read_file(opt.config_path)).scenario;
  else if (!opt.preset_name.empty()) s = preset(opt.preset_name);
  else throw InvalidSpecError("choose a scenario with --preset or --config");
  if (!std::isnan(opt.theta0)) s.theta0 = opt.theta0;

  const auto window = ParamWindow::make(s.window.lo, s.window.hi, s.horizon);
  const TimeGrid grid = s.grid_for(0.0);

  try {
    const auto prof = build_profile(s.assumed, s.truth, s.theta0, window, grid);
    const std::string dir = resolve_out_dir(opt.out_dir, "");
    std::filesystem::create_directories(dir);
    write_file(dir + "/phi_scan.csv", scan_to_csv(prof.thetas, prof.phis));
    std::printf("theta_hat=%.10f  phi(theta_hat)=%.10g\n", prof.theta_hat, prof.phi_hat);
    const char* regime_label =
        s.regime.kind == RegimeTag::Kind::kCuspVsSmooth
            ? "cusp: limit law out of scope"
            : (prof.curvature_quadratic ? "quadratic" : "non-quadratic");
    std::printf("curvature=%.6g  regime=%s\n", prof.curvature, regime_label);
    if (prof.mm_residual)
      std::printf("necessary-condition residual=%.3e\n", *prof.mm_residual);
    std::printf("minorant kappa=%.6g\n", prof.kappa_minorant);
    std::printf("phi_scan.csv written to %s\n", dir.c_str());
    return 0;
  } catch (const BoundaryMinimizerError& e) {
    std::fprintf(stderr, "regime: boundary-minimizer (%s)\n", e.what());
    return kExitNumeric;
  } catch (const NonUniqueMinimizerError& e) {
    std::fprintf(stderr, "regime: non-unique-minimizer (%s)\n", e.what());
    return kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"small-noise estimation lab for misspecified regularity"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "run a Monte Carlo scenario");
  run->add_option("--preset", run_opt.preset_name, "preset scenario name");
  run->add_option("--config", run_opt.config_path, "scenario config file (JSON)");
  run->add_option("--out", run_opt.out_dir, "output directory");
  run->add_option("--seed", run_opt.seed, "master seed")->each([&](const std::string&) {
    run_opt.seed_set = true;
  });
  run->add_option("--ladder", run_opt.ladder_csv, "comma-separated eps ladder override");
  run->add_option("--N", run_opt.replications, "replications per rung override");
  run->add_option("--grid-n", run_opt.grid_n, "base grid steps override");
  run->add_option("--estimators", run_opt.estimators_csv, "subset of mle,bayes,tfe");
  run->add_option("--threads", run_opt.threads, "worker threads (0 = hardware)");
  run->add_flag("--emit-paths", run_opt.emit_paths, "dump replication-0 path per rung");
  run->add_flag("--dump-config", run_opt.dump_config, "write resolved config.json");

  auto* presets_cmd = app.add_subcommand("presets", "list preset scenarios");

  LimitSampleOptions ls_opt;
  auto* ls = app.add_subcommand("limit-sample", "sample an argmax limit law");
  ls->add_option("--law", ls_opt.law, "quadratic | power | linear-cp");
  ls->add_option("--delta", ls_opt.delta, "noise coefficient delta");
  ls->add_option("--gamma", ls_opt.gamma, "quadratic drift coefficient gamma");
  ls->add_option("--kappa", ls_opt.kappa, "power-law exponent (kappa > 1/2)");
  ls->add_option("--trunc-u", ls_opt.trunc_u, "override truncation U");
  ls->add_option("--eta", ls_opt.eta, "override lattice step");
  ls->add_option("--count", ls_opt.count, "sample count");
  ls->add_option("--seed", ls_opt.seed, "master seed");
  ls->add_option("--out", ls_opt.out_dir, "output directory");
  ls->add_option("--threads", ls_opt.threads, "worker threads");

  KlScanOptions kl_opt;
  auto* kl = app.add_subcommand("kl-scan", "tabulate Phi and report its minimizer");
  kl->add_option("--preset", kl_opt.preset_name, "preset scenario name");
  kl->add_option("--config", kl_opt.config_path, "scenario config file (JSON)");
  kl->add_option("--theta0", kl_opt.theta0, "override the true parameter");
  kl->add_option("--out", kl_opt.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitParse;
  }

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (presets_cmd->parsed()) return cmd_presets();
    if (ls->parsed()) return cmd_limit_sample(ls_opt);
    if (kl->parsed()) return cmd_kl_scan(kl_opt);
  } catch (const UnknownNameError& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
    std::fprintf(stderr, "available presets:\n");
    for (const auto& name : preset_names()) std::fprintf(stderr, "  %s\n", name.c_str());
    return kExitParse;
  } catch (const InvalidSpecError& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
    return kExitParse;
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return 0;
}
