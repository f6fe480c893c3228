// Command-line contract checks: exit codes, output files, overrides.
// Run with the CLI binary path as argv[1].

#include <sys/wait.h>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_fail = 0;

void expect(const std::string& what, bool ok) {
  std::printf("[cli] %-68s %s\n", what.c_str(), ok ? "ok" : "FAIL");
  if (!ok) ++g_fail;
  std::fflush(stdout);
}

struct Result {
  int exit_code = -1;
  std::string out;
};

Result run_cmd(const std::string& cmd) {
  const fs::path tmp = fs::temp_directory_path() / "misspec_cli_out.txt";
  const int raw = std::system((cmd + " >" + tmp.string() + " 2>&1").c_str());
  Result r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream f(tmp);
  std::ostringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <misspec-cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path base = fs::temp_directory_path() / "misspec_cli_tests";
  fs::remove_all(base);
  fs::create_directories(base);

  {
    const auto r = run_cmd(cli + " presets");
    expect("presets lists the catalogue, exit 0",
           r.exit_code == 0 && r.out.find("example1") != std::string::npos &&
               r.out.find("cusp-kl-scan") != std::string::npos);
  }
  {
    const auto r = run_cmd(cli + " run --preset no-such-preset --out " + (base / "x").string());
    expect("unknown preset exits 2 and lists presets",
           r.exit_code == 2 && r.out.find("example2") != std::string::npos);
  }
  {
    const auto r = run_cmd(cli + " run --preset example1 --N 10 --ladder 0.2,0.1,0.05 " +
                           "--grid-n 1024 --threads 2 --out " + (base / "lown").string());
    expect("low-N run exits 0 with targets-not-evaluated note",
           r.exit_code == 0 && r.out.find("low-N: targets not evaluated") != std::string::npos);
  }
  {
    const auto r = run_cmd(cli + " run --preset example2 --seed 42 --threads 2 --out " +
                           (base / "ex2").string());
    const std::string rep = slurp(base / "ex2" / "report.json");
    const auto pos = rep.find("\"slope\":");
    double slope = 0.0;
    if (pos != std::string::npos) slope = std::atof(rep.c_str() + pos + 8);
    expect("example2 default run exits 0 with slope about 1",
           r.exit_code == 0 && std::abs(slope - 1.0) < 0.1);
    const std::string csv = slurp(base / "ex2" / "estimates.csv");
    expect("estimates.csv carries the fixed header",
           csv.rfind("rep,eps,theta_mle,theta_bayes,theta_tfe,loglr,boundary_flag\n", 0) == 0);
    bool sci = false;  // digit 'e' [+-]? digit means scientific notation leaked out
    for (std::size_t i = 1; i + 1 < rep.size(); ++i)
      if (rep[i] == 'e' && std::isdigit(rep[i - 1]) &&
          (std::isdigit(rep[i + 1]) || rep[i + 1] == '+' || rep[i + 1] == '-'))
        sci = true;
    expect("report.json uses plain decimal floats", !rep.empty() && !sci);
  }
  {
    // resolved-config round trip reproduces the identical report
    const auto r1 = run_cmd(cli + " run --preset disc-vs-disc --N 40 --ladder 0.2,0.1 " +
                            "--grid-n 1024 --threads 2 --dump-config --out " +
                            (base / "rt1").string());
    const auto r2 = run_cmd(cli + " run --config " + (base / "rt1" / "config.json").string() +
                            " --out " + (base / "rt2").string());
    expect("config round trip gives a byte-identical report",
           r1.exit_code == 0 && r2.exit_code == 0 &&
               slurp(base / "rt1" / "report.json") == slurp(base / "rt2" / "report.json"));
  }
  {
    const auto r = run_cmd(cli + " limit-sample --law power --kappa 0.4 --count 100 --out " +
                           (base / "bad").string());
    expect("power law with kappa <= 1/2 is an invalid-spec error, exit 2",
           r.exit_code == 2 && r.out.find("invalid-spec") != std::string::npos);
  }
  {
    const auto r = run_cmd(cli +
                           " limit-sample --law quadratic --delta 1 --gamma 1 --count 1000 "
                           "--seed 7 --threads 2 --out " +
                           (base / "ls").string());
    std::ifstream f(base / "ls" / "samples.csv");
    std::size_t lines = 0;
    std::string line;
    while (std::getline(f, line)) ++lines;
    expect("limit-sample writes header plus one row per sample",
           r.exit_code == 0 && lines == 1001 &&
               r.out.find("truncation-hit rate") != std::string::npos);
  }
  {
    const auto r = run_cmd(cli +
                           " limit-sample --law linear-cp --delta 1 --count 100000 "
                           "--seed 11 --threads 2 --out " +
                           (base / "lcp").string());
    expect("linear-cp at N=1e5 keeps the truncation-hit rate under 0.1%",
           r.exit_code == 0 && r.out.find("truncation-hit rate 0.0") != std::string::npos);
  }
  {
    // boundary-minimizer scenario surfaces the regime with exit 3
    std::ofstream cfg(base / "boundary.json");
    cfg << R"({"scenario":{"name":"bnd","horizon":1.0,"base_steps":4096,
      "truth":{"family":"linear-drift"},"theta0":0.45,
      "assumed":{"family":"step-hg","h":[1.0,0.0],"g":[-1.0,0.0]},
      "window":{"lo":0.1,"hi":0.9},"ladder":[0.1],"replications":10,"seed":1,
      "regime":{"kind":"disc-vs-smooth"}}})";
    cfg.close();
    const auto r = run_cmd(cli + " kl-scan --config " + (base / "boundary.json").string() +
                           " --out " + (base / "bout").string());
    expect("kl-scan reports the boundary-minimizer regime with exit 3",
           r.exit_code == 3 && r.out.find("boundary-minimizer") != std::string::npos);
  }
  {
    const auto r = run_cmd(cli + " kl-scan --preset cusp-kl-scan --out " + (base / "cusp").string());
    expect("cusp scan completes with the out-of-scope regime label",
           r.exit_code == 0 && r.out.find("cusp: limit law out of scope") != std::string::npos &&
               !slurp(base / "cusp" / "phi_scan.csv").empty());
  }
  {
    // MISSPEC_OUT takes precedence over --out
    const auto r = run_cmd("MISSPEC_OUT=" + (base / "env").string() + " " + cli +
                           " run --preset example1 --N 5 --ladder 0.2 --grid-n 512 --out " +
                           (base / "flag").string());
    expect("MISSPEC_OUT env var overrides the output directory",
           r.exit_code == 0 && fs::exists(base / "env" / "report.json") &&
               !fs::exists(base / "flag" / "report.json"));
  }
  {
    const auto r = run_cmd(cli + " run --preset example1 --N 5 --ladder 0.2 --grid-n 512 " +
                           "--emit-paths --out " + (base / "paths").string());
    const std::string dump = slurp(base / "paths" / "path_rung0.csv");
    bool sci = false;
    for (std::size_t i = 1; i + 1 < dump.size(); ++i)
      if (dump[i] == 'e' && std::isdigit(dump[i - 1]) &&
          (std::isdigit(dump[i + 1]) || dump[i + 1] == '+' || dump[i + 1] == '-'))
        sci = true;
    expect("--emit-paths writes the replication-0 trajectory",
           r.exit_code == 0 && dump.rfind("t,X\n", 0) == 0 && !sci);
  }

  std::printf("cli contract: %s (%d failure%s)\n", g_fail == 0 ? "ALL OK" : "FAILURES", g_fail,
              g_fail == 1 ? "" : "s");
  return g_fail == 0 ? 0 : 1;
}
