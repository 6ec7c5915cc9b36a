#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "entlab/clifford.hpp"
#include "entlab/config.hpp"
#include "entlab/errors.hpp"
#include "entlab/scan.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int run_command(const std::string& config_path, const std::string& out_dir) {
  entlab::ExperimentConfig cfg;
  try {
    cfg = entlab::load_config(config_path);
    if (!out_dir.empty()) cfg.out_directory = out_dir;
    entlab::validate_experiment(cfg);
  } catch (const entlab::Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  try {
    const entlab::ScanReport report = entlab::run_scan(cfg);
    const std::string dir = cfg.out_directory;
    if (cfg.write_csv) {
      const std::string path = dir + "/scan.csv";
      entlab::write_text_atomic(path, entlab::render_csv(report, cfg));
      std::printf("wrote %s\n", path.c_str());
    }
    if (cfg.write_json) {
      const std::string path = dir + "/summary.json";
      entlab::write_text_atomic(path, entlab::render_summary_json(report, cfg));
      std::printf("wrote %s\n", path.c_str());
    }
    std::printf("M = %.6g, predicted decay rate M/2 = %.6g\n", report.mass_gap,
                report.predicted_rate);
    for (const entlab::FittedRate& fr : report.fitted)
      std::printf("fitted %s: slope = %.6g, r2 = %.6g\n", fr.observable.c_str(),
                  fr.fit.slope, fr.fit.r_squared);
    std::printf("done in %.3g s\n", report.total_seconds);
    return 0;
  } catch (const entlab::Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}

int validate_command(const std::string& config_path) {
  try {
    const entlab::ExperimentConfig cfg = entlab::load_config(config_path);
    const entlab::PreflightReport pre = entlab::validate_experiment(cfg);
    std::printf("config ok\n");
    std::printf("total matrix size: %ld\n", pre.matrix_size);
    std::printf("effective mass M: %.12g\n", pre.mass_gap);
    std::printf("predicted decay rate M/2: %.12g\n", pre.predicted_rate);
    return 0;
  } catch (const entlab::Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
}

int gamma_table_command(const std::vector<int>& dims) {
  std::printf("%4s %8s %9s %9s %5s\n", "D", "spinor", "epsilon", "T", "T^2");
  for (int d : dims) {
    try {
      const auto rows = entlab::gamma_table({d});
      for (const auto& row : rows) {
        const std::string t2 =
            row.t_squared ? (*row.t_squared > 0 ? "+1" : "-1") : "-";
        std::printf("%4d %8d %+9d %9s %5s\n", row.dimension, row.spinor_size,
                    row.epsilon, row.t_exists ? "yes" : "no", t2.c_str());
      }
    } catch (const entlab::Error&) {
      std::printf("%4d %8s %9s %9s %5s\n", d, "-", "-", "no", "-");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("ENTLAB_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"finite-torus laboratory for fermionic correlation decay"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<int> dims;

  CLI::App* run = app.add_subcommand("run", "run a separation scan");
  run->add_option("--config", config_path, "JSON experiment description")
      ->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");

  CLI::App* validate =
      app.add_subcommand("validate", "check a config and print derived sizes");
  validate->add_option("--config", config_path, "JSON experiment description")
      ->required();

  CLI::App* table = app.add_subcommand(
      "gamma-table", "conjugation and time-reversal data per dimension");
  table->add_option("--dims", dims, "spacetime dimensions, comma separated")
      ->required()
      ->delimiter(',');

  CLI::App* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) return run_command(config_path, out_dir);
  if (validate->parsed()) return validate_command(config_path);
  if (table->parsed()) return gamma_table_command(dims);
  if (version->parsed()) {
    std::printf("entlab %s\n", kVersion);
    return 0;
  }
  return 2;
}
