// spincorr: event-by-event EPR-Bohm correlation simulator and verifier.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spincorr/driver.hpp"
#include "spincorr/kernels.hpp"
#include "spincorr/report.hpp"
#include "spincorr/trial_log.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open output file '" + out_path + "'");
  }
  out << text;
  if (!out) {
    throw std::runtime_error("failed writing output file '" + out_path + "'");
  }
}

void apply_backend(const std::string& name) {
  if (name == "auto") {
    spincorr::kernels::set_backend(nullptr);
    return;
  }
  if (name == "scalar") {
    spincorr::kernels::set_backend(&spincorr::kernels::scalar_backend());
    return;
  }
  if (name == "avx2") {
    const auto* b = spincorr::kernels::avx2_backend();
    if (b == nullptr) {
      throw std::invalid_argument("avx2 backend is not available on this machine");
    }
    spincorr::kernels::set_backend(b);
    return;
  }
  throw std::invalid_argument("unknown backend '" + name +
                              "' (expected auto, scalar, or avx2)");
}

struct CommonOptions {
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  std::string angles;
  std::string a, a_prime, b, b_prime;
  std::string pipelines = "standard,raw-sign,raw-lambda";
  std::string format = "csv";
  std::string out;
  int workers = 1;
  std::string backend = "auto";
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_quad) {
  cmd->add_option("--trials", opt.trials, "number of trials n");
  cmd->add_option("--seed", opt.seed, "64-bit experiment seed");
  cmd->add_option("--workers", opt.workers, "worker thread count");
  cmd->add_option("--format", opt.format, "output format: csv or json");
  cmd->add_option("--out", opt.out, "output path (default stdout)");
  cmd->add_option("--backend", opt.backend, "kernel backend: auto, scalar, avx2");
  cmd->add_option("--a", opt.a, "direction a (degrees or x,y,z)");
  cmd->add_option("--b", opt.b, "direction b (degrees or x,y,z)");
  if (with_quad) {
    cmd->add_option("--a-prime", opt.a_prime, "direction a' (degrees or x,y,z)");
    cmd->add_option("--b-prime", opt.b_prime, "direction b' (degrees or x,y,z)");
  }
}

spincorr::ExperimentConfig make_config(const CommonOptions& opt) {
  spincorr::ExperimentConfig config;
  config.trials = opt.trials;
  config.seed = opt.seed;
  config.workers = opt.workers;
  config.pipelines = spincorr::parse_pipelines(opt.pipelines);
  if (!opt.angles.empty()) config.sweep = spincorr::parse_angle_sweep(opt.angles);
  if (!opt.a.empty()) config.a = spincorr::parse_direction(opt.a);
  if (!opt.b.empty()) config.b = spincorr::parse_direction(opt.b);
  config.validate();
  return config;
}

std::string rows_output(const std::vector<spincorr::ReportRow>& rows,
                        const std::string& format) {
  return spincorr::parse_format(format) == spincorr::OutputFormat::csv
             ? spincorr::rows_to_csv(rows)
             : spincorr::rows_to_json(rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-by-event EPR-Bohm correlation simulator"};
  app.require_subcommand(1);

  CommonOptions sim_opt;
  CLI::App* sim = app.add_subcommand("simulate", "run trials and report correlations");
  sim->add_option("--angles", sim_opt.angles, "sweep START:STOP:STEP degrees");
  sim->add_option("--pipelines", sim_opt.pipelines,
                  "comma-separated: standard,raw-sign,raw-lambda");
  add_common_flags(sim, sim_opt, false);

  CommonOptions rec_opt;
  CLI::App* rec = app.add_subcommand("record", "write a binary trial log");
  rec->add_option("--trials", rec_opt.trials, "number of trials n");
  rec->add_option("--seed", rec_opt.seed, "64-bit experiment seed");
  rec->add_option("--workers", rec_opt.workers, "worker thread count");
  rec->add_option("--backend", rec_opt.backend, "kernel backend: auto, scalar, avx2");
  rec->add_option("--out", rec_opt.out, "trial log path")->required();

  CommonOptions ana_opt;
  std::string ana_log;
  CLI::App* ana = app.add_subcommand("analyze", "score a recorded trial log");
  ana->add_option("--log", ana_log, "trial log path")->required();
  ana->add_option("--angles", ana_opt.angles, "sweep START:STOP:STEP degrees");
  ana->add_option("--pipelines", ana_opt.pipelines,
                  "comma-separated: standard,raw-sign,raw-lambda");
  add_common_flags(ana, ana_opt, false);

  CommonOptions chsh_opt;
  bool strict_sampling = false;
  CLI::App* chsh = app.add_subcommand("chsh", "four-setting CHSH run");
  add_common_flags(chsh, chsh_opt, true);
  chsh->add_flag("--strict-sampling", strict_sampling,
                 "independent trial stream per setting pair");

  std::string verify_suite;
  std::int64_t verify_samples = 1000;
  std::uint64_t verify_seed = 0;
  std::string verify_out;
  CLI::App* verify = app.add_subcommand("verify", "run an algebraic verification suite");
  verify->add_option("--suite", verify_suite, "suite name")->required();
  verify->add_option("--samples", verify_samples, "random cases per suite");
  verify->add_option("--seed", verify_seed, "sampling seed");
  verify->add_option("--out", verify_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim->parsed()) {
      apply_backend(sim_opt.backend);
      const auto rows = spincorr::simulate(make_config(sim_opt));
      write_output(rows_output(rows, sim_opt.format), sim_opt.out);
      return kExitOk;
    }
    if (rec->parsed()) {
      apply_backend(rec_opt.backend);
      spincorr::ExperimentConfig config;
      config.trials = rec_opt.trials;
      config.seed = rec_opt.seed;
      config.workers = rec_opt.workers;
      spincorr::record(config, rec_opt.out);
      return kExitOk;
    }
    if (ana->parsed()) {
      apply_backend(ana_opt.backend);
      spincorr::ExperimentConfig config;
      config.workers = ana_opt.workers;
      config.pipelines = spincorr::parse_pipelines(ana_opt.pipelines);
      if (!ana_opt.angles.empty()) config.sweep = spincorr::parse_angle_sweep(ana_opt.angles);
      if (!ana_opt.a.empty()) config.a = spincorr::parse_direction(ana_opt.a);
      if (!ana_opt.b.empty()) config.b = spincorr::parse_direction(ana_opt.b);
      const auto rows = spincorr::analyze(ana_log, config);
      write_output(rows_output(rows, ana_opt.format), ana_opt.out);
      return kExitOk;
    }
    if (chsh->parsed()) {
      apply_backend(chsh_opt.backend);
      spincorr::ChshExperimentConfig config;
      if (chsh_opt.a.empty() || chsh_opt.a_prime.empty() || chsh_opt.b.empty() ||
          chsh_opt.b_prime.empty()) {
        throw std::invalid_argument("chsh requires --a, --a-prime, --b, --b-prime");
      }
      config.a = spincorr::parse_direction(chsh_opt.a);
      config.a_prime = spincorr::parse_direction(chsh_opt.a_prime);
      config.b = spincorr::parse_direction(chsh_opt.b);
      config.b_prime = spincorr::parse_direction(chsh_opt.b_prime);
      config.trials = chsh_opt.trials;
      config.seed = chsh_opt.seed;
      config.workers = chsh_opt.workers;
      config.strict_sampling = strict_sampling;
      const spincorr::ChshReport report = spincorr::chsh_run(config);
      const std::string text =
          spincorr::parse_format(chsh_opt.format) == spincorr::OutputFormat::csv
              ? spincorr::chsh_to_csv(report)
              : spincorr::chsh_to_json(report);
      write_output(text, chsh_opt.out);
      return kExitOk;
    }
    if (verify->parsed()) {
      const spincorr::VerifyReport report =
          spincorr::run_verify_suite(verify_suite, verify_samples, verify_seed);
      write_output(spincorr::verify_to_json(report), verify_out);
      return report.ok() ? kExitOk : kExitVerifyFailure;
    }
  } catch (const spincorr::TrialLogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
