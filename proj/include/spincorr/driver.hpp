#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spincorr/chsh.hpp"
#include "spincorr/report.hpp"
#include "spincorr/vec3.hpp"

namespace spincorr {

enum class Pipeline { standard, raw_sign, raw_lambda };

const char* pipeline_name(Pipeline p);
std::vector<Pipeline> parse_pipelines(const std::string& csv);

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& name);

// "START:STOP:STEP" in degrees, STOP inclusive.
struct AngleSweep {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> angles() const;
};

AngleSweep parse_angle_sweep(const std::string& spec);

// Accepts either a planar angle in degrees ("45") or components ("x,y,z").
Direction parse_direction(const std::string& spec);

struct ExperimentConfig {
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  std::optional<AngleSweep> sweep;
  std::optional<Direction> a;
  std::optional<Direction> b;
  std::vector<Pipeline> pipelines = {Pipeline::standard, Pipeline::raw_sign,
                                     Pipeline::raw_lambda};
  int workers = 1;

  void validate() const;

  // Direction pairs scored against the one shared trial stream: a along +x
  // and b in the xy-plane for sweeps, or the explicit pair.
  struct Setting {
    double theta_deg;
    Vec3 a, b;
  };
  std::vector<Setting> settings() const;
};

std::vector<ReportRow> simulate(const ExperimentConfig& config);

// Writes the trial stream of `config` to a version-1 trial log.
void record(const ExperimentConfig& config, const std::string& path);

// Scores a previously recorded log; bit-identical to simulate() with the
// same seed and settings.
std::vector<ReportRow> analyze(const std::string& log_path,
                               const ExperimentConfig& config);

struct ChshExperimentConfig {
  Direction a = Direction::ex();
  Direction a_prime = Direction::ey();
  Direction b = Direction::ex();
  Direction b_prime = Direction::ey();
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  int workers = 1;
  // One trial normally scores all four settings; strict sampling draws an
  // independent trial stream per setting pair instead.
  bool strict_sampling = false;

  void validate() const;
};

ChshReport chsh_run(const ChshExperimentConfig& config);

// --- verification suites ----------------------------------------------------

struct VerifyFailure {
  std::string case_id;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
};

struct VerifyReport {
  std::string suite;
  std::int64_t cases = 0;
  std::vector<VerifyFailure> failures;

  bool ok() const { return failures.empty(); }
};

inline constexpr const char* kVerifySuites[] = {
    "subalgebra", "bivector-identity", "torsion",
    "appendix-c", "gill-claims",       "sigma",
};

VerifyReport run_verify_suite(const std::string& suite, std::int64_t samples,
                              std::uint64_t seed);

std::string verify_to_json(const VerifyReport& report);

}  // namespace spincorr
