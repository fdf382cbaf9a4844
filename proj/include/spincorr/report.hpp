#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spincorr/vec3.hpp"

namespace spincorr {

inline constexpr int kReportVersion = 1;

// One angle row. A pipeline that was not requested stays disengaged and its
// CSV fields are emitted empty, never as zeros.
struct StandardCell {
  double scalar = 0.0;
  double bivector_norm = 0.0;
  double std_error = 0.0;
};

struct RawSignCell {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t ties = 0;
};

struct RawLambdaCell {
  double estimate = 0.0;
  double std_error = 0.0;
};

struct ReportRow {
  double theta_deg = 0.0;
  std::int64_t n = 0;
  std::optional<StandardCell> standard;
  std::optional<RawSignCell> raw_sign;
  std::optional<RawLambdaCell> raw_lambda;
};

struct ChshReport {
  Vec3 a, a_prime, b, b_prime;
  std::int64_t n = 0;
  bool strict_sampling = false;
  double e_ab = 0.0, e_ab_prime = 0.0, e_a_prime_b = 0.0, e_a_prime_b_prime = 0.0;
  double separate = 0.0;        // CHSH string of the standard scalar correlations
  double single_average = 0.0;  // mean per-trial +/-2 combination of raw signs
  double sign_separate = 0.0;   // CHSH string of the raw-sign estimates
  double variance_lhs = 0.0;
  double variance_rhs = 0.0;
  double variance_rhs_limit = 0.0;
  double cross_dot = 0.0;
  double lambda_mean = 0.0;
  bool variance_bound_holds = false;
  std::int64_t ties = 0;
};

// 17 significant digits everywhere a double is printed.
std::string format_double(double v);

std::string rows_to_csv(std::span<const ReportRow> rows);
std::string rows_to_json(std::span<const ReportRow> rows);

std::string chsh_to_csv(const ChshReport& report);
std::string chsh_to_json(const ChshReport& report);

}  // namespace spincorr
