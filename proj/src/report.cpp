#include "spincorr/report.hpp"

#include <cstdio>

namespace spincorr {
namespace {

void append(std::string& out, const std::string& s) { out += s; }

std::string vec_field(const Vec3& v) {
  // Semicolons keep the triple inside one CSV cell.
  return format_double(v.x) + ";" + format_double(v.y) + ";" + format_double(v.z);
}

std::string json_vec(const Vec3& v) {
  return "[" + format_double(v.x) + "," + format_double(v.y) + "," +
         format_double(v.z) + "]";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string rows_to_csv(std::span<const ReportRow> rows) {
  std::string out;
  out += "# spincorr report v" + std::to_string(kReportVersion) + "\n";
  out +=
      "theta_deg,n,standard_scalar,standard_bivector_norm,standard_stderr,"
      "raw_sign_estimate,raw_sign_stderr,raw_sign_ties,"
      "raw_lambda_estimate,raw_lambda_stderr\n";
  for (const auto& row : rows) {
    append(out, format_double(row.theta_deg));
    out += "," + std::to_string(row.n);
    if (row.standard) {
      out += "," + format_double(row.standard->scalar);
      out += "," + format_double(row.standard->bivector_norm);
      out += "," + format_double(row.standard->std_error);
    } else {
      out += ",,,";
    }
    if (row.raw_sign) {
      out += "," + format_double(row.raw_sign->estimate);
      out += "," + format_double(row.raw_sign->std_error);
      out += "," + std::to_string(row.raw_sign->ties);
    } else {
      out += ",,,";
    }
    if (row.raw_lambda) {
      out += "," + format_double(row.raw_lambda->estimate);
      out += "," + format_double(row.raw_lambda->std_error);
    } else {
      out += ",,";
    }
    out += "\n";
  }
  return out;
}

std::string rows_to_json(std::span<const ReportRow> rows) {
  std::string out = "{\"report_version\":" + std::to_string(kReportVersion) +
                    ",\"rows\":[";
  bool first_row = true;
  for (const auto& row : rows) {
    if (!first_row) out += ",";
    first_row = false;
    out += "{\"theta_deg\":" + format_double(row.theta_deg);
    out += ",\"n\":" + std::to_string(row.n);
    out += ",\"standard\":";
    if (row.standard) {
      out += "{\"scalar\":" + format_double(row.standard->scalar);
      out += ",\"bivector_norm\":" + format_double(row.standard->bivector_norm);
      out += ",\"stderr\":" + format_double(row.standard->std_error) + "}";
    } else {
      out += "null";
    }
    out += ",\"raw_sign\":";
    if (row.raw_sign) {
      out += "{\"estimate\":" + format_double(row.raw_sign->estimate);
      out += ",\"stderr\":" + format_double(row.raw_sign->std_error);
      out += ",\"ties\":" + std::to_string(row.raw_sign->ties) + "}";
    } else {
      out += "null";
    }
    out += ",\"raw_lambda\":";
    if (row.raw_lambda) {
      out += "{\"estimate\":" + format_double(row.raw_lambda->estimate);
      out += ",\"stderr\":" + format_double(row.raw_lambda->std_error) + "}";
    } else {
      out += "null";
    }
    out += "}";
  }
  out += "]}\n";
  return out;
}

std::string chsh_to_csv(const ChshReport& r) {
  std::string out;
  out += "# spincorr chsh report v" + std::to_string(kReportVersion) + "\n";
  out +=
      "a,a_prime,b,b_prime,n,strict_sampling,e_ab,e_ab_prime,e_a_prime_b,"
      "e_a_prime_b_prime,separate,single_average,sign_separate,"
      "variance_lhs,variance_rhs,variance_rhs_limit,cross_dot,lambda_mean,"
      "variance_bound_holds,ties\n";
  out += vec_field(r.a) + "," + vec_field(r.a_prime) + "," + vec_field(r.b) + "," +
         vec_field(r.b_prime);
  out += "," + std::to_string(r.n);
  out += std::string(",") + (r.strict_sampling ? "1" : "0");
  out += "," + format_double(r.e_ab);
  out += "," + format_double(r.e_ab_prime);
  out += "," + format_double(r.e_a_prime_b);
  out += "," + format_double(r.e_a_prime_b_prime);
  out += "," + format_double(r.separate);
  out += "," + format_double(r.single_average);
  out += "," + format_double(r.sign_separate);
  out += "," + format_double(r.variance_lhs);
  out += "," + format_double(r.variance_rhs);
  out += "," + format_double(r.variance_rhs_limit);
  out += "," + format_double(r.cross_dot);
  out += "," + format_double(r.lambda_mean);
  out += std::string(",") + (r.variance_bound_holds ? "1" : "0");
  out += "," + std::to_string(r.ties);
  out += "\n";
  return out;
}

std::string chsh_to_json(const ChshReport& r) {
  std::string out = "{\"report_version\":" + std::to_string(kReportVersion);
  out += ",\"a\":" + json_vec(r.a);
  out += ",\"a_prime\":" + json_vec(r.a_prime);
  out += ",\"b\":" + json_vec(r.b);
  out += ",\"b_prime\":" + json_vec(r.b_prime);
  out += ",\"n\":" + std::to_string(r.n);
  out += std::string(",\"strict_sampling\":") + (r.strict_sampling ? "true" : "false");
  out += ",\"e_ab\":" + format_double(r.e_ab);
  out += ",\"e_ab_prime\":" + format_double(r.e_ab_prime);
  out += ",\"e_a_prime_b\":" + format_double(r.e_a_prime_b);
  out += ",\"e_a_prime_b_prime\":" + format_double(r.e_a_prime_b_prime);
  out += ",\"separate\":" + format_double(r.separate);
  out += ",\"single_average\":" + format_double(r.single_average);
  out += ",\"sign_separate\":" + format_double(r.sign_separate);
  out += ",\"variance_lhs\":" + format_double(r.variance_lhs);
  out += ",\"variance_rhs\":" + format_double(r.variance_rhs);
  out += ",\"variance_rhs_limit\":" + format_double(r.variance_rhs_limit);
  out += ",\"cross_dot\":" + format_double(r.cross_dot);
  out += ",\"lambda_mean\":" + format_double(r.lambda_mean);
  out += std::string(",\"variance_bound_holds\":") +
         (r.variance_bound_holds ? "true" : "false");
  out += ",\"ties\":" + std::to_string(r.ties);
  out += "}\n";
  return out;
}

}  // namespace spincorr
