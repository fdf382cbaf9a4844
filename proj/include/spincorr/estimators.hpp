#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "spincorr/multivector.hpp"
#include "spincorr/spin.hpp"

namespace spincorr {

// Compensated scalar sum (Kahan-Babuska/Neumaier variant). The compensation
// is additive, so partial sums merge exactly like plain values; keeps the
// 1e-12 assertions honest at 1e6+ accumulations.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  void merge(const KahanSum& o) {
    add(o.sum);
    add(o.comp);
  }

  double value() const { return sum + comp; }
};

// Streaming sum of per-trial even-grade products, in full multivector form so
// the bivector remainder stays observable. Accumulators are mergeable
// monoids: merge must match sequential accumulation to 1e-12.
class CorrelationAccumulator {
 public:
  void add(const Multivector& m) {
    for (int i = 0; i < 8; ++i) sum_[i].add(m.c[i]);
    ++n_;
  }

  void add(const Multivector& m, Orientation lambda) {
    add(m);
    lambda_sum_ += lambda.value;
  }

  void merge(const CorrelationAccumulator& o) {
    for (int i = 0; i < 8; ++i) sum_[i].merge(o.sum_[i]);
    n_ += o.n_;
    lambda_sum_ += o.lambda_sum_;
  }

  std::int64_t count() const { return n_; }
  std::int64_t lambda_sum() const { return lambda_sum_; }

  Multivector total() const {
    Multivector m;
    for (int i = 0; i < 8; ++i) m.c[i] = sum_[i].value();
    return m;
  }

  Multivector mean() const {
    if (n_ == 0) throw std::domain_error("CorrelationAccumulator: empty");
    return total() * (1.0 / static_cast<double>(n_));
  }

 private:
  std::array<KahanSum, 8> sum_{};
  std::int64_t n_ = 0;
  std::int64_t lambda_sum_ = 0;
};

inline void accumulate_standard(CorrelationAccumulator& acc, Orientation lambda,
                                const Direction& a, const Direction& b) {
  acc.add(oriented_spin_product(lambda, a, b), lambda);
}

struct CorrelationEstimate {
  double scalar = 0.0;
  Multivector bivector;
  double std_error = 0.0;
  std::int64_t n = 0;
};

// Scalar part is -a.b independent of the lambda sequence; the bivector part
// is -(mean lambda) I.(a x b); the standard error scales the lambda spread by
// |a x b|.
inline CorrelationEstimate finalize_standard(const CorrelationAccumulator& acc,
                                             const Direction& a,
                                             const Direction& b) {
  const std::int64_t n = acc.count();
  if (n < 1) throw std::domain_error("finalize_standard: no trials accumulated");
  const Multivector mean = acc.mean();
  const EvenDecomposition parts = even_decompose(mean, kChainTol);

  double std_error = 0.0;
  if (n >= 2) {
    const double nd = static_cast<double>(n);
    const double s = static_cast<double>(acc.lambda_sum());
    const double var = (nd * nd - s * s) / (nd * (nd - 1.0));
    std_error = a.cross(b).norm() * std::sqrt(var / nd);
  }
  return {parts.scalar, parts.bivector, std_error, n};
}

// Sums of the +/-1 raw scores. Every entry is validated, so the squared sums
// are exactly the count.
struct PearsonStats {
  std::int64_t n = 0;
  std::int64_t sum_a = 0;
  std::int64_t sum_b = 0;
  std::int64_t sum_ab = 0;
  std::int64_t sum_aa = 0;
  std::int64_t sum_bb = 0;

  void add(int a, int b) {
    if ((a != 1 && a != -1) || (b != 1 && b != -1)) {
      throw std::invalid_argument("PearsonStats: scores must be +1 or -1");
    }
    ++n;
    sum_a += a;
    sum_b += b;
    sum_ab += static_cast<std::int64_t>(a) * b;
    sum_aa += 1;
    sum_bb += 1;
  }

  void merge(const PearsonStats& o) {
    n += o.n;
    sum_a += o.sum_a;
    sum_b += o.sum_b;
    sum_ab += o.sum_ab;
    sum_aa += o.sum_aa;
    sum_bb += o.sum_bb;
  }
};

// Product-moment coefficient (mean AB - mean A mean B) / (sigma_A sigma_B)
// with population sigmas. Integer sums keep the all-(anti)correlated cases
// exact.
inline double pearson_raw(const PearsonStats& stats) {
  if (stats.n < 2) throw std::domain_error("pearson_raw: need at least 2 samples");
  const double nd = static_cast<double>(stats.n);
  const double cov_n2 = nd * static_cast<double>(stats.sum_ab) -
                        static_cast<double>(stats.sum_a) * static_cast<double>(stats.sum_b);
  const double var_a_n2 = nd * static_cast<double>(stats.sum_aa) -
                          static_cast<double>(stats.sum_a) * static_cast<double>(stats.sum_a);
  const double var_b_n2 = nd * static_cast<double>(stats.sum_bb) -
                          static_cast<double>(stats.sum_b) * static_cast<double>(stats.sum_b);
  if (var_a_n2 <= 0.0 || var_b_n2 <= 0.0) {
    throw std::domain_error("pearson_raw: zero variance, correlation undefined");
  }
  if (var_a_n2 == var_b_n2) {
    return cov_n2 / var_a_n2;
  }
  return cov_n2 / std::sqrt(var_a_n2 * var_b_n2);
}

// sigma(A) = sign * D(n) times the scalar spread of the bivector samples.
struct SigmaEstimate {
  Multivector detector_factor;
  double spread = 0.0;
};

// Standard deviation of a sample of spin bivectors sharing one axis. For
// +/-1-oriented unit samples the spread reduces to sqrt(1 - mean(lambda)^2)
// exactly; the general norm-based route is kept by the test oracle.
inline SigmaEstimate bivector_sigma(std::span<const SpinBivector> samples, int sign,
                                    const Direction& axis) {
  if (sign != +1 && sign != -1) {
    throw std::invalid_argument("bivector_sigma: sign must be +1 or -1");
  }
  if (samples.empty()) throw std::domain_error("bivector_sigma: empty sample set");

  const Multivector d = unit_bivector(axis);
  std::int64_t lambda_total = 0;
  for (const auto& sample : samples) {
    const Multivector diff = sample.value - d * sample.lambda.scalar();
    if (diff.norm_inf() > kExactTol) {
      throw std::invalid_argument("bivector_sigma: sample does not share the given axis");
    }
    lambda_total += sample.lambda.value;
  }
  const double mean = static_cast<double>(lambda_total) /
                      static_cast<double>(samples.size());
  const double spread = std::sqrt(1.0 - mean * mean);
  return {d * static_cast<double>(sign), spread};
}

// Divides a raw product by its bivector standard deviation: multiplication by
// the sigma inverse on the left (the inverse of a unit bivector is its
// negative), matching the factor order of the raw scores.
inline Multivector standardize(const Multivector& raw_product,
                               const SigmaEstimate& sigma) {
  if (!(sigma.spread > 0.0)) {
    throw std::domain_error("standardize: degenerate sigma (zero spread)");
  }
  const EvenDecomposition parts = even_decompose(sigma.detector_factor);
  if (std::abs(parts.scalar) > kExactTol ||
      std::abs(sigma.detector_factor.norm() - 1.0) > kExactTol) {
    throw std::invalid_argument("standardize: detector factor must be a unit bivector");
  }
  const Multivector inverse = -sigma.detector_factor;
  return geometric_product(inverse, raw_product) * (1.0 / sigma.spread);
}

// Plain sample standard error for report columns.
class ScalarSeries {
 public:
  void add(double x) {
    sum_.add(x);
    sumsq_.add(x * x);
    ++n_;
  }

  std::int64_t count() const { return n_; }

  double mean() const {
    if (n_ == 0) throw std::domain_error("ScalarSeries: empty");
    return sum_.value() / static_cast<double>(n_);
  }

  double std_error() const {
    if (n_ < 2) throw std::domain_error("ScalarSeries: need at least 2 samples");
    const double nd = static_cast<double>(n_);
    const double m = sum_.value() / nd;
    double var = (sumsq_.value() - nd * m * m) / (nd - 1.0);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / nd);
  }

 private:
  KahanSum sum_;
  KahanSum sumsq_;
  std::int64_t n_ = 0;
};

// Standard error of a +/-1 product stream from its integer sum alone.
inline double sign_stream_std_error(std::int64_t sum, std::int64_t n) {
  if (n < 2) throw std::domain_error("sign_stream_std_error: need at least 2 samples");
  const double nd = static_cast<double>(n);
  const double s = static_cast<double>(sum);
  double var = (nd * nd - s * s) / (nd * (nd - 1.0));
  if (var < 0.0) var = 0.0;
  return std::sqrt(var / nd);
}

}  // namespace spincorr
