#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spincorr/vec3.hpp"

namespace spincorr::kernels {

// Trials are generated and scored in fixed-size blocks. Block boundaries
// depend only on the trial index, so any worker partition reproduces the same
// per-block results and the same block-ordered merge.
inline constexpr std::size_t kBlockTrials = 4096;

// Structure-of-arrays batch of trials.
struct TrialBlock {
  std::vector<std::int8_t> lambda;
  std::vector<double> sx, sy, sz;

  std::size_t size() const { return lambda.size(); }

  void resize(std::size_t m) {
    lambda.resize(m);
    sx.resize(m);
    sy.resize(m);
    sz.resize(m);
  }
};

// Four-lane compensated accumulator (Kahan-Babuska/Neumaier) for the even
// components (scalar, e23, e31, e12). The reduction order is part of the
// contract: trial t goes to lane t mod 4; lanes merge in order 0..3, sum
// before compensation. Scalar and SIMD backends must produce identical bits.
struct EvenKahan {
  double sum[4] = {0, 0, 0, 0};
  double comp[4] = {0, 0, 0, 0};

  void add(int component, double x) {
    const double s = sum[component];
    const double t = s + x;
    if ((s >= 0 ? s : -s) >= (x >= 0 ? x : -x)) {
      comp[component] += (s - t) + x;
    } else {
      comp[component] += (x - t) + s;
    }
    sum[component] = t;
  }

  void merge(const EvenKahan& o) {
    for (int c = 0; c < 4; ++c) {
      add(c, o.sum[c]);
      add(c, o.comp[c]);
    }
  }

  double value(int component) const { return sum[component] + comp[component]; }
};

// Per-block sums for the standard-score pipeline.
struct StandardSums {
  EvenKahan even;
  std::int64_t lambda_sum = 0;
  std::int64_t count = 0;

  void merge(const StandardSums& o) {
    even.merge(o.even);
    lambda_sum += o.lambda_sum;
    count += o.count;
  }
};

// Integer sums of +/-1 sign scores for one direction pair. Exact, so the
// merge order never matters.
struct SignSums {
  std::int64_t product_sum = 0;
  std::int64_t a_sum = 0;
  std::int64_t b_sum = 0;
  std::int64_t ties_a = 0;
  std::int64_t ties_b = 0;
  std::int64_t count = 0;

  void merge(const SignSums& o) {
    product_sum += o.product_sum;
    a_sum += o.a_sum;
    b_sum += o.b_sum;
    ties_a += o.ties_a;
    ties_b += o.ties_b;
    count += o.count;
  }
};

// Counterfactual scoring of one trial stream at four settings: the per-trial
// CHSH combination plus the four pairwise sign sums.
struct ChshSums {
  std::int64_t combo_sum = 0;
  std::int64_t lambda_sum = 0;
  SignSums pair[4];  // (a,b), (a,b'), (a',b), (a',b')
  std::int64_t count = 0;

  void merge(const ChshSums& o) {
    combo_sum += o.combo_sum;
    lambda_sum += o.lambda_sum;
    for (int i = 0; i < 4; ++i) pair[i].merge(o.pair[i]);
    count += o.count;
  }
};

struct Backend {
  const char* name;
  void (*generate)(std::uint64_t seed, std::uint64_t first_trial, std::size_t m,
                   std::uint32_t stream, TrialBlock& out);
  StandardSums (*score_standard)(const TrialBlock& block, const Vec3& a,
                                 const Vec3& b);
  SignSums (*score_sign)(const TrialBlock& block, const Vec3& a, const Vec3& b);
  ChshSums (*score_chsh)(const TrialBlock& block, const Vec3& a,
                         const Vec3& a_prime, const Vec3& b,
                         const Vec3& b_prime);
};

const Backend& scalar_backend();

// Null when the build or the CPU lacks AVX2.
const Backend* avx2_backend();

// Runtime-selected backend: AVX2 when available, otherwise scalar.
const Backend& active_backend();

// Overrides the selection (nullptr restores auto-detection). For tests and
// the CLI --backend flag.
void set_backend(const Backend* backend);

const Backend* backend_by_name(const std::string& name);

}  // namespace spincorr::kernels
