#include "spincorr/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spincorr/estimators.hpp"
#include "spincorr/kernels.hpp"
#include "spincorr/trial_log.hpp"

namespace spincorr {

const char* pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::standard: return "standard";
    case Pipeline::raw_sign: return "raw-sign";
    case Pipeline::raw_lambda: return "raw-lambda";
  }
  return "?";
}

std::vector<Pipeline> parse_pipelines(const std::string& csv) {
  std::vector<Pipeline> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "standard") {
      out.push_back(Pipeline::standard);
    } else if (item == "raw-sign") {
      out.push_back(Pipeline::raw_sign);
    } else if (item == "raw-lambda") {
      out.push_back(Pipeline::raw_lambda);
    } else {
      throw std::invalid_argument(
          "unknown pipeline '" + item +
          "' (expected a comma-separated subset of: standard, raw-sign, raw-lambda)");
    }
  }
  if (out.empty()) throw std::invalid_argument("pipeline set must not be empty");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

std::vector<double> AngleSweep::angles() const {
  std::vector<double> out;
  for (double theta = start; theta <= stop + 1e-9; theta += step) {
    out.push_back(theta);
  }
  return out;
}

AngleSweep parse_angle_sweep(const std::string& spec) {
  AngleSweep sweep;
  char c1 = 0, c2 = 0;
  std::stringstream ss(spec);
  if (!(ss >> sweep.start >> c1 >> sweep.stop >> c2 >> sweep.step) || c1 != ':' ||
      c2 != ':' || !(ss >> std::ws).eof()) {
    throw std::invalid_argument("bad angle sweep '" + spec +
                                "' (expected START:STOP:STEP in degrees)");
  }
  if (!(sweep.step > 0.0)) {
    throw std::invalid_argument("angle sweep step must be positive, got " +
                                std::to_string(sweep.step));
  }
  if (sweep.stop < sweep.start) {
    throw std::invalid_argument("angle sweep stop must be >= start");
  }
  return sweep;
}

Direction parse_direction(const std::string& spec) {
  if (spec.find(',') == std::string::npos) {
    std::size_t pos = 0;
    double deg = 0.0;
    try {
      deg = std::stod(spec, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad direction '" + spec +
                                  "' (expected degrees or x,y,z)");
    }
    if (pos != spec.size()) {
      throw std::invalid_argument("bad direction '" + spec +
                                  "' (expected degrees or x,y,z)");
    }
    return Direction::planar_deg(deg);
  }
  double comp[3];
  std::stringstream ss(spec);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) throw std::invalid_argument("bad direction '" + spec + "': too many components");
    try {
      std::size_t pos = 0;
      comp[i] = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("bad direction component '" + item + "' in '" + spec + "'");
    }
    ++i;
  }
  if (i != 3) throw std::invalid_argument("bad direction '" + spec + "': expected 3 components");
  return Direction::normalized({comp[0], comp[1], comp[2]});
}

void ExperimentConfig::validate() const {
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1, got " + std::to_string(trials));
  }
  if (workers < 1) {
    throw std::invalid_argument("workers must be >= 1, got " + std::to_string(workers));
  }
  if (pipelines.empty()) throw std::invalid_argument("pipeline set must not be empty");
  if (!sweep && !(a && b)) {
    throw std::invalid_argument("either an angle sweep or both --a and --b are required");
  }
  if (sweep && (a || b)) {
    throw std::invalid_argument("give an angle sweep or an explicit pair, not both");
  }
}

std::vector<ExperimentConfig::Setting> ExperimentConfig::settings() const {
  std::vector<Setting> out;
  if (sweep) {
    for (double theta : sweep->angles()) {
      out.push_back({theta, Direction::ex().vec(), Direction::planar_deg(theta).vec()});
    }
  } else {
    const double cosang = std::clamp(a->dot(*b), -1.0, 1.0);
    out.push_back({std::acos(cosang) * (180.0 / M_PI), a->vec(), b->vec()});
  }
  return out;
}

namespace {

bool wants(const std::vector<Pipeline>& set, Pipeline p) {
  return std::find(set.begin(), set.end(), p) != set.end();
}

std::uint64_t block_count(std::int64_t trials) {
  return (static_cast<std::uint64_t>(trials) + kernels::kBlockTrials - 1) /
         kernels::kBlockTrials;
}

// Generates every block of one trial stream on `workers` threads and hands it
// to fn(block_index, block). fn writes only per-block slots, so scheduling
// never affects results.
template <typename Fn>
void for_each_generated_block(std::uint64_t seed, std::int64_t trials,
                              std::uint32_t stream, int workers, Fn&& fn) {
  const auto& backend = kernels::active_backend();
  const std::uint64_t n = static_cast<std::uint64_t>(trials);
  const std::uint64_t nblocks = block_count(trials);
  std::atomic<std::uint64_t> next{0};

  auto work = [&]() {
    kernels::TrialBlock block;
    for (;;) {
      const std::uint64_t bi = next.fetch_add(1);
      if (bi >= nblocks) break;
      const std::uint64_t first = bi * kernels::kBlockTrials;
      const std::size_t count = static_cast<std::size_t>(
          std::min<std::uint64_t>(kernels::kBlockTrials, n - first));
      backend.generate(seed, first, count, stream, block);
      fn(bi, block);
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
}

struct StandardCellBuilder {
  kernels::StandardSums total;

  StandardCell cell(const Vec3& a, const Vec3& b) const {
    const double nd = static_cast<double>(total.count);
    const double scalar = total.even.value(0) / nd;
    const double b1 = total.even.value(1) / nd;
    const double b2 = total.even.value(2) / nd;
    const double b3 = total.even.value(3) / nd;
    const double bnorm = std::sqrt((b1 * b1 + b2 * b2) + b3 * b3);
    double std_error = 0.0;
    if (total.count >= 2) {
      const double s = static_cast<double>(total.lambda_sum);
      const double var = (nd * nd - s * s) / (nd * (nd - 1.0));
      std_error = a.cross(b).norm() * std::sqrt(var / nd);
    }
    return {scalar, bnorm, std_error};
  }
};

RawSignCell sign_cell(const kernels::SignSums& sums) {
  const double nd = static_cast<double>(sums.count);
  RawSignCell cell;
  cell.estimate = static_cast<double>(sums.product_sum) / nd;
  cell.std_error =
      sums.count >= 2 ? sign_stream_std_error(sums.product_sum, sums.count) : 0.0;
  cell.ties = sums.ties_a + sums.ties_b;
  return cell;
}

RawLambdaCell lambda_cell(std::int64_t n) {
  // Per-trial product is lambda * (-lambda) = -1 identically.
  RawLambdaCell cell;
  cell.estimate = static_cast<double>(-n) / static_cast<double>(n);
  cell.std_error = n >= 2 ? sign_stream_std_error(-n, n) : 0.0;
  return cell;
}

template <typename BlockSource>
std::vector<ReportRow> score_stream(const ExperimentConfig& config,
                                    BlockSource&& source) {
  const auto settings = config.settings();
  const bool want_standard = wants(config.pipelines, Pipeline::standard);
  const bool want_sign = wants(config.pipelines, Pipeline::raw_sign);
  const bool want_lambda = wants(config.pipelines, Pipeline::raw_lambda);

  const std::uint64_t nblocks = block_count(config.trials);
  std::vector<std::vector<kernels::StandardSums>> std_blocks;
  std::vector<std::vector<kernels::SignSums>> sign_blocks;
  if (want_standard) {
    std_blocks.assign(settings.size(), std::vector<kernels::StandardSums>(nblocks));
  }
  if (want_sign) {
    sign_blocks.assign(settings.size(), std::vector<kernels::SignSums>(nblocks));
  }

  source([&](std::uint64_t bi, const kernels::TrialBlock& block) {
    const auto& backend = kernels::active_backend();
    for (std::size_t si = 0; si < settings.size(); ++si) {
      if (want_standard) {
        std_blocks[si][bi] = backend.score_standard(block, settings[si].a, settings[si].b);
      }
      if (want_sign) {
        sign_blocks[si][bi] = backend.score_sign(block, settings[si].a, settings[si].b);
      }
    }
  });

  std::vector<ReportRow> rows;
  rows.reserve(settings.size());
  for (std::size_t si = 0; si < settings.size(); ++si) {
    ReportRow row;
    row.theta_deg = settings[si].theta_deg;
    row.n = config.trials;
    if (want_standard) {
      StandardCellBuilder builder;
      for (std::uint64_t bi = 0; bi < nblocks; ++bi) builder.total.merge(std_blocks[si][bi]);
      row.standard = builder.cell(settings[si].a, settings[si].b);
    }
    if (want_sign) {
      kernels::SignSums total;
      for (std::uint64_t bi = 0; bi < nblocks; ++bi) total.merge(sign_blocks[si][bi]);
      row.raw_sign = sign_cell(total);
    }
    if (want_lambda) {
      row.raw_lambda = lambda_cell(config.trials);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<ReportRow> simulate(const ExperimentConfig& config) {
  config.validate();
  return score_stream(config, [&](auto&& per_block) {
    for_each_generated_block(config.seed, config.trials, /*stream=*/0,
                             config.workers, per_block);
  });
}

void record(const ExperimentConfig& config, const std::string& path) {
  // Only the stream parameters matter here; directions are chosen at
  // analysis time.
  if (config.trials < 1) {
    throw std::invalid_argument("trials must be >= 1, got " +
                                std::to_string(config.trials));
  }
  if (config.workers < 1) {
    throw std::invalid_argument("workers must be >= 1, got " +
                                std::to_string(config.workers));
  }
  TrialLogWriter writer(path, static_cast<std::uint64_t>(config.trials), config.seed);

  // Blocks are generated in parallel chunk by chunk and written in order, so
  // the file bytes never depend on the worker count.
  const std::uint64_t nblocks = block_count(config.trials);
  const std::uint64_t chunk = std::max<std::uint64_t>(8, 4u * static_cast<unsigned>(config.workers));
  const auto& backend = kernels::active_backend();
  const std::uint64_t n = static_cast<std::uint64_t>(config.trials);

  std::vector<kernels::TrialBlock> slots(static_cast<std::size_t>(chunk));
  for (std::uint64_t chunk_first = 0; chunk_first < nblocks; chunk_first += chunk) {
    const std::uint64_t chunk_blocks = std::min(chunk, nblocks - chunk_first);
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= chunk_blocks) break;
        const std::uint64_t bi = chunk_first + i;
        const std::uint64_t first = bi * kernels::kBlockTrials;
        const std::size_t count = static_cast<std::size_t>(
            std::min<std::uint64_t>(kernels::kBlockTrials, n - first));
        backend.generate(config.seed, first, count, /*stream=*/0, slots[i]);
      }
    };
    if (config.workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < config.workers; ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (std::uint64_t i = 0; i < chunk_blocks; ++i) {
      writer.append(slots[i], slots[i].size());
    }
  }
  writer.finish();
}

std::vector<ReportRow> analyze(const std::string& log_path,
                               const ExperimentConfig& config) {
  ExperimentConfig effective = config;
  TrialLogReader reader(log_path);
  effective.trials = static_cast<std::int64_t>(reader.header().n);
  effective.seed = reader.header().seed;
  effective.validate();

  return score_stream(effective, [&](auto&& per_block) {
    kernels::TrialBlock block;
    std::uint64_t bi = 0;
    while (reader.read_block(block, kernels::kBlockTrials) > 0) {
      per_block(bi, block);
      ++bi;
    }
  });
}

void ChshExperimentConfig::validate() const {
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1, got " + std::to_string(trials));
  }
  if (workers < 1) {
    throw std::invalid_argument("workers must be >= 1, got " + std::to_string(workers));
  }
}

ChshReport chsh_run(const ChshExperimentConfig& config) {
  config.validate();
  const std::uint64_t nblocks = block_count(config.trials);
  const Vec3 dirs[4] = {config.a.vec(), config.a_prime.vec(), config.b.vec(),
                        config.b_prime.vec()};
  const Vec3 pair_a[4] = {dirs[0], dirs[0], dirs[1], dirs[1]};
  const Vec3 pair_b[4] = {dirs[2], dirs[3], dirs[2], dirs[3]};

  // Shared stream: counterfactual scoring of all four settings per trial.
  std::vector<kernels::ChshSums> chsh_blocks(nblocks);
  std::vector<std::vector<kernels::StandardSums>> std_blocks(
      4, std::vector<kernels::StandardSums>(nblocks));
  std::vector<std::vector<kernels::SignSums>> sign_blocks(
      4, std::vector<kernels::SignSums>(nblocks));

  for_each_generated_block(
      config.seed, config.trials, /*stream=*/0, config.workers,
      [&](std::uint64_t bi, const kernels::TrialBlock& block) {
        const auto& backend = kernels::active_backend();
        chsh_blocks[bi] = backend.score_chsh(block, dirs[0], dirs[1], dirs[2], dirs[3]);
        if (!config.strict_sampling) {
          for (int p = 0; p < 4; ++p) {
            std_blocks[p][bi] = backend.score_standard(block, pair_a[p], pair_b[p]);
            sign_blocks[p][bi] = backend.score_sign(block, pair_a[p], pair_b[p]);
          }
        }
      });

  // Strict sampling: each setting pair draws its own stream.
  if (config.strict_sampling) {
    for (int p = 0; p < 4; ++p) {
      for_each_generated_block(
          config.seed, config.trials, /*stream=*/static_cast<std::uint32_t>(p + 1),
          config.workers, [&](std::uint64_t bi, const kernels::TrialBlock& block) {
            const auto& backend = kernels::active_backend();
            std_blocks[p][bi] = backend.score_standard(block, pair_a[p], pair_b[p]);
            sign_blocks[p][bi] = backend.score_sign(block, pair_a[p], pair_b[p]);
          });
    }
  }

  kernels::ChshSums chsh_total;
  for (std::uint64_t bi = 0; bi < nblocks; ++bi) chsh_total.merge(chsh_blocks[bi]);
  kernels::StandardSums std_total[4];
  kernels::SignSums sign_total[4];
  for (int p = 0; p < 4; ++p) {
    for (std::uint64_t bi = 0; bi < nblocks; ++bi) {
      std_total[p].merge(std_blocks[p][bi]);
      sign_total[p].merge(sign_blocks[p][bi]);
    }
  }

  ChshReport report;
  report.a = dirs[0];
  report.a_prime = dirs[1];
  report.b = dirs[2];
  report.b_prime = dirs[3];
  report.n = config.trials;
  report.strict_sampling = config.strict_sampling;

  const auto scalar_of = [](const kernels::StandardSums& s) {
    return s.even.value(0) / static_cast<double>(s.count);
  };
  report.e_ab = scalar_of(std_total[0]);
  report.e_ab_prime = scalar_of(std_total[1]);
  report.e_a_prime_b = scalar_of(std_total[2]);
  report.e_a_prime_b_prime = scalar_of(std_total[3]);
  report.separate = chsh_separate(report.e_ab, report.e_ab_prime, report.e_a_prime_b,
                                  report.e_a_prime_b_prime);

  report.single_average = static_cast<double>(chsh_total.combo_sum) /
                          static_cast<double>(chsh_total.count);
  if (std::abs(report.single_average) > 2.0) {
    throw std::logic_error("chsh_run: single average left [-2, 2]");
  }

  const auto sign_estimate = [](const kernels::SignSums& s) {
    return static_cast<double>(s.product_sum) / static_cast<double>(s.count);
  };
  report.sign_separate =
      chsh_separate(sign_estimate(sign_total[0]), sign_estimate(sign_total[1]),
                    sign_estimate(sign_total[2]), sign_estimate(sign_total[3]));

  const double lambda_mean = static_cast<double>(chsh_total.lambda_sum) /
                             static_cast<double>(chsh_total.count);
  const VarianceBoundReport vb = variance_bound_mean(
      ChshConfig{config.a, config.a_prime, config.b, config.b_prime}, lambda_mean);
  report.variance_lhs = vb.lhs;
  report.variance_rhs = vb.rhs;
  report.variance_rhs_limit = vb.rhs_limit;
  report.cross_dot = vb.cross_dot;
  report.lambda_mean = lambda_mean;
  report.variance_bound_holds = vb.holds;

  report.ties = chsh_total.pair[0].ties_a + chsh_total.pair[2].ties_a +
                chsh_total.pair[0].ties_b + chsh_total.pair[1].ties_b;
  return report;
}

// --- verification suites ----------------------------------------------------

namespace {

void check(VerifyReport& report, const std::string& case_id, double value,
           double expected, double tolerance) {
  ++report.cases;
  if (!(std::abs(value - expected) <= tolerance)) {
    report.failures.push_back({case_id, value, expected, tolerance});
  }
}

VerifyReport verify_subalgebra() {
  VerifyReport report{"subalgebra", 0, {}};
  for (int mu = 1; mu <= 3; ++mu) {
    for (int nu = 1; nu <= 3; ++nu) {
      for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
        const Multivector lmu = basis_bivector(mu, lambda).value;
        const Multivector lnu = basis_bivector(nu, lambda).value;
        Multivector expected = Multivector::scalar(mu == nu ? -1.0 : 0.0);
        for (int rho = 1; rho <= 3; ++rho) {
          if (rho == mu || rho == nu || mu == nu) continue;
          const int eps = ((nu - mu + 3) % 3 == 1) ? +1 : -1;
          expected = expected - basis_bivector(rho, lambda).value * static_cast<double>(eps);
        }
        const double residual =
            (oriented_product(lambda, lmu, lnu) - expected).norm_inf();
        check(report,
              "oriented L" + std::to_string(mu) + " L" + std::to_string(nu) +
                  " lambda=" + std::to_string(lambda.value),
              residual, 0.0, kExactTol);

        // Regression anchor: the plain product breaks the sub-algebra at
        // lambda = -1 for mu != nu, with residual exactly 2.
        if (lambda.value < 0 && mu != nu) {
          const double naive_residual =
              (geometric_product(lmu, lnu) - expected).norm();
          check(report,
                "naive L" + std::to_string(mu) + " L" + std::to_string(nu) +
                    " lambda=-1 residual",
                naive_residual, 2.0, kExactTol);
        }
      }
    }
  }
  return report;
}

VerifyReport verify_bivector_identity(std::int64_t samples, std::uint64_t seed) {
  VerifyReport report{"bivector-identity", 0, {}};
  for (std::int64_t i = 0; i < samples; ++i) {
    TrialRng rng(seed, static_cast<std::uint64_t>(i));
    const Direction a = sample_direction(rng);
    const Direction b = sample_direction(rng);
    for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
      const Multivector expected =
          Multivector::scalar(-a.dot(b)) -
          Multivector::bivector_dual(a.cross(b)) * lambda.scalar();
      const double residual =
          (oriented_spin_product(lambda, a, b) - expected).norm_inf();
      check(report, "pair " + std::to_string(i) + " lambda=" + std::to_string(lambda.value),
            residual, 0.0, kExactTol);
    }
  }
  return report;
}

VerifyReport verify_torsion(std::int64_t samples, std::uint64_t seed) {
  VerifyReport report{"torsion", 0, {}};
  for (std::int64_t i = 0; i < samples; ++i) {
    TrialRng rng(seed, static_cast<std::uint64_t>(i));
    const Direction n = sample_direction(rng);
    const Direction np = sample_direction(rng);
    for (const Orientation lambda : {Orientation::plus(), Orientation::minus()}) {
      const Multivector expected =
          -(Multivector::bivector_dual(n.cross(np)) * lambda.scalar());
      const double residual = (torsion(lambda, n, np).value - expected).norm_inf();
      check(report, "pair " + std::to_string(i) + " lambda=" + std::to_string(lambda.value),
            residual, 0.0, kExactTol);
    }
  }
  return report;
}

VerifyReport verify_appendix_c(std::int64_t samples, std::uint64_t seed) {
  VerifyReport report{"appendix-c", 0, {}};
  for (std::int64_t i = 0; i < samples; ++i) {
    TrialRng rng(seed, static_cast<std::uint64_t>(i));
    const Direction a = sample_direction(rng);
    const Direction b = sample_direction(rng);
    const Direction s = sample_direction(rng);
    const Orientation lambda = sample_orientation(rng);

    const ChainReport chain = verify_derivation_chain(a, b, lambda, s);
    check(report,
          "chain " + std::to_string(i) + " worst step " +
              chain_step_name(chain.worst()->step),
          chain.max_residual(), 0.0, kExactTol);

    const double qnorm = trial_quaternion(a, b, s, lambda).value.norm();
    check(report, "chain " + std::to_string(i) + " quaternion norm", qnorm, 1.0,
          kExactTol);

    // The naive product must fail at exactly the bivector-identity step for
    // lambda = -1.
    if (lambda.value < 0) {
      const ChainReport naive =
          verify_derivation_chain(a, b, lambda, s, ProductMode::naive);
      const double expected =
          2.0 * Multivector::bivector_dual(a.cross(b)).norm_inf();
      check(report, "chain " + std::to_string(i) + " naive bivector-identity residual",
            naive.steps[4].residual, expected, kExactTol);
    }
  }
  return report;
}

VerifyReport verify_gill_claims(std::uint64_t seed) {
  VerifyReport report{"gill-claims", 0, {}};
  for (int mu = 1; mu <= 3; ++mu) {
    for (int nu = 1; nu <= 3; ++nu) {
      if (mu == nu) continue;
      const DisputeReport d = dispute_eval(mu, nu, seed);
      const std::string tag = "(" + std::to_string(mu) + "," + std::to_string(nu) + ") ";
      check(report, tag + "naive residual", d.naive_residual, 2.0, kExactTol);
      check(report, tag + "oriented residual", d.oriented_residual, 0.0, kExactTol);
      check(report, tag + "zero-claim norm", d.zero_claim_norm, 2.0, kExactTol);
      check(report, tag + "contraction residual", d.contraction_residual_max, 0.0,
            kExactTol);
    }
  }
  return report;
}

VerifyReport verify_sigma(std::int64_t samples, std::uint64_t seed) {
  VerifyReport report{"sigma", 0, {}};

  const Direction axis = Direction::ez();
  {
    std::vector<SpinBivector> constant(16, spin_bivector(axis, Orientation::plus()));
    const SigmaEstimate sigma = bivector_sigma(constant, -1, axis);
    check(report, "constant sample spread", sigma.spread, 0.0, 0.0);
  }
  {
    std::vector<SpinBivector> half;
    for (int i = 0; i < 8; ++i) {
      half.push_back(spin_bivector(axis, i % 2 ? Orientation::plus() : Orientation::minus()));
    }
    const SigmaEstimate sigma = bivector_sigma(half, -1, axis);
    check(report, "half/half spread exactly 1", sigma.spread, 1.0, 0.0);
  }

  for (std::int64_t i = 0; i < samples; ++i) {
    TrialRng rng(seed, static_cast<std::uint64_t>(i));
    const Direction n = sample_direction(rng);
    const Orientation lambda = sample_orientation(rng);

    // Raw score on the a side: -D(n) L(n,lambda); its sigma is -D(n).
    const Multivector raw_a =
        geometric_product(-unit_bivector(n), spin_bivector(n, lambda).value);
    const Multivector back_a = standardize(raw_a, SigmaEstimate{-unit_bivector(n), 1.0});
    check(report, "standardize a-side roundtrip " + std::to_string(i),
          (back_a - spin_bivector(n, lambda).value).norm_inf(), 0.0, kExactTol);

    // Raw score on the b side: +D(n) L(n,lambda); its sigma is +D(n).
    const Multivector raw_b =
        geometric_product(unit_bivector(n), spin_bivector(n, lambda).value);
    const Multivector back_b = standardize(raw_b, SigmaEstimate{unit_bivector(n), 1.0});
    check(report, "standardize b-side roundtrip " + std::to_string(i),
          (back_b - spin_bivector(n, lambda).value).norm_inf(), 0.0, kExactTol);

    // Norm-based spread route vs the closed form on a random +/-1 sequence.
    std::vector<SpinBivector> sample;
    std::int64_t lambda_sum = 0;
    TrialRng seq(seed ^ 0x9E3779B97F4A7C15ull, static_cast<std::uint64_t>(i));
    for (int k = 0; k < 64; ++k) {
      const Orientation lk = sample_orientation(seq);
      sample.push_back(spin_bivector(axis, lk));
      lambda_sum += lk.value;
    }
    const double mean = static_cast<double>(lambda_sum) / 64.0;
    Multivector mean_mv;
    for (const auto& sb : sample) mean_mv = mean_mv + sb.value;
    mean_mv = mean_mv * (1.0 / 64.0);
    double sq = 0.0;
    for (const auto& sb : sample) sq += (sb.value - mean_mv).norm_sq();
    const double direct = std::sqrt(sq / 64.0);
    const SigmaEstimate sigma = bivector_sigma(sample, +1, axis);
    check(report, "spread route agreement " + std::to_string(i),
          sigma.spread - direct, 0.0, kExactTol);
    check(report, "spread closed form " + std::to_string(i), sigma.spread,
          std::sqrt(1.0 - mean * mean), 0.0);
  }
  return report;
}

}  // namespace

VerifyReport run_verify_suite(const std::string& suite, std::int64_t samples,
                              std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("verify: samples must be >= 1");
  if (suite == "subalgebra") return verify_subalgebra();
  if (suite == "bivector-identity") return verify_bivector_identity(samples, seed);
  if (suite == "torsion") return verify_torsion(samples, seed);
  if (suite == "appendix-c") return verify_appendix_c(samples, seed);
  if (suite == "gill-claims") return verify_gill_claims(seed);
  if (suite == "sigma") return verify_sigma(samples, seed);
  std::string known;
  for (const char* name : kVerifySuites) {
    if (!known.empty()) known += ", ";
    known += name;
  }
  throw std::invalid_argument("unknown verify suite '" + suite + "' (expected one of: " +
                              known + ")");
}

std::string verify_to_json(const VerifyReport& report) {
  nlohmann::json j;
  j["suite"] = report.suite;
  j["cases"] = report.cases;
  j["ok"] = report.ok();
  j["failures"] = nlohmann::json::array();
  for (const auto& f : report.failures) {
    j["failures"].push_back({{"case", f.case_id},
                             {"value", f.value},
                             {"expected", f.expected},
                             {"tolerance", f.tolerance}});
  }
  return j.dump(2) + "\n";
}

}  // namespace spincorr
