// Reference kernels. These define the numeric contract: the SIMD backends
// must reproduce every output bit for bit.

#include "spincorr/kernels.hpp"
#include "spincorr/rng.hpp"
#include "spincorr/spin.hpp"

namespace spincorr::kernels {
namespace {

void generate_scalar(std::uint64_t seed, std::uint64_t first_trial, std::size_t m,
                     std::uint32_t stream, TrialBlock& out) {
  out.resize(m);
  for (std::size_t t = 0; t < m; ++t) {
    TrialRng rng(seed, first_trial + t, stream);
    const Orientation lambda = sample_orientation(rng);
    const Direction s = sample_direction(rng);
    out.lambda[t] = lambda.value;
    out.sx[t] = s.x();
    out.sy[t] = s.y();
    out.sz[t] = s.z();
  }
}

StandardSums score_standard_scalar(const TrialBlock& block, const Vec3& a,
                                   const Vec3& b) {
  const double base0 = -a.dot(b);
  const Vec3 c = a.cross(b);
  const double delta[4] = {0.0, -c.x, -c.y, -c.z};

  EvenKahan lane[4];
  StandardSums sums;
  const std::size_t m = block.size();
  for (std::size_t t = 0; t < m; ++t) {
    const double lam = static_cast<double>(block.lambda[t]);
    EvenKahan& l = lane[t & 3];
    l.add(0, base0 + lam * delta[0]);
    l.add(1, lam * delta[1]);
    l.add(2, lam * delta[2]);
    l.add(3, lam * delta[3]);
    sums.lambda_sum += block.lambda[t];
  }
  for (int i = 0; i < 4; ++i) sums.even.merge(lane[i]);
  sums.count = static_cast<std::int64_t>(m);
  return sums;
}

SignSums score_sign_scalar(const TrialBlock& block, const Vec3& a, const Vec3& b) {
  SignSums sums;
  const std::size_t m = block.size();
  for (std::size_t t = 0; t < m; ++t) {
    const double da = (block.sx[t] * a.x + block.sy[t] * a.y) + block.sz[t] * a.z;
    const double db = (block.sx[t] * b.x + block.sy[t] * b.y) + block.sz[t] * b.z;
    const int sa = (da >= 0.0) ? +1 : -1;   // sign(+s.a), tie -> +1
    const int sb = (db <= 0.0) ? +1 : -1;   // sign(-s.b), tie -> +1
    sums.product_sum += sa * sb;
    sums.a_sum += sa;
    sums.b_sum += sb;
    sums.ties_a += (da == 0.0);
    sums.ties_b += (db == 0.0);
  }
  sums.count = static_cast<std::int64_t>(m);
  return sums;
}

ChshSums score_chsh_scalar(const TrialBlock& block, const Vec3& a,
                           const Vec3& a_prime, const Vec3& b,
                           const Vec3& b_prime) {
  ChshSums sums;
  const std::size_t m = block.size();
  for (std::size_t t = 0; t < m; ++t) {
    const double sx = block.sx[t], sy = block.sy[t], sz = block.sz[t];
    const double da = (sx * a.x + sy * a.y) + sz * a.z;
    const double dap = (sx * a_prime.x + sy * a_prime.y) + sz * a_prime.z;
    const double db = (sx * b.x + sy * b.y) + sz * b.z;
    const double dbp = (sx * b_prime.x + sy * b_prime.y) + sz * b_prime.z;

    const int sa = (da >= 0.0) ? +1 : -1;
    const int sap = (dap >= 0.0) ? +1 : -1;
    const int sb = (db <= 0.0) ? +1 : -1;
    const int sbp = (dbp <= 0.0) ? +1 : -1;

    sums.combo_sum += sa * (sb + sbp) + sap * (sb - sbp);
    sums.lambda_sum += block.lambda[t];

    const double dots[4] = {da, da, dap, dap};
    const double dotb[4] = {db, dbp, db, dbp};
    const int ss[4] = {sa, sa, sap, sap};
    const int tt[4] = {sb, sbp, sb, sbp};
    for (int p = 0; p < 4; ++p) {
      sums.pair[p].product_sum += ss[p] * tt[p];
      sums.pair[p].a_sum += ss[p];
      sums.pair[p].b_sum += tt[p];
      sums.pair[p].ties_a += (dots[p] == 0.0);
      sums.pair[p].ties_b += (dotb[p] == 0.0);
    }
  }
  sums.count = static_cast<std::int64_t>(m);
  for (int p = 0; p < 4; ++p) sums.pair[p].count = static_cast<std::int64_t>(m);
  return sums;
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend = {
      "scalar", generate_scalar, score_standard_scalar,
      score_sign_scalar, score_chsh_scalar,
  };
  return backend;
}

}  // namespace spincorr::kernels
