// AVX2 variants of the trial kernels. Four trials per vector iteration; the
// tail of a partial group falls back to the scalar formulas, which are
// bit-identical (no FMA contraction anywhere, all conversions exact).

#include "spincorr/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <bit>
#include <cstring>

#include "spincorr/rng.hpp"
#include "spincorr/spin.hpp"

namespace spincorr::kernels {
namespace {

// ---- 4-stream Philox4x32-10 ------------------------------------------------
// One __m128i per state word, four independent counters side by side.

struct Philox4Words {
  __m128i w0, w1, w2, w3;
};

inline __m128i mulhi_epu32(__m128i x, __m128i m) {
  const __m128i even = _mm_srli_epi64(_mm_mul_epu32(x, m), 32);
  const __m128i odd = _mm_mul_epu32(_mm_srli_epi64(x, 32), m);
  const __m128i hi_mask = _mm_set1_epi64x(static_cast<long long>(0xFFFFFFFF00000000ull));
  return _mm_or_si128(even, _mm_and_si128(odd, hi_mask));
}

inline Philox4Words philox4x32_10(__m128i c0, __m128i c1, __m128i c2, __m128i c3,
                                  std::uint64_t seed) {
  const __m128i m0 = _mm_set1_epi32(static_cast<int>(Philox4x32::kMul0));
  const __m128i m1 = _mm_set1_epi32(static_cast<int>(Philox4x32::kMul1));
  __m128i k0 = _mm_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(seed)));
  __m128i k1 = _mm_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(seed >> 32)));
  const __m128i w0 = _mm_set1_epi32(static_cast<int>(Philox4x32::kWeyl0));
  const __m128i w1 = _mm_set1_epi32(static_cast<int>(Philox4x32::kWeyl1));

  for (int round = 0; round < 10; ++round) {
    const __m128i hi0 = mulhi_epu32(c0, m0);
    const __m128i lo0 = _mm_mullo_epi32(c0, m0);
    const __m128i hi1 = mulhi_epu32(c2, m1);
    const __m128i lo1 = _mm_mullo_epi32(c2, m1);
    const __m128i n0 = _mm_xor_si128(_mm_xor_si128(hi1, c1), k0);
    const __m128i n2 = _mm_xor_si128(_mm_xor_si128(hi0, c3), k1);
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
    if (round < 9) {
      k0 = _mm_add_epi32(k0, w0);
      k1 = _mm_add_epi32(k1, w1);
    }
  }
  return {c0, c1, c2, c3};
}

// Pairs (lo, hi) 32-bit words into 64-bit lanes, preserving trial order.
inline __m256i pair_u64(__m128i lo, __m128i hi) {
  const __m128i low = _mm_unpacklo_epi32(lo, hi);    // trials 0, 1
  const __m128i high = _mm_unpackhi_epi32(lo, hi);   // trials 2, 3
  return _mm256_set_m128i(high, low);
}

// Exact u64 -> double for 53-bit values (u >> 11), then scaled to [-1, 1).
// Matches to_symmetric_interval bit for bit.
inline __m256d symmetric_from_u64(__m256i u) {
  const __m256i shifted = _mm256_srli_epi64(u, 11);
  const __m256i lo_mask = _mm256_set1_epi64x((1ll << 52) - 1);
  const __m256i lo52 = _mm256_and_si256(shifted, lo_mask);
  const __m256i exp_bits = _mm256_set1_epi64x(0x4330000000000000ll);  // 2^52
  const __m256d two52 = _mm256_set1_pd(0x1.0p52);
  __m256d value = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(lo52, exp_bits)), two52);
  const __m256i hibit = _mm256_srli_epi64(shifted, 52);
  const __m256d hi_add = _mm256_and_pd(
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(hibit, _mm256_set1_epi64x(1))),
      two52);
  value = _mm256_add_pd(value, hi_add);
  const __m256d unit = _mm256_mul_pd(value, _mm256_set1_pd(0x1.0p-53));
  return _mm256_sub_pd(_mm256_add_pd(unit, unit), _mm256_set1_pd(1.0));
}

void generate_avx2(std::uint64_t seed, std::uint64_t first_trial, std::size_t m,
                   std::uint32_t stream, TrialBlock& out) {
  out.resize(m);
  const __m128i stream_v = _mm_set1_epi32(static_cast<int>(stream));

  std::size_t t = 0;
  for (; t + 4 <= m; t += 4) {
    alignas(16) std::uint32_t c0[4], c1[4];
    for (int lane = 0; lane < 4; ++lane) {
      const std::uint64_t trial = first_trial + t + static_cast<std::uint64_t>(lane);
      c0[lane] = static_cast<std::uint32_t>(trial);
      c1[lane] = static_cast<std::uint32_t>(trial >> 32);
    }
    const __m128i c0v = _mm_load_si128(reinterpret_cast<const __m128i*>(c0));
    const __m128i c1v = _mm_load_si128(reinterpret_cast<const __m128i*>(c1));

    // draw 0: orientation bit
    {
      const Philox4Words blk =
          philox4x32_10(c0v, c1v, _mm_setzero_si128(), stream_v, seed);
      alignas(16) std::uint32_t w0[4];
      _mm_store_si128(reinterpret_cast<__m128i*>(w0), blk.w0);
      for (int lane = 0; lane < 4; ++lane) {
        out.lambda[t + lane] = (w0[lane] & 1u) ? +1 : -1;
      }
    }

    // draws 1..: rejection sampling, each lane retrying on its own stream
    alignas(16) std::uint32_t draws[4] = {1, 1, 1, 1};
    unsigned pending = 0xF;
    while (pending != 0) {
      const __m128i drawv = _mm_load_si128(reinterpret_cast<const __m128i*>(draws));
      const Philox4Words blk = philox4x32_10(c0v, c1v, drawv, stream_v, seed);
      const __m256d u = symmetric_from_u64(pair_u64(blk.w0, blk.w1));
      const __m256d v = symmetric_from_u64(pair_u64(blk.w2, blk.w3));
      const __m256d tt =
          _mm256_add_pd(_mm256_mul_pd(u, u), _mm256_mul_pd(v, v));
      const __m256d one = _mm256_set1_pd(1.0);
      const unsigned accept =
          static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(tt, one, _CMP_LT_OQ)));

      const __m256d f = _mm256_mul_pd(_mm256_set1_pd(2.0),
                                      _mm256_sqrt_pd(_mm256_sub_pd(one, tt)));
      const __m256d x = _mm256_mul_pd(u, f);
      const __m256d y = _mm256_mul_pd(v, f);
      const __m256d z =
          _mm256_sub_pd(one, _mm256_add_pd(tt, tt));

      alignas(32) double xs[4], ys[4], zs[4];
      _mm256_store_pd(xs, x);
      _mm256_store_pd(ys, y);
      _mm256_store_pd(zs, z);

      unsigned newly = accept & pending;
      for (int lane = 0; lane < 4; ++lane) {
        if (newly & (1u << lane)) {
          out.sx[t + lane] = xs[lane];
          out.sy[t + lane] = ys[lane];
          out.sz[t + lane] = zs[lane];
        } else if (pending & (1u << lane)) {
          ++draws[lane];
        }
      }
      pending &= ~accept;
    }
  }

  for (; t < m; ++t) {
    const TrialRecord rec = sample_trial(seed, first_trial + t, stream);
    out.lambda[t] = rec.lambda.value;
    out.sx[t] = rec.s.x();
    out.sy[t] = rec.s.y();
    out.sz[t] = rec.s.z();
  }
}

// ---- scoring ----------------------------------------------------------------

inline __m256d lambda_as_pd(const std::int8_t* lam) {
  return _mm256_set_pd(static_cast<double>(lam[3]), static_cast<double>(lam[2]),
                       static_cast<double>(lam[1]), static_cast<double>(lam[0]));
}

// Vector form of EvenKahan::add: same Neumaier update per lane.
struct VecKahan {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d t = _mm256_add_pd(sum, x);
    const __m256d abs_mask =
        _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));
    const __m256d sum_ge = _mm256_cmp_pd(_mm256_and_pd(sum, abs_mask),
                                         _mm256_and_pd(x, abs_mask), _CMP_GE_OQ);
    const __m256d corr_sum_big = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
    const __m256d corr_x_big = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(corr_x_big, corr_sum_big, sum_ge));
    sum = t;
  }
};

StandardSums score_standard_avx2(const TrialBlock& block, const Vec3& a,
                                 const Vec3& b) {
  const double base0 = -a.dot(b);
  const Vec3 c = a.cross(b);
  const double delta[4] = {0.0, -c.x, -c.y, -c.z};

  VecKahan vlane[4];
  const __m256d base_v[4] = {_mm256_set1_pd(base0), _mm256_setzero_pd(),
                             _mm256_setzero_pd(), _mm256_setzero_pd()};
  const __m256d delta_v[4] = {_mm256_set1_pd(delta[0]), _mm256_set1_pd(delta[1]),
                              _mm256_set1_pd(delta[2]), _mm256_set1_pd(delta[3])};

  StandardSums sums;
  const std::size_t m = block.size();
  std::size_t t = 0;
  for (; t + 4 <= m; t += 4) {
    const __m256d lam = lambda_as_pd(&block.lambda[t]);
    for (int comp = 0; comp < 4; ++comp) {
      vlane[comp].add(_mm256_add_pd(base_v[comp], _mm256_mul_pd(lam, delta_v[comp])));
    }
    sums.lambda_sum += block.lambda[t] + block.lambda[t + 1] +
                       block.lambda[t + 2] + block.lambda[t + 3];
  }

  // Unpack vector lanes into the four Kahan lanes of the reference layout.
  EvenKahan lane[4];
  for (int comp = 0; comp < 4; ++comp) {
    alignas(32) double s[4], co[4];
    _mm256_store_pd(s, vlane[comp].sum);
    _mm256_store_pd(co, vlane[comp].comp);
    for (int l = 0; l < 4; ++l) {
      lane[l].sum[comp] = s[l];
      lane[l].comp[comp] = co[l];
    }
  }

  for (; t < m; ++t) {
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

inline __m256d dot4(__m256d sx, __m256d sy, __m256d sz, const Vec3& d) {
  return _mm256_add_pd(
      _mm256_add_pd(_mm256_mul_pd(sx, _mm256_set1_pd(d.x)),
                    _mm256_mul_pd(sy, _mm256_set1_pd(d.y))),
      _mm256_mul_pd(sz, _mm256_set1_pd(d.z)));
}

SignSums score_sign_avx2(const TrialBlock& block, const Vec3& a, const Vec3& b) {
  SignSums sums;
  const std::size_t m = block.size();
  const __m256d zero = _mm256_setzero_pd();

  std::size_t t = 0;
  for (; t + 4 <= m; t += 4) {
    const __m256d sx = _mm256_loadu_pd(&block.sx[t]);
    const __m256d sy = _mm256_loadu_pd(&block.sy[t]);
    const __m256d sz = _mm256_loadu_pd(&block.sz[t]);
    const __m256d da = dot4(sx, sy, sz, a);
    const __m256d db = dot4(sx, sy, sz, b);

    const int bits_a = _mm256_movemask_pd(_mm256_cmp_pd(da, zero, _CMP_GE_OQ));
    const int bits_b = _mm256_movemask_pd(_mm256_cmp_pd(db, zero, _CMP_LE_OQ));
    sums.product_sum += 4 - 2 * std::popcount(static_cast<unsigned>(bits_a ^ bits_b));
    sums.a_sum += 2 * std::popcount(static_cast<unsigned>(bits_a)) - 4;
    sums.b_sum += 2 * std::popcount(static_cast<unsigned>(bits_b)) - 4;
    sums.ties_a += std::popcount(static_cast<unsigned>(
        _mm256_movemask_pd(_mm256_cmp_pd(da, zero, _CMP_EQ_OQ))));
    sums.ties_b += std::popcount(static_cast<unsigned>(
        _mm256_movemask_pd(_mm256_cmp_pd(db, zero, _CMP_EQ_OQ))));
  }

  for (; t < m; ++t) {
    const double da = (block.sx[t] * a.x + block.sy[t] * a.y) + block.sz[t] * a.z;
    const double db = (block.sx[t] * b.x + block.sy[t] * b.y) + block.sz[t] * b.z;
    const int sa = (da >= 0.0) ? +1 : -1;
    const int sb = (db <= 0.0) ? +1 : -1;
    sums.product_sum += sa * sb;
    sums.a_sum += sa;
    sums.b_sum += sb;
    sums.ties_a += (da == 0.0);
    sums.ties_b += (db == 0.0);
  }
  sums.count = static_cast<std::int64_t>(m);
  return sums;
}

ChshSums score_chsh_avx2(const TrialBlock& block, const Vec3& a,
                         const Vec3& a_prime, const Vec3& b,
                         const Vec3& b_prime) {
  ChshSums sums;
  const std::size_t m = block.size();
  const __m256d zero = _mm256_setzero_pd();

  const auto pair_update = [](SignSums& p, unsigned bits_s, unsigned bits_t,
                              unsigned ties_s, unsigned ties_t) {
    p.product_sum += 4 - 2 * std::popcount(bits_s ^ bits_t);
    p.a_sum += 2 * std::popcount(bits_s) - 4;
    p.b_sum += 2 * std::popcount(bits_t) - 4;
    p.ties_a += std::popcount(ties_s);
    p.ties_b += std::popcount(ties_t);
  };

  std::size_t t = 0;
  for (; t + 4 <= m; t += 4) {
    const __m256d sx = _mm256_loadu_pd(&block.sx[t]);
    const __m256d sy = _mm256_loadu_pd(&block.sy[t]);
    const __m256d sz = _mm256_loadu_pd(&block.sz[t]);
    const __m256d da = dot4(sx, sy, sz, a);
    const __m256d dap = dot4(sx, sy, sz, a_prime);
    const __m256d db = dot4(sx, sy, sz, b);
    const __m256d dbp = dot4(sx, sy, sz, b_prime);

    const auto ge_bits = [&](const __m256d& d) {
      return static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(d, zero, _CMP_GE_OQ)));
    };
    const auto le_bits = [&](const __m256d& d) {
      return static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(d, zero, _CMP_LE_OQ)));
    };
    const auto eq_bits = [&](const __m256d& d) {
      return static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(d, zero, _CMP_EQ_OQ)));
    };

    const unsigned ba = ge_bits(da), bap = ge_bits(dap);
    const unsigned bb = le_bits(db), bbp = le_bits(dbp);
    const unsigned ea = eq_bits(da), eap = eq_bits(dap);
    const unsigned eb = eq_bits(db), ebp = eq_bits(dbp);

    // combo/2 equals A.B when B == B', otherwise A'.B
    const unsigned same_b = ~(bb ^ bbp) & 0xFu;
    const unsigned mismatch = (same_b & (ba ^ bb)) | (~same_b & (bap ^ bb) & 0xFu);
    sums.combo_sum += 2 * (4 - 2 * std::popcount(mismatch & 0xFu));
    sums.lambda_sum += block.lambda[t] + block.lambda[t + 1] + block.lambda[t + 2] +
                       block.lambda[t + 3];

    pair_update(sums.pair[0], ba, bb, ea, eb);
    pair_update(sums.pair[1], ba, bbp, ea, ebp);
    pair_update(sums.pair[2], bap, bb, eap, eb);
    pair_update(sums.pair[3], bap, bbp, eap, ebp);
  }

  for (; t < m; ++t) {
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
    const int tt2[4] = {sb, sbp, sb, sbp};
    for (int p = 0; p < 4; ++p) {
      sums.pair[p].product_sum += ss[p] * tt2[p];
      sums.pair[p].a_sum += ss[p];
      sums.pair[p].b_sum += tt2[p];
      sums.pair[p].ties_a += (dots[p] == 0.0);
      sums.pair[p].ties_b += (dotb[p] == 0.0);
    }
  }

  sums.count = static_cast<std::int64_t>(m);
  for (int p = 0; p < 4; ++p) sums.pair[p].count = static_cast<std::int64_t>(m);
  return sums;
}

}  // namespace

namespace detail {

const Backend* avx2_backend_impl() {
  static const Backend backend = {
      "avx2", generate_avx2, score_standard_avx2, score_sign_avx2, score_chsh_avx2,
  };
  return &backend;
}

}  // namespace detail
}  // namespace spincorr::kernels

#else  // non-x86 build: no AVX2 implementation

namespace spincorr::kernels::detail {
const Backend* avx2_backend_impl() { return nullptr; }
}  // namespace spincorr::kernels::detail

#endif
