// Copyright 2026 The hetnet-ee Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 + FMA variants. exp/log follow the Cephes double-precision rational
// approximations, which keeps them within a couple of ulps of libm.

#include <immintrin.h>

#include <array>
#include <cmath>

#include "hetnet/kernels.hpp"

namespace hetnet::kernels::avx2 {

namespace {

inline __m256d splat(double x) { return _mm256_set1_pd(x); }

inline PowerColumns cols_offset(const PowerColumns& c, std::size_t i) {
  return {c.u_radius + i, c.u_los + i, c.normal + i, c.u_fading + i,
          c.distance + i, c.link + i, c.mean_power + i, c.inst_power + i};
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

__m256d exp_pd(__m256d x) {
  const __m256d lo_limit = splat(-708.3964185322641);
  const __m256d hi_limit = splat(709.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo_limit), hi_limit);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, splat(1.4426950408889634073599)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, splat(6.93145751953125e-1), x);
  r = _mm256_fnmadd_pd(n, splat(1.42860682030941723212e-6), r);

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_fmadd_pd(splat(1.26177193074810590878e-4), rr, splat(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, rr, splat(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(splat(3.00198505138664455042e-6), rr, splat(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, rr, splat(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, rr, splat(2.00000000000000000009e0));
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(splat(2.0), e, splat(1.0));

  // 2^n through the exponent field; the clamp keeps n + 1023 in [1, 2046].
  const __m256i n64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52));
  return _mm256_andnot_pd(underflow, _mm256_mul_pd(e, scale));
}

// Natural log for positive normal inputs.
__m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  // Exponent to double via the 2^52 magic constant; biased is in [1, 2046].
  const __m256d magic = splat(4503599627370496.0);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
  e = _mm256_sub_pd(e, splat(1022.0));
  // Mantissa in [0.5, 1).
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
                                                  _mm256_set1_epi64x(0x3fe0000000000000LL)));
  const __m256d small = _mm256_cmp_pd(m, splat(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, splat(1.0)));
  m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), splat(1.0));

  const __m256d z = _mm256_mul_pd(m, m);
  __m256d p = _mm256_fmadd_pd(splat(1.01875663804580931796e-4), m, splat(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, m, splat(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, m, splat(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, m, splat(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, m, splat(7.70838733755885391666e0));
  __m256d q = _mm256_add_pd(m, splat(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, m, splat(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, m, splat(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, m, splat(7.11544750618937806428e1));
  q = _mm256_fmadd_pd(q, m, splat(2.31251620126765762145e1));

  __m256d y = _mm256_mul_pd(m, _mm256_mul_pd(z, _mm256_div_pd(p, q)));
  y = _mm256_fmadd_pd(e, splat(-2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(splat(0.5), z, y);
  __m256d r = _mm256_add_pd(m, y);
  return _mm256_fmadd_pd(e, splat(0.693359375), r);
}

// Coefficients of the small-argument series of the exponential moments,
// highest order first for Horner evaluation.
struct SeriesCoeffs {
  std::array<double, 13> los{};   // sum_{n=2}^{14} (-1)^n (n-1) u^(n-2) / n!
  std::array<double, 13> nlos{};  // sum_{n=3}^{15} (-1)^(n+1) (n-1) u^(n-3) / n!
};

const SeriesCoeffs& series() {
  static const SeriesCoeffs c = [] {
    SeriesCoeffs s;
    double fact = 1.0;
    for (int n = 1; n <= 15; ++n) {
      fact *= n;
      if (n >= 2 && n <= 14) s.los[14 - n] = ((n % 2 == 0) ? 1.0 : -1.0) * (n - 1) / fact;
      if (n >= 3) s.nlos[15 - n] = ((n % 2 == 1) ? 1.0 : -1.0) * (n - 1) / fact;
    }
    return s;
  }();
  return c;
}

inline __m256d horner(const std::array<double, 13>& c, __m256d u) {
  __m256d acc = splat(c[0]);
  for (std::size_t i = 1; i < c.size(); ++i) acc = _mm256_fmadd_pd(acc, u, splat(c[i]));
  return acc;
}

inline __m256d los_prob(const LosShape& shape, __m256d d) {
  switch (shape.kind) {
    case LosShape::Kind::Exponential:
      return exp_pd(_mm256_mul_pd(splat(-shape.kappa), d));
    case LosShape::Kind::Linear:
      return _mm256_max_pd(_mm256_sub_pd(splat(1.0), _mm256_div_pd(d, splat(shape.d1))), _mm256_setzero_pd());
    case LosShape::Kind::TwoPiece: {
      const __m256d inner = _mm256_min_pd(
          _mm256_max_pd(_mm256_fnmadd_pd(splat(5.0), exp_pd(_mm256_div_pd(splat(-shape.d0), d)), splat(1.0)),
                        _mm256_setzero_pd()),
          splat(1.0));
      const __m256d outer =
          _mm256_mul_pd(splat(shape.p1), exp_pd(_mm256_div_pd(_mm256_sub_pd(splat(shape.d1), d), splat(shape.d1))));
      const __m256d near = _mm256_cmp_pd(d, splat(shape.d1), _CMP_LE_OQ);
      return _mm256_blendv_pd(outer, inner, near);
    }
    case LosShape::Kind::AlwaysNlos:
      break;
  }
  return _mm256_setzero_pd();
}

// 1 - e^-u; a Taylor series below 0.1 keeps small arguments exact.
inline __m256d one_minus_exp_neg(__m256d u) {
  static const std::array<double, 14> c = [] {
    std::array<double, 14> out{};  // (-1)^(n+1) / n!, highest order first
    double fact = 1.0;
    for (int n = 1; n <= 14; ++n) {
      fact *= n;
      out[14 - n] = ((n % 2 == 1) ? 1.0 : -1.0) / fact;
    }
    return out;
  }();
  __m256d series = splat(0.0);
  for (double coef : c) series = _mm256_fmadd_pd(series, u, splat(coef));
  series = _mm256_mul_pd(series, u);
  const __m256d direct = _mm256_sub_pd(splat(1.0), exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), u)));
  return _mm256_blendv_pd(direct, series, _mm256_cmp_pd(u, splat(0.1), _CMP_LT_OQ));
}

// Blocked share computed directly, mirroring the scalar model.
inline __m256d nlos_prob(const LosShape& shape, __m256d d) {
  switch (shape.kind) {
    case LosShape::Kind::Exponential:
      return one_minus_exp_neg(_mm256_mul_pd(splat(shape.kappa), d));
    case LosShape::Kind::Linear:
      return _mm256_min_pd(_mm256_div_pd(d, splat(shape.d1)), splat(1.0));
    case LosShape::Kind::TwoPiece: {
      const __m256d inner = _mm256_min_pd(
          _mm256_mul_pd(splat(5.0), exp_pd(_mm256_div_pd(splat(-shape.d0), d))), splat(1.0));
      const __m256d outer = _mm256_fnmadd_pd(
          splat(shape.p1), exp_pd(_mm256_div_pd(_mm256_sub_pd(splat(shape.d1), d), splat(shape.d1))), splat(1.0));
      const __m256d near = _mm256_cmp_pd(d, splat(shape.d1), _CMP_LE_OQ);
      return _mm256_blendv_pd(outer, inner, near);
    }
    case LosShape::Kind::AlwaysNlos:
      break;
  }
  return splat(1.0);
}

inline __m256d link_prob(const LosShape& shape, Link link, __m256d d) {
  return link == Link::LoS ? los_prob(shape, d) : nlos_prob(shape, d);
}

// Truncated first moment, Exponential / Linear / AlwaysNlos only.
inline __m256d link_moment_pd(const LosShape& shape, Link link, __m256d x) {
  const __m256d half_x2 = _mm256_mul_pd(splat(0.5), _mm256_mul_pd(x, x));
  switch (shape.kind) {
    case LosShape::Kind::Exponential: {
      if (shape.kappa == 0.0) return link == Link::LoS ? half_x2 : _mm256_setzero_pd();
      const double inv_k2 = 1.0 / (shape.kappa * shape.kappa);
      const __m256d u = _mm256_mul_pd(splat(shape.kappa), x);
      const __m256d u2 = _mm256_mul_pd(u, u);
      const __m256d direct_los = _mm256_fnmadd_pd(exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), u)),
                                                  _mm256_add_pd(splat(1.0), u), splat(1.0));
      __m256d direct, small;
      if (link == Link::LoS) {
        direct = direct_los;
        small = _mm256_mul_pd(u2, horner(series().los, u));
      } else {
        direct = _mm256_sub_pd(_mm256_mul_pd(splat(0.5), u2), direct_los);
        small = _mm256_mul_pd(_mm256_mul_pd(u2, u), horner(series().nlos, u));
      }
      const __m256d use_series = _mm256_cmp_pd(u, splat(0.1), _CMP_LT_OQ);
      return _mm256_mul_pd(_mm256_blendv_pd(direct, small, use_series), splat(inv_k2));
    }
    case LosShape::Kind::Linear: {
      const __m256d d1 = splat(shape.d1);
      const __m256d xe = _mm256_min_pd(x, d1);
      const __m256d xe3 = _mm256_mul_pd(_mm256_mul_pd(xe, xe), xe);
      const __m256d inv3d1 = splat(1.0 / (3.0 * shape.d1));
      const __m256d los_part = _mm256_fnmadd_pd(xe3, inv3d1, _mm256_mul_pd(splat(0.5), _mm256_mul_pd(xe, xe)));
      if (link == Link::LoS) return los_part;
      // Below d1 the NLoS moment is x^3/(3 d1); the difference form cancels there.
      const __m256d near = _mm256_cmp_pd(x, d1, _CMP_LE_OQ);
      return _mm256_blendv_pd(_mm256_sub_pd(half_x2, los_part), _mm256_mul_pd(xe3, inv3d1), near);
    }
    case LosShape::Kind::AlwaysNlos:
      return link == Link::LoS ? _mm256_setzero_pd() : half_x2;
    case LosShape::Kind::TwoPiece:
      break;
  }
  return _mm256_setzero_pd();
}

}  // namespace

double density_sum(const LosShape& shape, Link link, const double* scale, const double* coef, std::size_t n,
                   double t) {
  const __m256d tv = splat(t);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_mul_pd(_mm256_loadu_pd(scale + i), tv);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(coef + i), link_prob(shape, link, d), acc);
  }
  double sum = hsum(acc);
  if (i < n) {
    alignas(32) double sc[4] = {1.0, 1.0, 1.0, 1.0}, cf[4] = {0.0, 0.0, 0.0, 0.0}, out[4];
    for (std::size_t j = 0; i + j < n; ++j) {
      sc[j] = scale[i + j];
      cf[j] = coef[i + j];
    }
    const __m256d d = _mm256_mul_pd(_mm256_load_pd(sc), tv);
    _mm256_store_pd(out, _mm256_mul_pd(_mm256_load_pd(cf), link_prob(shape, link, d)));
    for (std::size_t j = 0; i + j < n; ++j) sum += out[j];
  }
  return sum;
}

double moment_sum(const LosShape& shape, Link link, const double* scale, const double* weight, std::size_t n,
                  double t) {
  if (shape.kind == LosShape::Kind::TwoPiece) return scalar::moment_sum(shape, link, scale, weight, n, t);
  const __m256d tv = splat(t);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_mul_pd(_mm256_loadu_pd(scale + i), tv);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(weight + i), link_moment_pd(shape, link, x), acc);
  }
  double sum = hsum(acc);
  if (i < n) {
    alignas(32) double sc[4] = {0.0, 0.0, 0.0, 0.0}, w[4] = {0.0, 0.0, 0.0, 0.0}, out[4];
    for (std::size_t j = 0; i + j < n; ++j) {
      sc[j] = scale[i + j];
      w[j] = weight[i + j];
    }
    const __m256d x = _mm256_mul_pd(_mm256_load_pd(sc), tv);
    _mm256_store_pd(out, _mm256_mul_pd(_mm256_load_pd(w), link_moment_pd(shape, link, x)));
    for (std::size_t j = 0; i + j < n; ++j) sum += out[j];
  }
  return sum;
}

void received_powers(const LosShape& shape, const TierDraw& tier, const PowerColumns& cols, std::size_t n) {
  const __m256d radius = splat(tier.radius);
  const __m256d log_b_n = splat(tier.log_b[0]), log_b_l = splat(tier.log_b[1]);
  const __m256d sig_n = splat(tier.log_sigma[0]), sig_l = splat(tier.log_sigma[1]);
  const __m256d alpha_n = splat(tier.alpha[0]), alpha_l = splat(tier.alpha[1]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_mul_pd(radius, _mm256_sqrt_pd(_mm256_loadu_pd(cols.u_radius + i)));
    const __m256d is_los = _mm256_cmp_pd(_mm256_loadu_pd(cols.u_los + i), los_prob(shape, d), _CMP_LT_OQ);
    const __m256d log_b = _mm256_blendv_pd(log_b_n, log_b_l, is_los);
    const __m256d sig = _mm256_blendv_pd(sig_n, sig_l, is_los);
    const __m256d alpha = _mm256_blendv_pd(alpha_n, alpha_l, is_los);
    // Same operation order as the scalar reference: (ln B + s z) - alpha ln d.
    const __m256d expo =
        _mm256_sub_pd(_mm256_add_pd(log_b, _mm256_mul_pd(sig, _mm256_loadu_pd(cols.normal + i))),
                      _mm256_mul_pd(alpha, log_pd(d)));
    const __m256d mean = exp_pd(expo);
    const __m256d fade = _mm256_sub_pd(_mm256_setzero_pd(), log_pd(_mm256_loadu_pd(cols.u_fading + i)));
    _mm256_storeu_pd(cols.distance + i, d);
    _mm256_storeu_pd(cols.mean_power + i, mean);
    _mm256_storeu_pd(cols.inst_power + i, _mm256_mul_pd(mean, fade));
    const int mask = _mm256_movemask_pd(is_los);
    for (int j = 0; j < 4; ++j) cols.link[i + j] = static_cast<std::uint8_t>((mask >> j) & 1);
  }
  if (i < n) scalar::received_powers(shape, tier, cols_offset(cols, i), n - i);
}

}  // namespace hetnet::kernels::avx2
