// AVX2+FMA kernel variant. Compiled with -mavx2 -mfma; only reachable
// through the dispatch table when the CPU reports both features.
//
// exp/log cores are the classic Cephes double-precision rational
// approximations (Moshier), ~1-2 ulp on the reduced range. The accuracy
// tests pin them against std::exp / std::log.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "mirt/kernels.hpp"

namespace mirt::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// exp(x), Cephes exp.c scheme: x = n ln2 + r, e^r by a (2,3) rational in r^2.
// Inputs outside [-708, 709] flush to 0 / +inf.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d lo = _mm256_set1_pd(-708.0);

  const __m256d over = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d pn = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(pn, c1, x);
  r = _mm256_fnmadd_pd(pn, c2, r);
  const __m256d r2 = _mm256_mul_pd(r, r);

  __m256d num = _mm256_fmadd_pd(p0, r2, p1);
  num = _mm256_fmadd_pd(num, r2, p2);
  num = _mm256_mul_pd(num, r);
  __m256d den = _mm256_fmadd_pd(q0, r2, q1);
  den = _mm256_fmadd_pd(den, r2, q2);
  den = _mm256_fmadd_pd(den, r2, q3);

  __m256d e = _mm256_div_pd(num, _mm256_sub_pd(den, num));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // scale by 2^n via exponent bits; n is within [-1022, 1023] here
  const __m128i n32 = _mm256_cvtpd_epi32(pn);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i pow2 =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));

  e = _mm256_blendv_pd(e, _mm256_set1_pd(std::numeric_limits<double>::infinity()), over);
  e = _mm256_blendv_pd(e, _mm256_setzero_pd(), under);
  return e;
}

// log(x) for normal positive x, Cephes log.c P/Q branch. Only exercised on
// [1, 2] by log1p below, but correct for any normal double.
inline __m256d log_pd(__m256d x) {
  const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
  const __m256d P0 = _mm256_set1_pd(1.01875663804580931796e-4);
  const __m256d P1 = _mm256_set1_pd(4.97494994976747001425e-1);
  const __m256d P2 = _mm256_set1_pd(4.70579119878881725854e0);
  const __m256d P3 = _mm256_set1_pd(1.44989225341610930846e1);
  const __m256d P4 = _mm256_set1_pd(1.79368678507819816313e1);
  const __m256d P5 = _mm256_set1_pd(7.70838733755885391666e0);
  const __m256d Q0 = _mm256_set1_pd(1.12873587189167450590e1);
  const __m256d Q1 = _mm256_set1_pd(4.52279145837532221105e1);
  const __m256d Q2 = _mm256_set1_pd(8.29875266912776603211e1);
  const __m256d Q3 = _mm256_set1_pd(7.11544750618563894466e1);
  const __m256d Q4 = _mm256_set1_pd(2.31251620126765340583e1);

  // frexp: x = m * 2^e with m in [0.5, 1)
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i biased = _mm256_and_si256(_mm256_srli_epi64(bits, 52),
                                          _mm256_set1_epi64x(0x7FF));
  const __m256i mbits = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FE0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mbits);

  // small nonnegative int64 -> double via mantissa trick
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))),
      magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));

  const __m256d small = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, _mm256_set1_pd(1.0)));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d xa = _mm256_blendv_pd(_mm256_sub_pd(m, one),
                                      _mm256_fmsub_pd(m, _mm256_set1_pd(2.0), one),
                                      small);

  const __m256d z = _mm256_mul_pd(xa, xa);
  __m256d p = _mm256_fmadd_pd(P0, xa, P1);
  p = _mm256_fmadd_pd(p, xa, P2);
  p = _mm256_fmadd_pd(p, xa, P3);
  p = _mm256_fmadd_pd(p, xa, P4);
  p = _mm256_fmadd_pd(p, xa, P5);
  __m256d q = _mm256_add_pd(xa, Q0);
  q = _mm256_fmadd_pd(q, xa, Q1);
  q = _mm256_fmadd_pd(q, xa, Q2);
  q = _mm256_fmadd_pd(q, xa, Q3);
  q = _mm256_fmadd_pd(q, xa, Q4);

  __m256d y = _mm256_mul_pd(_mm256_mul_pd(xa, z), _mm256_div_pd(p, q));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), y);
  __m256d out = _mm256_add_pd(xa, y);
  out = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), out);
  return out;
}

// log1p(t) for t in [0, 1]
inline __m256d log1p01_pd(__m256d t) {
  return log_pd(_mm256_add_pd(t, _mm256_set1_pd(1.0)));
}

inline __m256d sigmoid_pd(__m256d z) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d absz = _mm256_andnot_pd(_mm256_set1_pd(-0.0), z);
  const __m256d t = exp_pd(_mm256_sub_pd(zero, absz));
  const __m256d denom = _mm256_add_pd(one, t);
  const __m256d nonneg = _mm256_cmp_pd(z, zero, _CMP_GE_OQ);
  const __m256d numer = _mm256_blendv_pd(t, one, nonneg);
  return _mm256_div_pd(numer, denom);
}

inline __m256d log_sigmoid_pd(__m256d u) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d absu = _mm256_andnot_pd(_mm256_set1_pd(-0.0), u);
  const __m256d t = exp_pd(_mm256_sub_pd(zero, absu));
  return _mm256_sub_pd(_mm256_min_pd(u, zero), log1p01_pd(t));
}

void a_add(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] += x[i];
}

void a_axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void a_mul(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void a_sub(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

double a_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double a_dot3(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double a_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double a_max(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    m = hmax(acc);
  }
  for (; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

void a_sigmoid(const double* z, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, sigmoid_pd(_mm256_loadu_pd(z + i)));
  if (i < n) {
    double buf[4] = {0, 0, 0, 0}, res[4];
    std::memcpy(buf, z + i, (n - i) * sizeof(double));
    _mm256_storeu_pd(res, sigmoid_pd(_mm256_loadu_pd(buf)));
    std::memcpy(out + i, res, (n - i) * sizeof(double));
  }
}

void a_log_sigmoid(const double* z, double sign, double* out, std::size_t n) {
  const __m256d s = _mm256_set1_pd(sign);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, log_sigmoid_pd(_mm256_mul_pd(s, _mm256_loadu_pd(z + i))));
  }
  if (i < n) {
    double buf[4] = {0, 0, 0, 0}, res[4];
    std::memcpy(buf, z + i, (n - i) * sizeof(double));
    _mm256_storeu_pd(res, log_sigmoid_pd(_mm256_mul_pd(s, _mm256_loadu_pd(buf))));
    std::memcpy(out + i, res, (n - i) * sizeof(double));
  }
}

void a_exp_shift(const double* v, double shift, double* out, std::size_t n) {
  const __m256d sh = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, exp_pd(_mm256_add_pd(_mm256_loadu_pd(v + i), sh)));
  }
  if (i < n) {
    double buf[4] = {0, 0, 0, 0}, res[4];
    std::memcpy(buf, v + i, (n - i) * sizeof(double));
    _mm256_storeu_pd(res, exp_pd(_mm256_add_pd(_mm256_loadu_pd(buf), sh)));
    std::memcpy(out + i, res, (n - i) * sizeof(double));
  }
}

double a_log_sum_exp(const double* v, std::size_t n) {
  const double m = a_max(v, n);
  if (!std::isfinite(m)) return m;
  const __m256d mneg = _mm256_set1_pd(-m);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, exp_pd(_mm256_add_pd(_mm256_loadu_pd(v + i), mneg)));
  }
  double s = hsum(acc);
  if (i < n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    double buf[4] = {ninf, ninf, ninf, ninf}, res[4];
    std::memcpy(buf, v + i, (n - i) * sizeof(double));
    _mm256_storeu_pd(res, exp_pd(_mm256_add_pd(_mm256_loadu_pd(buf), mneg)));
    s += res[0] + res[1] + res[2] + res[3];
  }
  return m + std::log(s);
}

}  // namespace

const Backend& avx2_backend() {
  static const Backend b = {
      "avx2",   a_add,     a_axpy,        a_mul,       a_sub,
      a_dot,    a_dot3,    a_sum,         a_max,       a_sigmoid,
      a_log_sigmoid, a_exp_shift, a_log_sum_exp,
  };
  return b;
}

}  // namespace mirt::kernels

#endif  // x86_64
