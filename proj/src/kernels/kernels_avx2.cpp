// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be reached through the runtime dispatch in
// dispatch.cpp, which checks CPU support first.
//
// Reductions use one 4-lane accumulator and a horizontal add, so they may
// differ from the scalar reference by reassociation roundoff; the
// equivalence tests bound that. Power sums take the vector path only when
// every exponent is a small integer (multiply-only); otherwise the whole
// call falls back to the scalar reference.

#include "dampedwave/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace dampedwave::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

double k_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

double k_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double k_sum_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * x[i];
  return r;
}

double k_weighted_sum_sq(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d wv = _mm256_mul_pd(_mm256_loadu_pd(w + i), v);
    acc = _mm256_fmadd_pd(wv, v, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += w[i] * x[i] * x[i];
  return r;
}

double k_weighted_dot3(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += w[i] * x[i] * y[i];
  return r;
}

double k_max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), kAbsMask));
  __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double r = std::max(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

bool k_all_finite(const double* x, std::size_t n) {
  // x - x == 0 exactly when x is finite (inf gives NaN, NaN propagates)
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d d = _mm256_sub_pd(v, v);
    __m256d ok = _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_EQ_OQ);
    if (_mm256_movemask_pd(ok) != 0xf) return false;
  }
  for (; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

void k_axpy(double a, const double* x, double* y, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void k_scale(double a, double* x, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void k_mul(const double* a, const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a[i] * x[i];
}

void k_mul_add(const double* a, const double* x, const double* b, const double* y,
               double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d by = _mm256_mul_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(y + i));
    __m256d r = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i), by);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = a[i] * x[i] + b[i] * y[i];
}

void k_rotate2(const double* c, const double* s, const double* t, double* u, double* v,
               std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cv = _mm256_loadu_pd(c + i);
    __m256d ui = _mm256_loadu_pd(u + i);
    __m256d vi = _mm256_loadu_pd(v + i);
    __m256d un = _mm256_fmadd_pd(cv, ui, _mm256_mul_pd(_mm256_loadu_pd(s + i), vi));
    __m256d vn = _mm256_fmsub_pd(cv, vi, _mm256_mul_pd(_mm256_loadu_pd(t + i), ui));
    _mm256_storeu_pd(u + i, un);
    _mm256_storeu_pd(v + i, vn);
  }
  for (; i < n; ++i) {
    double ui = u[i], vi = v[i];
    u[i] = c[i] * ui + s[i] * vi;
    v[i] = c[i] * vi - t[i] * ui;
  }
}

// |s|^k with the same binary-exponentiation multiply tree as the scalar path
inline __m256d pow_int_v(__m256d a, int k) {
  __m256d r = _mm256_set1_pd(1.0), b = a;
  while (k > 0) {
    if (k & 1) r = _mm256_mul_pd(r, b);
    b = _mm256_mul_pd(b, b);
    k >>= 1;
  }
  return r;
}

inline bool all_integer_exponents(const PowerSumTerm* terms, int nterms) {
  for (int t = 0; t < nterms; ++t)
    if (terms[t].exponent_int < 1) return false;
  return true;
}

void k_power_sum_odd(const PowerSumTerm* terms, int nterms, const double* s, double* out,
                     std::size_t n) {
  if (!all_integer_exponents(terms, nterms)) {
    scalar_table().power_sum_odd(terms, nterms, s, out, n);
    return;
  }
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d sv = _mm256_loadu_pd(s + i);
    __m256d av = _mm256_and_pd(sv, kAbsMask);
    __m256d acc = _mm256_setzero_pd();
    for (int t = 0; t < nterms; ++t) {
      __m256d mag = pow_int_v(av, terms[t].exponent_int - 1);
      acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_set1_pd(terms[t].coeff), sv), mag, acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  if (i < n) scalar_table().power_sum_odd(terms, nterms, s + i, out + i, n - i);
}

void k_power_sum_even(const PowerSumTerm* terms, int nterms, const double* s, double* out,
                      std::size_t n) {
  if (!all_integer_exponents(terms, nterms)) {
    scalar_table().power_sum_even(terms, nterms, s, out, n);
    return;
  }
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d av = _mm256_and_pd(_mm256_loadu_pd(s + i), kAbsMask);
    __m256d acc = _mm256_setzero_pd();
    for (int t = 0; t < nterms; ++t) {
      __m256d mag = pow_int_v(av, terms[t].exponent_int);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(terms[t].coeff), mag, acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  if (i < n) scalar_table().power_sum_even(terms, nterms, s + i, out + i, n - i);
}

const KernelTable g_avx2 = {
    "avx2",
    k_sum,
    k_dot,
    k_sum_sq,
    k_weighted_sum_sq,
    k_weighted_dot3,
    k_max_abs,
    k_all_finite,
    k_axpy,
    k_scale,
    k_mul,
    k_mul_add,
    k_rotate2,
    k_power_sum_odd,
    k_power_sum_even,
};

}  // namespace

const KernelTable& avx2_impl_table() { return g_avx2; }

}  // namespace dampedwave::kernels::detail

#endif  // x86-64
