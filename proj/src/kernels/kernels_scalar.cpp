// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against; keep them simple and obviously correct.

#include "dampedwave/kernels.hpp"

#include <cmath>

namespace dampedwave::kernels {

PowerSumTerm make_power_sum_term(double coeff, double exponent) {
  PowerSumTerm t{coeff, exponent, -1};
  double r = std::round(exponent);
  if (r == exponent && r >= 1.0 && r <= 64.0) t.exponent_int = static_cast<int>(r);
  return t;
}

namespace {

double k_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double k_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double k_sum_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double k_weighted_sum_sq(const double* w, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * x[i];
  return acc;
}

double k_weighted_dot3(const double* w, const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

double k_max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

bool k_all_finite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

void k_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void k_scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void k_mul(const double* a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * x[i];
}

void k_mul_add(const double* a, const double* x, const double* b, const double* y,
               double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * x[i] + b[i] * y[i];
}

void k_rotate2(const double* c, const double* s, const double* t, double* u, double* v,
               std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double ui = u[i], vi = v[i];
    u[i] = c[i] * ui + s[i] * vi;
    v[i] = c[i] * vi - t[i] * ui;
  }
}

// |s|^k by binary exponentiation, k >= 1
inline double pow_int(double a, int k) {
  double r = 1.0, b = a;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

// coeff * s * |s|^(e-1) for one term
inline double term_odd(const PowerSumTerm& t, double s) {
  if (s == 0.0) return 0.0;
  double a = std::fabs(s);
  double mag;
  if (t.exponent_int >= 1)
    mag = pow_int(a, t.exponent_int - 1);
  else
    mag = std::pow(a, t.exponent - 1.0);
  return t.coeff * s * mag;
}

// coeff * |s|^e for one term
inline double term_even(const PowerSumTerm& t, double s) {
  if (s == 0.0) return 0.0;
  double a = std::fabs(s);
  double mag;
  if (t.exponent_int >= 1)
    mag = pow_int(a, t.exponent_int);
  else
    mag = std::pow(a, t.exponent);
  return t.coeff * mag;
}

void k_power_sum_odd(const PowerSumTerm* terms, int nterms, const double* s, double* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int t = 0; t < nterms; ++t) acc += term_odd(terms[t], s[i]);
    out[i] = acc;
  }
}

void k_power_sum_even(const PowerSumTerm* terms, int nterms, const double* s, double* out,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int t = 0; t < nterms; ++t) acc += term_even(terms[t], s[i]);
    out[i] = acc;
  }
}

const KernelTable g_scalar = {
    "scalar",
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

const KernelTable& scalar_table() { return g_scalar; }

}  // namespace dampedwave::kernels
