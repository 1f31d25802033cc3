#ifndef DAMPEDWAVE_KERNELS_HPP
#define DAMPEDWAVE_KERNELS_HPP

// Dense double-precision inner loops used by the solver: reductions,
// pointwise updates, the spectral two-component rotation and power-sum
// evaluation. A scalar reference implementation always exists; SIMD
// variants (AVX2/FMA on x86-64) are selected at runtime and are
// equivalence-tested against the scalar one.

#include <cstddef>
#include <cstdlib>
#include <new>
#include <string>
#include <vector>

namespace dampedwave::kernels {

// 64-byte aligned storage for all field buffers. Keeps FFTW and the wide
// loads/stores on one allocation discipline.
template <class T>
struct AlignedAlloc {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAlloc() noexcept = default;
  template <class U>
  AlignedAlloc(const AlignedAlloc<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n == 0) return nullptr;
    void* p = std::aligned_alloc(alignment, ((n * sizeof(T) + alignment - 1) / alignment) * alignment);
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAlloc<U>&) const noexcept { return true; }
};

using buffer = std::vector<double, AlignedAlloc<double>>;

// One term of a power sum. The odd form is coeff * s * |s|^(exponent - 1),
// the even form coeff * |s|^exponent; both return 0 at s = 0 for any
// exponent >= 1. exponent_int caches the exponent when it is an exact
// integer in [1, 64] (-1 otherwise), which selects the multiply-only path.
struct PowerSumTerm {
  double coeff;
  double exponent;
  int exponent_int;
};

PowerSumTerm make_power_sum_term(double coeff, double exponent);

struct KernelTable {
  const char* name;

  // reductions
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*weighted_sum_sq)(const double* w, const double* x, std::size_t n);   // sum w x^2
  double (*weighted_dot3)(const double* w, const double* x, const double* y,
                          std::size_t n);                                       // sum w x y
  double (*max_abs)(const double* x, std::size_t n);
  bool (*all_finite)(const double* x, std::size_t n);

  // pointwise updates
  void (*axpy)(double a, const double* x, double* y, std::size_t n);            // y += a x
  void (*scale)(double a, double* x, std::size_t n);                            // x *= a
  void (*mul)(const double* a, const double* x, double* out, std::size_t n);    // out = a.x
  void (*mul_add)(const double* a, const double* x, const double* b,
                  const double* y, double* out, std::size_t n);                 // out = a.x + b.y

  // two-component rotation with per-element coefficients:
  //   u' = c u + s v,  v' = -t u + c v   (in place)
  void (*rotate2)(const double* c, const double* s, const double* t,
                  double* u, double* v, std::size_t n);

  // power sums over an array of arguments
  void (*power_sum_odd)(const PowerSumTerm* terms, int nterms,
                        const double* s, double* out, std::size_t n);
  void (*power_sum_even)(const PowerSumTerm* terms, int nterms,
                         const double* s, double* out, std::size_t n);
};

const KernelTable& scalar_table();

// AVX2+FMA table, or nullptr when the CPU lacks the extensions.
const KernelTable* avx2_table();

// Table used by the rest of the code. Defaults to the widest available
// backend; DAMPEDWAVE_KERNELS=scalar|avx2 overrides, as does select().
const KernelTable& active();
void select(const std::string& name);   // "auto", "scalar", "avx2"
std::vector<const KernelTable*> available_tables();

}  // namespace dampedwave::kernels

#endif
