#ifndef DAMPEDWAVE_NONLINEARITY_HPP
#define DAMPEDWAVE_NONLINEARITY_HPP

// Power-sum nonlinearity f(s) = sum_i lambda_i s |s|^(alpha_i - 1) with
// antiderivative F(s) = sum_i lambda_i |s|^(alpha_i + 1) / (alpha_i + 1),
// plus the derived growth constants (p, p0, epsilon) the estimates use:
// p = largest exponent, p0 = smallest, epsilon = p0 - 1, so that
// s f(s) >= (2 + epsilon) F(s) holds termwise with equality on the lowest
// term.

#include <cstddef>
#include <vector>

#include "dampedwave/kernels.hpp"

namespace dampedwave {

struct PowerTerm {
  double lambda;  // > 0
  double alpha;   // >= 1
};

class NonlinearitySpec {
 public:
  // Validates and sorts the terms by exponent. Throws std::invalid_argument
  // on lambda <= 0, alpha < 1, or smallest alpha <= 1 (epsilon would vanish).
  static NonlinearitySpec make(std::vector<PowerTerm> terms);

  // The zero map (f == 0); p = p0 = 1, epsilon = 0.
  static NonlinearitySpec zero();

  bool is_zero() const { return terms_.empty(); }
  const std::vector<PowerTerm>& terms() const { return terms_; }

  double p() const { return p_; }
  double p0() const { return p0_; }
  double epsilon() const { return p0_ - 1.0; }

  double f(double s) const;
  double F(double s) const;

  // Array forms, routed through the active kernel backend.
  void f_array(const double* s, double* out, std::size_t n) const;
  void F_array(const double* s, double* out, std::size_t n) const;

  // C such that |f(s1) - f(s2)| <= C |s1 - s2| (1 + |s1|^(p-1) + |s2|^(p-1));
  // the mean-value bound gives C = sum_i lambda_i alpha_i.
  double lipschitz_coeff() const;

 private:
  std::vector<PowerTerm> terms_;
  std::vector<kernels::PowerSumTerm> f_terms_;
  std::vector<kernels::PowerSumTerm> F_terms_;
  double p_ = 1.0;
  double p0_ = 1.0;
};

struct HypothesisReport {
  bool theorem_dimension;    // d >= 3 (the theorems assume it)
  bool subcritical_i_ii;     // p < (d+2)/(d-2), parts (i)-(ii)
  bool part_iii_applicable;  // p <= d/(d-2), part (iii)
  double p;
  double p0;
  double epsilon;
};

// d in {1,2,3} (throws otherwise). For d < 3 the theorems do not apply:
// theorem_dimension = false and both exponent gates are reported true
// (no growth restriction below dimension 3).
HypothesisReport hypothesis_report(const NonlinearitySpec& spec, int d);

}  // namespace dampedwave

#endif
