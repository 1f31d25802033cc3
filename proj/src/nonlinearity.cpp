#include "dampedwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dampedwave {

NonlinearitySpec NonlinearitySpec::make(std::vector<PowerTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("nonlinearity: empty term list; use zero()");
  for (const auto& t : terms) {
    if (!(t.lambda > 0.0) || !std::isfinite(t.lambda))
      throw std::invalid_argument("nonlinearity: lambda must be positive and finite");
    if (!(t.alpha >= 1.0) || !std::isfinite(t.alpha))
      throw std::invalid_argument("nonlinearity: alpha must be >= 1 and finite");
  }
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& a, const PowerTerm& b) { return a.alpha < b.alpha; });
  if (!(terms.front().alpha > 1.0))
    throw std::invalid_argument("nonlinearity: smallest alpha must exceed 1 (epsilon = p0 - 1 > 0)");

  NonlinearitySpec s;
  s.terms_ = std::move(terms);
  s.p0_ = s.terms_.front().alpha;
  s.p_ = s.terms_.back().alpha;
  for (const auto& t : s.terms_) {
    s.f_terms_.push_back(kernels::make_power_sum_term(t.lambda, t.alpha));
    s.F_terms_.push_back(kernels::make_power_sum_term(t.lambda / (t.alpha + 1.0), t.alpha + 1.0));
  }
  return s;
}

NonlinearitySpec NonlinearitySpec::zero() { return NonlinearitySpec{}; }

double NonlinearitySpec::f(double s) const {
  double out = 0.0;
  if (!terms_.empty())
    kernels::scalar_table().power_sum_odd(f_terms_.data(), static_cast<int>(f_terms_.size()),
                                          &s, &out, 1);
  return out;
}

double NonlinearitySpec::F(double s) const {
  double out = 0.0;
  if (!terms_.empty())
    kernels::scalar_table().power_sum_even(F_terms_.data(), static_cast<int>(F_terms_.size()),
                                           &s, &out, 1);
  return out;
}

void NonlinearitySpec::f_array(const double* s, double* out, std::size_t n) const {
  if (terms_.empty()) {
    std::fill(out, out + n, 0.0);
    return;
  }
  kernels::active().power_sum_odd(f_terms_.data(), static_cast<int>(f_terms_.size()), s, out, n);
}

void NonlinearitySpec::F_array(const double* s, double* out, std::size_t n) const {
  if (terms_.empty()) {
    std::fill(out, out + n, 0.0);
    return;
  }
  kernels::active().power_sum_even(F_terms_.data(), static_cast<int>(F_terms_.size()), s, out, n);
}

double NonlinearitySpec::lipschitz_coeff() const {
  double c = 0.0;
  for (const auto& t : terms_) c += t.lambda * t.alpha;
  return c;
}

HypothesisReport hypothesis_report(const NonlinearitySpec& spec, int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("hypothesis_report: d must be 1, 2 or 3");
  HypothesisReport r;
  r.theorem_dimension = (d >= 3);
  r.p = spec.p();
  r.p0 = spec.p0();
  r.epsilon = spec.epsilon();
  if (d >= 3) {
    const double dd = static_cast<double>(d);
    r.subcritical_i_ii = spec.p() < (dd + 2.0) / (dd - 2.0);
    r.part_iii_applicable = spec.p() <= dd / (dd - 2.0);
  } else {
    r.subcritical_i_ii = true;
    r.part_iii_applicable = true;
  }
  return r;
}

}  // namespace dampedwave
