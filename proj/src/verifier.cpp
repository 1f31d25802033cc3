#include "dampedwave/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace dampedwave {

namespace {

constexpr double kCMin = 1e-6;
constexpr double kCMax = 1e3;
constexpr int kCGrid = 181;

double c_at(int j) {
  return std::pow(10.0, -6.0 + 9.0 * static_cast<double>(j) / (kCGrid - 1));
}

void require_samples(std::span<const DiagnosticsSample> s, const char* who) {
  if (s.empty()) throw std::invalid_argument(std::string(who) + ": empty sample series");
}

}  // namespace

EstimateVerdict check_energy_monotone_and_bounded(std::span<const DiagnosticsSample> samples,
                                                  double tol, double family_floor) {
  require_samples(samples, "check_energy_monotone_and_bounded");
  double worst_rise = 0.0;
  double inf_e = samples[0].E;
  bool finite = std::isfinite(samples[0].E);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    finite = finite && std::isfinite(samples[i].E);
    worst_rise = std::max(worst_rise, samples[i].E - samples[i - 1].E);
    inf_e = std::min(inf_e, samples[i].E);
  }
  EstimateVerdict v;
  v.name = "energy_monotone_and_bounded";
  v.holds = finite && worst_rise <= tol;
  v.margin = std::isfinite(family_floor) ? inf_e + family_floor : tol - worst_rise;
  v.details = finite ? (v.holds ? "non-increasing within tolerance"
                                : "energy increased beyond tolerance")
                     : "non-finite energy sample";
  v.fitted["inf_E"] = inf_e;
  v.fitted["worst_rise"] = worst_rise;
  v.fitted["tol"] = tol;
  return v;
}

double i0_formula(double C0, double gamma_inf, double epsilon, double p0) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("i0_formula: epsilon must be positive");
  if (!(p0 > 1.0)) throw std::invalid_argument("i0_formula: p0 must exceed 1");
  if (gamma_inf == 0.0) return 0.0;
  const double base = C0 * gamma_inf * gamma_inf / epsilon;
  return std::pow(base, (p0 + 1.0) / (p0 - 1.0));
}

EstimateVerdict check_l2_exponential_shape(std::span<const DiagnosticsSample> samples,
                                           double abs_E0, double fit_lo, double fit_hi) {
  require_samples(samples, "check_l2_exponential_shape");
  const double t0 = samples[0].t;
  const double m0 = samples[0].M;

  // smallest admissible plateau for a given rate
  auto plateau = [&](double c) {
    double a = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const double e = std::exp(-c * (samples[i].t - t0));
      a = std::max(a, (samples[i].M - m0 * e) / (1.0 - e));
    }
    return a;
  };

  const bool windowed = std::isfinite(fit_lo) && std::isfinite(fit_hi);
  const double delta = 1e-12 * std::max(1.0, m0);
  double best_c = c_at(0), best_a = plateau(best_c);
  double best_obj = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kCGrid; ++j) {
    const double c = c_at(j);
    const double a = plateau(c);
    double obj = 0.0;
    for (const auto& s : samples) {
      if (windowed && (s.t < fit_lo || s.t > fit_hi)) continue;
      const double env = a + (m0 - a) * std::exp(-c * (s.t - t0));
      const double r = std::log(env + delta) - std::log(s.M + delta);
      obj += r * r;
    }
    if (obj < best_obj) {  // strict: ties keep the smaller c
      best_obj = obj;
      best_c = c;
      best_a = a;
    }
  }

  double margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double env = best_a + (m0 - best_a) * std::exp(-best_c * (s.t - t0));
    margin = std::min(margin, env - s.M);
  }

  EstimateVerdict v;
  v.name = "l2_exponential_shape";
  v.holds = std::isfinite(best_a) && best_c > 0.0 && margin >= -1e-9 * std::max(1.0, m0);
  v.margin = margin;
  v.details = v.holds ? "envelope A + (M(0)-A) e^{-ct} dominates M" : "no admissible envelope";
  v.fitted["A"] = best_a;
  v.fitted["c"] = best_c;
  v.fitted["abs_E0"] = abs_E0;
  v.fitted["M0"] = m0;
  return v;
}

EstimateVerdict check_mprime_bounds(std::span<const DiagnosticsSample> samples, double abs_E0) {
  require_samples(samples, "check_mprime_bounds");
  const double t0 = samples[0].t;
  const double mp0 = samples[0].Mp;

  double sup_mp = -std::numeric_limits<double>::infinity();
  bool finite = true;
  for (const auto& s : samples) {
    finite = finite && std::isfinite(s.Mp);
    sup_mp = std::max(sup_mp, s.Mp);
  }

  // level required by the lower envelope at rate c2
  auto level = [&](double c2) {
    double k = std::max(sup_mp, 0.0);
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const double e = std::exp(-c2 * (samples[i].t - t0));
      k = std::max(k, (mp0 * e - samples[i].Mp) / (1.0 - e));
    }
    return k;
  };

  double best_c = c_at(0), best_k = level(best_c);
  for (int j = 1; j < kCGrid; ++j) {
    const double c = c_at(j);
    const double k = level(c);
    if (k < best_k) {
      best_k = k;
      best_c = c;
    }
  }

  double margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double lower = mp0 * std::exp(-best_c * (s.t - t0)) -
                         best_k * (1.0 - std::exp(-best_c * (s.t - t0)));
    margin = std::min({margin, best_k - s.Mp, s.Mp - lower});
  }

  EstimateVerdict v;
  v.name = "mprime_bounds";
  v.holds = finite && std::isfinite(best_k) && margin >= -1e-9 * std::max(1.0, std::fabs(best_k));
  v.margin = margin;
  v.details = v.holds ? "two-sided envelope with shared level holds" : "M' escapes the envelope";
  v.fitted["K"] = best_k;  // plays c0 + c1|E|
  v.fitted["c2"] = best_c;
  v.fitted["sup_Mp"] = sup_mp;
  v.fitted["abs_E0"] = abs_E0;
  return v;
}

EstimateVerdict check_h1_uniform(std::span<const DiagnosticsSample> samples,
                                 double initial_sq_norms, bool applicable, double family_c) {
  require_samples(samples, "check_h1_uniform");
  if (!applicable)
    throw std::invalid_argument("check_h1_uniform: exponent gate p <= d/(d-2) does not apply");

  double sup = 0.0;
  bool finite = true;
  for (const auto& s : samples) {
    const double norm = std::sqrt(s.h1_u + s.l2_v);
    finite = finite && std::isfinite(norm);
    sup = std::max(sup, norm);
  }

  // integral-average bound: int_0^T E_lin dt <= K (1 + T)
  const double t0 = samples[0].t;
  double acc = 0.0, avg_k = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    acc += 0.5 * (samples[i].t - samples[i - 1].t) * (samples[i].E_lin + samples[i - 1].E_lin);
    avg_k = std::max(avg_k, acc / (1.0 + samples[i].t - t0));
  }

  EstimateVerdict v;
  v.name = "h1_uniform";
  v.holds = finite;
  v.margin = finite ? 0.0 : -std::numeric_limits<double>::infinity();
  v.details = finite ? "sup norm finite" : "norm not finite";
  v.fitted["sup_norm"] = sup;
  v.fitted["s0"] = initial_sq_norms;
  v.fitted["elin_avg_bound_K"] = avg_k;

  if (std::isfinite(family_c)) {
    const double bound = family_c * std::exp(family_c * initial_sq_norms);
    v.margin = bound - sup;
    v.holds = finite && v.margin >= -1e-9 * std::max(1.0, bound);
    v.fitted["family_c"] = family_c;
    v.fitted["envelope"] = bound;
    // empirical transient: first sample time after which the norm stays
    // within the envelope evaluated at |E0|
    const double abs_e0 = std::fabs(samples[0].E);
    const double tail_bound = family_c * std::exp(family_c * abs_e0);
    double transient = std::numeric_limits<double>::infinity();
    for (std::size_t i = samples.size(); i-- > 0;) {
      const double norm = std::sqrt(samples[i].h1_u + samples[i].l2_v);
      if (norm > tail_bound) break;
      transient = samples[i].t;
    }
    v.fitted["tail_bound"] = tail_bound;
    v.fitted["transient_T"] = transient;
  }
  return v;
}

AffineEnvelope affine_upper_envelope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) throw std::invalid_argument("affine_upper_envelope: no points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  AffineEnvelope env;
  if (std::fabs(det) > 1e-12 * std::max(1.0, sxx * n)) {
    env.a1 = (n * sxy - sx * sy) / det;
    env.a0 = (sy - env.a1 * sx) / n;
  } else {
    env.a1 = 0.0;
    env.a0 = sy / n;
  }
  if (env.a1 < 0.0) {  // envelopes of nondecreasing growth only
    env.a1 = 0.0;
    env.a0 = sy / n;
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pts) shift = std::max(shift, y - (env.a0 + env.a1 * x));
  env.a0 += shift;
  env.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pts)
    env.min_margin = std::min(env.min_margin, env.a0 + env.a1 * x - y);
  return env;
}

double fit_exponential_envelope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) throw std::invalid_argument("fit_exponential_envelope: no points");
  auto ok = [&](double c) {
    for (const auto& [s, sup] : pts)
      if (c * std::exp(c * s) < sup) return false;
    return true;
  };
  if (!ok(kCMax)) return kCMax;
  if (ok(kCMin)) return kCMin;
  double lo = kCMin, hi = kCMax;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double estimate_hyp3_constant(const SpectralDomain& dom, const NonlinearitySpec& spec,
                              std::span<const GridField> fields) {
  if (spec.is_zero())
    throw std::invalid_argument("estimate_hyp3_constant: nonlinearity is the zero map");
  if (fields.empty()) throw std::invalid_argument("estimate_hyp3_constant: empty field family");
  const double expo = 0.5 * (spec.p0() + 1.0);
  double best = 0.0;
  for (const auto& f : fields) {
    const double l2 = dom.l2_norm_sq(f);
    if (l2 == 0.0) continue;
    const double intF = integral_F(dom, spec, dom.to_spectral(f), f, true);
    if (!(intF > 0.0))
      throw std::logic_error("estimate_hyp3_constant: vanishing int F on a nonzero field");
    best = std::max(best, std::pow(l2, expo) / intF);
  }
  return best;
}

std::vector<GridField> default_hyp3_field_family(const SpectralDomain& dom, std::uint64_t seed,
                                                 std::span<const GridField> snapshots) {
  std::vector<GridField> out;

  const int d = dom.dim();
  std::vector<int> k(static_cast<std::size_t>(d), 1);
  if (dom.bc() == BoundaryKind::DirichletSine) {
    std::vector<int> cap(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) cap[j] = std::min(4, dom.extents()[j]);
    bool done = false;
    while (!done) {
      out.push_back(dom.to_grid(dom.mode_field(k, 1.0)));
      done = true;
      for (int j = d - 1; j >= 0; --j) {
        if (++k[j] <= cap[j]) {
          done = false;
          break;
        }
        k[j] = 1;
      }
    }
  } else {
    std::vector<int> cap(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) cap[j] = std::min(2, dom.extents()[j] / 2 - 1);
    std::vector<int> m(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) m[j] = -cap[j];
    bool done = false;
    while (!done) {
      if (std::any_of(m.begin(), m.end(), [](int x) { return x != 0; }))
        out.push_back(dom.to_grid(dom.mode_field(m, 1.0)));
      done = true;
      for (int j = d - 1; j >= 0; --j) {
        if (++m[j] <= cap[j]) {
          done = false;
          break;
        }
        m[j] = -cap[j];
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto& mu = dom.eigenvalues();
  for (int i = 0; i < 100; ++i) {
    SpectralField c = dom.make_spectral_field();
    for (std::size_t s = 0; s < c.coeffs.size(); ++s)
      c.coeffs[s] = gauss(rng) / (1.0 + mu[s]);
    out.push_back(dom.to_grid(c));
  }

  for (std::size_t i = 0; i < snapshots.size(); i += 10) out.push_back(snapshots[i]);
  return out;
}

// ---- appendix lemmas -------------------------------------------------------

namespace {

void require_traj(const OdeTrajectory& traj, const char* who) {
  if (traj.m.size() < 3) throw std::invalid_argument(std::string(who) + ": need >= 3 points");
  if (!(traj.h > 0.0)) throw std::invalid_argument(std::string(who) + ": h must be positive");
  for (double x : traj.m)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": non-finite value");
}

}  // namespace

EstimateVerdict lemma_explosion_check(const OdeTrajectory& traj, double delta) {
  require_traj(traj, "lemma_explosion_check");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("lemma_explosion_check: delta must lie in (0, 1)");
  for (double x : traj.m)
    if (x < -1e-12) throw std::invalid_argument("lemma_explosion_check: trajectory must be >= 0");

  const double h = traj.h;
  const std::size_t n = traj.m.size();

  // hypothesis (M')^2 <= delta M M'' pointwise, O(h^2) tolerance
  double hyp_margin = std::numeric_limits<double>::infinity();
  double sup_mpp = 0.0, sup_mp = -std::numeric_limits<double>::infinity();
  bool hyp = true;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double mp = (traj.m[i + 1] - traj.m[i - 1]) / (2.0 * h);
    const double mpp = (traj.m[i + 1] - 2.0 * traj.m[i] + traj.m[i - 1]) / (h * h);
    sup_mpp = std::max(sup_mpp, std::fabs(mpp));
    sup_mp = std::max(sup_mp, mp);
    const double tol = 10.0 * h * h * (1.0 + mp * mp + std::fabs(traj.m[i] * mpp));
    const double slack = delta * traj.m[i] * mpp + tol - mp * mp;
    hyp_margin = std::min(hyp_margin, slack);
    if (slack < 0.0) hyp = false;
  }

  EstimateVerdict v;
  v.name = "lemma_explosion";
  v.fitted["delta"] = delta;
  v.fitted["hyp_margin"] = hyp_margin;
  if (!hyp) {
    v.holds = true;
    v.margin = hyp_margin;
    v.details = "hypothesis not satisfied";
    return v;
  }

  // conclusion: M' <= tol everywhere and M(t) <= M(t0) + tol
  const double tol_mp = 10.0 * h * h * (1.0 + sup_mpp) + 1e-12 * (1.0 + std::fabs(sup_mp));
  double rise = 0.0;
  for (std::size_t i = 0; i < n; ++i) rise = std::max(rise, traj.m[i] - traj.m[0]);
  const double span = h * static_cast<double>(n - 1);
  const double tol_m = tol_mp * span + 1e-12 * (1.0 + traj.m[0]);

  v.margin = std::min(tol_mp - sup_mp, tol_m - rise);
  v.holds = v.margin >= 0.0;
  v.details = v.holds ? "non-increasing as claimed" : "conclusion failure: M increased";
  v.fitted["sup_Mp"] = sup_mp;
  v.fitted["rise"] = rise;
  return v;
}

EstimateVerdict lemma_exponential_check(const OdeTrajectory& traj, double C) {
  require_traj(traj, "lemma_exponential_check");
  if (!(C > 0.0)) throw std::invalid_argument("lemma_exponential_check: C must be positive");

  const double h = traj.h;
  const std::size_t n = traj.m.size();

  double hyp_margin = std::numeric_limits<double>::infinity();
  bool hyp = true;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double mpp = (traj.m[i + 1] - 2.0 * traj.m[i] + traj.m[i - 1]) / (h * h);
    const double tol = 10.0 * h * h * (1.0 + C) * (1.0 + std::fabs(traj.m[i]) + std::fabs(mpp));
    const double slack = mpp - C * traj.m[i] + tol;
    hyp_margin = std::min(hyp_margin, slack);
    if (slack < 0.0) hyp = false;
  }

  EstimateVerdict v;
  v.name = "lemma_exponential";
  v.fitted["C"] = C;
  v.fitted["hyp_margin"] = hyp_margin;
  if (!hyp) {
    v.holds = true;
    v.margin = hyp_margin;
    v.details = "hypothesis not satisfied";
    return v;
  }

  const double threshold = 2.0 * std::max(std::fabs(traj.m[0]), 1.0);
  const double peak = *std::max_element(traj.m.begin(), traj.m.end());
  const bool increasing_at_end = traj.m[n - 1] > traj.m[n - 2];
  if (peak > threshold && increasing_at_end) {
    v.holds = true;
    v.margin = peak - threshold;
    v.details = "diverging branch";
    v.fitted["peak"] = peak;
    return v;
  }

  const double rc = std::sqrt(C);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double bound = traj.m[0] * std::exp(-rc * h * static_cast<double>(i));
    margin = std::min(margin, bound - traj.m[i]);
  }
  const double tol = 1e-9 * (1.0 + std::fabs(traj.m[0]));
  v.holds = margin >= -tol;
  v.margin = margin;
  v.details = v.holds ? "decay branch" : "conclusion failure: decay bound violated";
  return v;
}

// ---- manufactured catalog ---------------------------------------------------

namespace {

OdeTrajectory tabulate(double t_end, std::size_t points,
                       const std::function<double(double)>& f) {
  OdeTrajectory tr;
  tr.t0 = 0.0;
  tr.h = t_end / static_cast<double>(points - 1);
  tr.m.resize(points);
  for (std::size_t i = 0; i < points; ++i) tr.m[i] = f(tr.h * static_cast<double>(i));
  return tr;
}

}  // namespace

std::vector<LemmaCase> make_lemma_catalog(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<LemmaCase> out;
  constexpr std::size_t kPts = 2001;

  auto add = [&](std::string name, int lemma, double param, std::string expected,
                 OdeTrajectory tr) {
    out.push_back({std::move(name), lemma, param, std::move(expected), std::move(tr)});
  };

  // fixed boundary cases first
  for (double delta : {0.5, 0.9, 0.999})
    add("exp_growth_delta_" + std::to_string(delta), 1, delta, "hypothesis_not_satisfied",
        tabulate(1.0, kPts, [](double t) { return std::exp(t); }));
  add("power_q1000_delta_0.999", 1, 0.999, "hypothesis_not_satisfied",
      tabulate(5e-4, 1601, [](double t) { return std::pow(1.0 + t, -1000.0); }));
  {
    const double C = 1.7;
    add("pure_decay_equality", 2, C, "decay_branch",
        tabulate(3.0, kPts, [C](double t) { return std::exp(-std::sqrt(C) * t); }));
    add("cosh_diverging", 2, C, "diverging_branch",
        tabulate(2.2 / std::sqrt(C), kPts, [C](double t) { return std::cosh(std::sqrt(C) * t); }));
    add("mixed_diverging", 2, C, "diverging_branch",
        tabulate(1.6 / std::sqrt(C), kPts, [C](double t) {
          return 2.0 * std::exp(std::sqrt(C) * t) - std::exp(-std::sqrt(C) * t);
        }));
  }

  int i = 0;
  while (static_cast<int>(out.size()) < count) {
    const int family = i++ % 8;
    switch (family) {
      case 0: {  // constants, lemma 1
        const double a = 5.0 * u01(rng);
        const double delta = 0.05 + 0.9 * u01(rng);
        add("const_" + std::to_string(i), 1, delta, "conclusion_holds",
            tabulate(2.0, 501, [a](double) { return a; }));
        break;
      }
      case 1: {  // (1+t)^-q with delta above the ratio
        const double q = 0.5 + 9.5 * u01(rng);
        const double ratio = q / (q + 1.0);
        const double delta = 0.5 * (ratio + 1.0);
        add("power_ok_" + std::to_string(i), 1, delta, "conclusion_holds",
            tabulate(2.0, kPts, [q](double t) { return std::pow(1.0 + t, -q); }));
        break;
      }
      case 2: {  // (1+t)^-q with delta below the ratio
        const double q = 1.0 + 9.0 * u01(rng);
        const double delta = 0.85 * q / (q + 1.0);
        add("power_hyp_fail_" + std::to_string(i), 1, delta, "hypothesis_not_satisfied",
            tabulate(2.0, kPts, [q](double t) { return std::pow(1.0 + t, -q); }));
        break;
      }
      case 3: {  // a e^{-bt} + c, ratio max = a/(a+c) at t = 0
        const double a = 0.3 + 1.7 * u01(rng);
        const double b = 0.3 + 0.9 * u01(rng);
        const double c = 0.3 + 1.7 * u01(rng);
        const double delta = 0.5 * (a / (a + c) + 1.0);
        add("exp_plus_const_" + std::to_string(i), 1, delta, "conclusion_holds",
            tabulate(3.0, kPts, [=](double t) { return a * std::exp(-b * t) + c; }));
        break;
      }
      case 4: {  // decay mixtures, lemma 2
        const double C = 0.25 + 3.75 * u01(rng);
        const double rc = std::sqrt(C);
        const double a1 = 0.2 + u01(rng), a2 = 0.2 + u01(rng);
        const double b1 = rc * (1.0 + 2.0 * u01(rng)), b2 = rc * (1.0 + 2.0 * u01(rng));
        add("decay_mix_" + std::to_string(i), 2, C, "decay_branch",
            tabulate(3.0, kPts, [=](double t) {
              return a1 * std::exp(-b1 * t) + a2 * std::exp(-b2 * t);
            }));
        break;
      }
      case 5: {  // growth mixtures, lemma 2
        const double C = 0.25 + 3.75 * u01(rng);
        const double rc = std::sqrt(C);
        const double a1 = 0.3 + u01(rng), a2 = 0.3 + u01(rng);
        const double uu = 1.0 + u01(rng);
        const double T = (std::log(3.0 * (a1 + a2) / a1) + 1.0) / (rc * uu);
        add("growth_mix_" + std::to_string(i), 2, C, "diverging_branch",
            tabulate(T, kPts, [=](double t) {
              return a1 * std::exp(rc * uu * t) + a2 * std::exp(-rc * t);
            }));
        break;
      }
      case 6: {  // negative constants, lemma 2 decay branch
        const double a = -2.0 * u01(rng) - 0.1;
        const double C = 0.25 + 3.75 * u01(rng);
        add("neg_const_" + std::to_string(i), 2, C, "decay_branch",
            tabulate(2.0, 501, [a](double) { return a; }));
        break;
      }
      default: {  // slow decay fails M'' >= C M
        const double eps = 0.2 + 0.3 * u01(rng);
        const double C = eps * eps * 4.0;
        add("slow_decay_hyp_fail_" + std::to_string(i), 2, C, "hypothesis_not_satisfied",
            tabulate(2.0, kPts, [eps](double t) { return std::exp(-eps * t); }));
        break;
      }
    }
  }
  return out;
}

LemmaReport run_lemma_catalog(const std::vector<LemmaCase>& catalog) {
  LemmaReport rep;
  rep.total = static_cast<int>(catalog.size());
  for (const auto& lc : catalog) {
    EstimateVerdict v = (lc.lemma == 1) ? lemma_explosion_check(lc.traj, lc.param)
                                        : lemma_exponential_check(lc.traj, lc.param);
    std::string outcome;
    if (v.details == "hypothesis not satisfied") {
      outcome = "hypothesis_not_satisfied";
    } else {
      ++rep.hypothesis_satisfied;
      if (!v.holds) {
        outcome = "conclusion_failure";
        ++rep.conclusion_failures;
      } else if (lc.lemma == 2) {
        outcome = (v.details == "diverging branch") ? "diverging_branch" : "decay_branch";
      } else {
        outcome = "conclusion_holds";
      }
    }
    if (outcome != lc.expected) ++rep.label_mismatches;
    rep.cases.push_back({lc, std::move(v), std::move(outcome)});
  }
  return rep;
}

}  // namespace dampedwave
