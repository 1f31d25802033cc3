#ifndef DAMPEDWAVE_VERIFIER_HPP
#define DAMPEDWAVE_VERIFIER_HPP

// Theorem-level checks on recorded trajectories. The estimates hold with
// existential constants, so the checks verify shape and fit envelope
// constants rather than compare against fixed numbers:
//  - energy non-increasing and bounded below,
//  - M(t) <= A + (M(0) - A) e^(-c t) with the smallest admissible A,
//  - two-sided M' envelope with a shared level c0 + c1|E|,
//  - sup of the H01 x L2 norm dominated by c exp(c s) across a family,
//  - the I0 expression (C0 |gamma|_inf^2 / eps)^((p0+1)/(p0-1)),
// plus executable forms of the two appendix ODE lemmas on sampled
// trajectories with centered-difference derivatives.

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dampedwave/diagnostics.hpp"

namespace dampedwave {

struct EstimateVerdict {
  std::string name;
  bool holds = false;
  double margin = 0.0;  // worst slack observed; holds <=> margin >= -tolerance
  std::string details;
  std::map<std::string, double> fitted;
};

struct OdeTrajectory {
  double t0 = 0.0;
  double h = 0.0;  // uniform spacing, > 0
  std::vector<double> m;
};

// ---- run-level checks ----------------------------------------------------

// E non-increasing within tol and bounded below. When family_floor is
// finite, margin = inf E + family_floor (slack over the family-wide bound);
// otherwise margin is the monotonicity slack.
EstimateVerdict check_energy_monotone_and_bounded(std::span<const DiagnosticsSample> samples,
                                                  double tol,
                                                  double family_floor =
                                                      std::numeric_limits<double>::quiet_NaN());

// (C0 |gamma|_inf^2 / epsilon)^((p0+1)/(p0-1)); zero damping gives zero.
// Throws on epsilon <= 0 or p0 <= 1.
double i0_formula(double C0, double gamma_inf, double epsilon, double p0);

// Fits (A, c): the smallest A with M(t) <= max(M(0), A) everywhere and
// M(t) <= A + (M(0) - A) e^(-c (t - t0)); c picked by least squares on
// log-residuals over [fit_lo, fit_hi] (times; NaN = full range), clamped to
// [1e-6, 1e3], ties toward smaller c. abs_E0 is carried into the fitted
// constants for family-level regression.
EstimateVerdict check_l2_exponential_shape(std::span<const DiagnosticsSample> samples,
                                           double abs_E0,
                                           double fit_lo = std::numeric_limits<double>::quiet_NaN(),
                                           double fit_hi = std::numeric_limits<double>::quiet_NaN());

// Two-sided envelope bound <= M'(t) and M'(t) <= K with the shared level
// K and rate c2 minimising K over a log-spaced c2 grid:
//   M'(0) e^(-c2 t) - K (1 - e^(-c2 t)) <= M'(t) <= K.
EstimateVerdict check_mprime_bounds(std::span<const DiagnosticsSample> samples, double abs_E0);

// sup_t sqrt(h1_u + l2_v) finite; with a family-fitted c, additionally
// checks domination by c exp(c s0) and locates the empirical transient
// after which the norm is within c exp(c |E0|). Throws when the exponent
// gate (p <= d/(d-2)) does not apply.
EstimateVerdict check_h1_uniform(std::span<const DiagnosticsSample> samples,
                                 double initial_sq_norms, bool applicable,
                                 double family_c = std::numeric_limits<double>::quiet_NaN());

// ---- family-level fits ---------------------------------------------------

struct AffineEnvelope {
  double a0 = 0.0;
  double a1 = 0.0;
  double min_margin = 0.0;  // min over points of a0 + a1 x - y (>= 0)
};

// Least-squares line through (x, y), raised until it dominates every point.
AffineEnvelope affine_upper_envelope(const std::vector<std::pair<double, double>>& pts);

// Smallest c in [1e-6, 1e3] with c exp(c s) >= S for every (s, S).
double fit_exponential_envelope(const std::vector<std::pair<double, double>>& pts);

// ---- hypothesis (hyp_f_3) constant ----------------------------------------

// max over the family of |u|_L2^(p0+1) / int F(u); throws std::logic_error
// if some field has a vanishing integral but positive norm.
double estimate_hyp3_constant(const SpectralDomain& dom, const NonlinearitySpec& spec,
                              std::span<const GridField> fields);

// Deterministic family: all basis modes up to |k|_inf <= 4, 100 seeded
// random fields, and every 10th provided snapshot.
std::vector<GridField> default_hyp3_field_family(const SpectralDomain& dom, std::uint64_t seed,
                                                 std::span<const GridField> snapshots = {});

// ---- appendix ODE lemmas ---------------------------------------------------

// Hypothesis (M')^2 <= delta M M'' on the grid (centered differences, O(h^2)
// tolerance). If it holds, asserts M' <= tol and M(t) <= M(t0) + tol.
// A failing hypothesis yields holds = true, details "hypothesis not
// satisfied" (it is not a lemma failure).
EstimateVerdict lemma_explosion_check(const OdeTrajectory& traj, double delta);

// Hypothesis M'' >= C M. Classifies the trajectory as "diverging branch"
// (exceeds 2 max(|M(0)|, 1) and increasing at the end) or checks
// M(t) <= M(0) e^(-sqrt(C) (t - t0)).
EstimateVerdict lemma_exponential_check(const OdeTrajectory& traj, double C);

// ---- manufactured catalog for the lemma harness ---------------------------

struct LemmaCase {
  std::string name;
  int lemma = 1;        // 1 = explosion, 2 = exponential
  double param = 0.0;   // delta or C
  std::string expected; // conclusion_holds | hypothesis_not_satisfied |
                        // decay_branch | diverging_branch
  OdeTrajectory traj;
};

struct LemmaCaseResult {
  LemmaCase spec;
  EstimateVerdict verdict;
  std::string outcome;
};

struct LemmaReport {
  int total = 0;
  int hypothesis_satisfied = 0;
  int conclusion_failures = 0;
  int label_mismatches = 0;
  std::vector<LemmaCaseResult> cases;
};

std::vector<LemmaCase> make_lemma_catalog(int count, std::uint64_t seed);
LemmaReport run_lemma_catalog(const std::vector<LemmaCase>& catalog);

}  // namespace dampedwave

#endif
