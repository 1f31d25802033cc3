#include "dampedwave/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace dampedwave {

WaveState state_from_spectral(const SpectralDomain& dom, double t, SpectralField u_hat,
                              SpectralField v_hat) {
  WaveState s;
  s.t = t;
  s.u = dom.to_grid(u_hat);
  s.v = dom.to_grid(v_hat);
  s.u_hat = std::move(u_hat);
  s.v_hat = std::move(v_hat);
  return s;
}

WaveState state_from_grid(const SpectralDomain& dom, double t, GridField u, GridField v) {
  WaveState s;
  s.t = t;
  s.u_hat = dom.to_spectral(u);
  s.v_hat = dom.to_spectral(v);
  s.u = std::move(u);
  s.v = std::move(v);
  return s;
}

DampingProfile DampingProfile::constant(const SpectralDomain& dom, double gamma) {
  GridField g = dom.make_grid_field();
  std::fill(g.values.begin(), g.values.end(), gamma);
  return from_grid(dom, std::move(g));
}

DampingProfile DampingProfile::from_grid(const SpectralDomain& dom, GridField gamma) {
  if (gamma.values.size() != dom.grid_size())
    throw std::invalid_argument("damping: shape mismatch");
  double sup = 0.0, inf = std::numeric_limits<double>::infinity();
  for (double g : gamma.values) {
    if (!std::isfinite(g) || g < 0.0)
      throw std::invalid_argument("damping: gamma must be finite and >= 0 pointwise");
    sup = std::max(sup, g);
    inf = std::min(inf, g);
  }
  DampingProfile p;
  p.gamma_ = std::move(gamma);
  p.gamma_inf_ = sup;
  p.constant_ = (inf == sup);
  return p;
}

namespace {

// sum of F(u) or u f(u) over a grid, times the cell volume
double quad_F(const SpectralDomain& dom, const NonlinearitySpec& spec, const GridField& u) {
  kernels::buffer tmp(u.values.size());
  spec.F_array(u.values.data(), tmp.data(), tmp.size());
  return dom.cell_volume() * kernels::active().sum(tmp.data(), tmp.size());
}

double quad_uf(const SpectralDomain& dom, const NonlinearitySpec& spec, const GridField& u) {
  kernels::buffer tmp(u.values.size());
  spec.f_array(u.values.data(), tmp.data(), tmp.size());
  return dom.cell_volume() * kernels::active().dot(u.values.data(), tmp.data(), tmp.size());
}

}  // namespace

double integral_F(const SpectralDomain& dom, const NonlinearitySpec& spec,
                  const SpectralField& u_hat, const GridField& u, bool dealias) {
  if (spec.is_zero()) return 0.0;
  const SpectralDomain* fine = dealias ? dom.padded() : nullptr;
  if (!fine) return quad_F(dom, spec, u);
  GridField uf = fine->to_grid(dom.pad_to(*fine, u_hat));
  return quad_F(*fine, spec, uf);
}

double integral_uf(const SpectralDomain& dom, const NonlinearitySpec& spec,
                   const SpectralField& u_hat, const GridField& u, bool dealias) {
  if (spec.is_zero()) return 0.0;
  const SpectralDomain* fine = dealias ? dom.padded() : nullptr;
  if (!fine) return quad_uf(dom, spec, u);
  GridField uf = fine->to_grid(dom.pad_to(*fine, u_hat));
  return quad_uf(*fine, spec, uf);
}

NonlinearIntegrals nonlinear_integrals(const SpectralDomain& dom, const NonlinearitySpec& spec,
                                       const SpectralField& u_hat, const GridField& u,
                                       bool dealias) {
  if (spec.is_zero()) return {0.0, 0.0};
  const auto& k = kernels::active();
  const SpectralDomain* fine = dealias ? dom.padded() : nullptr;
  const SpectralDomain& qd = fine ? *fine : dom;
  GridField uq;
  if (fine) uq = fine->to_grid(dom.pad_to(*fine, u_hat));
  const GridField& uu = fine ? uq : u;
  kernels::buffer tmp(uu.values.size());
  NonlinearIntegrals out;
  spec.F_array(uu.values.data(), tmp.data(), tmp.size());
  out.intF = qd.cell_volume() * k.sum(tmp.data(), tmp.size());
  spec.f_array(uu.values.data(), tmp.data(), tmp.size());
  out.intUf = qd.cell_volume() * k.dot(uu.values.data(), tmp.data(), tmp.size());
  return out;
}

SpectralField f_of_u_hat(const SpectralDomain& dom, const NonlinearitySpec& spec,
                         const SpectralField& u_hat, const GridField& u, bool dealias) {
  if (spec.is_zero()) return dom.make_spectral_field();
  const SpectralDomain* fine = dealias ? dom.padded() : nullptr;
  if (!fine) {
    GridField w = dom.make_grid_field();
    spec.f_array(u.values.data(), w.values.data(), w.values.size());
    return dom.to_spectral(w);
  }
  GridField uf = fine->to_grid(dom.pad_to(*fine, u_hat));
  GridField wf = fine->make_grid_field();
  spec.f_array(uf.values.data(), wf.values.data(), wf.values.size());
  return dom.truncate_from(*fine, fine->to_spectral(wf));
}

GridField f_of_u(const SpectralDomain& dom, const NonlinearitySpec& spec,
                 const SpectralField& u_hat, const GridField& u, bool dealias) {
  if (spec.is_zero()) return dom.make_grid_field();
  if (!dealias) {
    GridField out = dom.make_grid_field();
    spec.f_array(u.values.data(), out.values.data(), out.values.size());
    return out;
  }
  return dom.to_grid(f_of_u_hat(dom, spec, u_hat, u, true));
}

double energy(const SpectralDomain& dom, const NonlinearitySpec& spec, const WaveState& state,
              bool dealias) {
  const double h1 = dom.h1_norm_sq(state.u_hat);
  const double l2v = dom.l2_norm_sq(state.v);
  return 0.5 * h1 + 0.5 * l2v - integral_F(dom, spec, state.u_hat, state.u, dealias);
}

DiagnosticsSample virial_sample(const SpectralDomain& dom, const NonlinearitySpec& spec,
                                const DampingProfile& damping, const WaveState& state,
                                bool dealias) {
  const auto& k = kernels::active();
  const std::size_t n = dom.grid_size();
  const double* u = state.u.values.data();
  const double* v = state.v.values.data();
  const double* g = damping.grid().values.data();
  const double h = dom.cell_volume();

  DiagnosticsSample s;
  s.t = state.t;
  s.l2_u = h * k.sum_sq(u, n);
  s.l2_v = h * k.sum_sq(v, n);
  s.h1_u = dom.h1_norm_sq(state.u_hat);
  const NonlinearIntegrals nl = nonlinear_integrals(dom, spec, state.u_hat, state.u, dealias);
  s.intF = nl.intF;
  s.intUf = nl.intUf;
  s.intGuv = h * k.weighted_dot3(g, u, v, n);
  s.intGvv = h * k.weighted_sum_sq(g, v, n);
  s.M = s.l2_u;
  s.Mp = 2.0 * h * k.dot(u, v, n);
  s.Mpp = 2.0 * s.l2_v - 2.0 * s.h1_u + 2.0 * s.intUf - 2.0 * s.intGuv;
  s.E_lin = 0.5 * s.h1_u + 0.5 * s.l2_v;
  s.E = s.E_lin - s.intF;
  return s;
}

double dissipation_residual(std::span<const DiagnosticsSample> samples, double dt) {
  if (samples.size() < 2)
    throw std::invalid_argument("dissipation_residual: need at least two samples");
  if (!(dt > 0.0)) throw std::invalid_argument("dissipation_residual: dt must be positive");
  // E(t) + int_0^t gamma|v|^2 is constant along exact trajectories; the
  // residual is the range of its discrete counterpart over the series.
  double acc = 0.0;
  double lo = samples[0].E, hi = samples[0].E;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    acc += 0.5 * dt * (samples[i - 1].intGvv + samples[i].intGvv);
    const double x = samples[i].E + acc;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi - lo;
}

const char* const kCsvHeader = "t,E,E_lin,M,Mp,Mpp,l2_u,l2_v,h1_u,intF,intUf,intGuv,intGvv";

void write_csv_row(std::ostream& os, const DiagnosticsSample& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                s.t, s.E, s.E_lin, s.M, s.Mp, s.Mpp, s.l2_u, s.l2_v, s.h1_u, s.intF, s.intUf,
                s.intGuv, s.intGvv);
  os << buf;
}

}  // namespace dampedwave
