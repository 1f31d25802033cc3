#include "dampedwave/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace dampedwave {

namespace {

struct RotationTable {
  kernels::buffer c, s, t;  // cos(w tau), sin(w tau)/w, w sin(w tau)

  static RotationTable build(const SpectralDomain& dom, double tau) {
    const auto& mu = dom.eigenvalues();
    RotationTable r;
    r.c.resize(mu.size());
    r.s.resize(mu.size());
    r.t.resize(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double w2 = mu[i] + dom.beta();
      if (!(w2 > 0.0))
        throw std::domain_error("linear step: mode with mu + beta <= 0 (Poincare fails)");
      const double w = std::sqrt(w2);
      const double sn = std::sin(w * tau);
      r.c[i] = std::cos(w * tau);
      r.s[i] = sn / w;
      r.t[i] = w * sn;
    }
    return r;
  }

  void apply(SpectralField& u_hat, SpectralField& v_hat) const {
    kernels::active().rotate2(c.data(), s.data(), t.data(), u_hat.coeffs.data(),
                              v_hat.coeffs.data(), c.size());
  }
};

struct KickTable {
  kernels::buffer decay, gain;  // e^(-g dt), (1 - e^(-g dt))/g

  static KickTable build(const DampingProfile& damping, double dt) {
    const auto& g = damping.grid().values;
    KickTable k;
    k.decay.resize(g.size());
    k.gain.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double gd = g[i] * dt;
      k.decay[i] = std::exp(-gd);
      if (gd < 1e-8)
        k.gain[i] = dt * (1.0 - 0.5 * gd);
      else
        k.gain[i] = -std::expm1(-gd) / g[i];
    }
    return k;
  }
};

}  // namespace

void linear_half_step(const SpectralDomain& dom, SpectralField& u_hat, SpectralField& v_hat,
                      double tau) {
  if (u_hat.coeffs.size() != dom.spec_size() || v_hat.coeffs.size() != dom.spec_size())
    throw std::invalid_argument("linear step: shape mismatch");
  RotationTable::build(dom, tau).apply(u_hat, v_hat);
}

WaveState linear_half_step(const SpectralDomain& dom, const WaveState& state, double tau) {
  SpectralField u_hat = state.u_hat, v_hat = state.v_hat;
  linear_half_step(dom, u_hat, v_hat, tau);
  return state_from_spectral(dom, state.t + tau, std::move(u_hat), std::move(v_hat));
}

void nonlinear_damping_step(const SpectralDomain& dom, const NonlinearitySpec& spec,
                            const DampingProfile& damping, const SpectralField& u_hat,
                            const GridField& u, GridField& v, double dt, bool dealias) {
  if (v.values.size() != dom.grid_size()) throw std::invalid_argument("kick: shape mismatch");
  KickTable k = KickTable::build(damping, dt);
  if (spec.is_zero()) {
    kernels::active().mul(k.decay.data(), v.values.data(), v.values.data(), v.values.size());
    return;
  }
  GridField fu = f_of_u(dom, spec, u_hat, u, dealias);
  kernels::active().mul_add(k.decay.data(), v.values.data(), k.gain.data(), fu.values.data(),
                            v.values.data(), v.values.size());
}

WaveState nonlinear_damping_step(const SpectralDomain& dom, const NonlinearitySpec& spec,
                                 const DampingProfile& damping, const WaveState& state, double dt,
                                 bool dealias) {
  GridField v = state.v;
  nonlinear_damping_step(dom, spec, damping, state.u_hat, state.u, v, dt, dealias);
  WaveState out;
  out.t = state.t + dt;
  out.u = state.u;
  out.u_hat = state.u_hat;
  out.v_hat = dom.to_spectral(v);
  out.v = std::move(v);
  return out;
}

namespace {

struct Snapshot {
  double t;
  SpectralField u_hat, v_hat;
};

RunOutcome evolve_impl(const SpectralDomain& dom, const NonlinearitySpec& spec,
                       const DampingProfile& damping, const WaveState& initial,
                       const StepperConfig& cfg, const EvolveCallbacks* callbacks,
                       bool allow_confirm) {
  if (!dom.poincare_check().ok)
    throw std::invalid_argument("evolve: Poincare condition fails (lambda1 + beta <= 0)");
  if (!(cfg.dt > 0.0) || cfg.dt > cfg.dt_cap)
    throw std::invalid_argument("evolve: dt must satisfy 0 < dt <= dt_cap");
  if (!(cfg.t_end > initial.t))
    throw std::invalid_argument("evolve: t_end must exceed the initial time");
  if (cfg.sample_every < 1) throw std::invalid_argument("evolve: sample_every must be >= 1");
  if (!(cfg.blowup_threshold > 0.0))
    throw std::invalid_argument("evolve: blowup_threshold must be positive");

  const RotationTable rot = RotationTable::build(dom, 0.5 * cfg.dt);
  const KickTable kick = KickTable::build(damping, cfg.dt);
  const auto& ker = kernels::active();

  // uniform damping admits an all-spectral kick (the pointwise decay/gain
  // commute with the transform), which removes every per-step grid
  // round-trip
  const bool uniform_gamma = damping.is_constant();
  double decay_c = 1.0, gain_c = cfg.dt;
  if (uniform_gamma) {
    const double gd = damping.constant_value() * cfg.dt;
    decay_c = std::exp(-gd);
    gain_c = (gd < 1e-8) ? cfg.dt * (1.0 - 0.5 * gd)
                         : -std::expm1(-gd) / damping.constant_value();
  }

  const double t0 = initial.t;
  const std::int64_t nsteps =
      std::max<std::int64_t>(1, std::llround((cfg.t_end - t0) / cfg.dt));
  const double thr2 = cfg.blowup_threshold * cfg.blowup_threshold;

  SpectralField u_hat = initial.u_hat, v_hat = initial.v_hat;

  // reused buffers for the per-step pipelines
  struct Workspace {
    SpectralField fine_spec, coarse_spec;
    GridField fine_grid, fine_f, coarse_v;
    kernels::buffer scratch;
  } ws;
  if (const SpectralDomain* fine = dom.padded()) {
    ws.fine_grid = fine->make_grid_field();
    ws.fine_f = fine->make_grid_field();
  }

  RunOutcome out;
  out.samples.reserve(static_cast<std::size_t>(nsteps / cfg.sample_every) + 2);

  auto make_state = [&](double t) {
    return state_from_spectral(dom, t, u_hat, v_hat);
  };
  auto record_sample = [&](const WaveState& st) {
    out.samples.push_back(virial_sample(dom, spec, damping, st, cfg.dealias));
    if (callbacks && callbacks->on_sample) callbacks->on_sample(st);
  };

  record_sample(make_state(t0));

  // snapshot ring for the dt/2 confirmation pass; thinned by interval
  // doubling so it always spans a tail of the run
  std::vector<Snapshot> ring;
  std::int64_t snap_interval = cfg.sample_every;
  constexpr std::size_t kRingCap = 16;
  ring.push_back({t0, u_hat, v_hat});

  double t = t0;
  for (std::int64_t i = 1; i <= nsteps; ++i) {
    rot.apply(u_hat, v_hat);

    if (uniform_gamma && spec.is_zero()) {
      ker.scale(decay_c, v_hat.coeffs.data(), v_hat.coeffs.size());
    } else if (uniform_gamma && cfg.dealias && dom.padded()) {
      // all-spectral kick through the padded grid, reusing the workspace
      const SpectralDomain& fine = *dom.padded();
      dom.pad_to_into(fine, u_hat, ws.fine_spec);
      fine.to_grid_into(ws.fine_spec, ws.fine_grid, ws.scratch);
      spec.f_array(ws.fine_grid.values.data(), ws.fine_f.values.data(),
                   ws.fine_f.values.size());
      fine.to_spectral_into(ws.fine_f, ws.fine_spec);
      dom.truncate_from_into(fine, ws.fine_spec, ws.coarse_spec);
      ker.scale(decay_c, v_hat.coeffs.data(), v_hat.coeffs.size());
      ker.axpy(gain_c, ws.coarse_spec.coeffs.data(), v_hat.coeffs.data(),
               v_hat.coeffs.size());
    } else {
      dom.to_grid_into(v_hat, ws.coarse_v, ws.scratch);
      if (spec.is_zero()) {
        ker.mul(kick.decay.data(), ws.coarse_v.values.data(), ws.coarse_v.values.data(),
                ws.coarse_v.values.size());
      } else {
        GridField u = dom.to_grid(u_hat);
        GridField fu = f_of_u(dom, spec, u_hat, u, cfg.dealias);
        ker.mul_add(kick.decay.data(), ws.coarse_v.values.data(), kick.gain.data(),
                    fu.values.data(), ws.coarse_v.values.data(), ws.coarse_v.values.size());
      }
      dom.to_spectral_into(ws.coarse_v, v_hat);
    }

    rot.apply(u_hat, v_hat);
    t = t0 + static_cast<double>(i) * cfg.dt;

    const double h1 = ker.weighted_sum_sq(dom.h1_weights().data(), u_hat.coeffs.data(),
                                          dom.spec_size());
    const double l2v = ker.weighted_sum_sq(dom.parseval_weights().data(), v_hat.coeffs.data(),
                                           dom.spec_size());
    const double norm2 = h1 + l2v;
    if (std::isnan(norm2) || std::isinf(norm2)) {
      out.kind = RunKind::BlowUp;
      out.reason = StopReason::NonFinite;
      out.t_final = t;
      break;
    }
    if (norm2 > thr2) {
      out.kind = RunKind::BlowUp;
      out.reason = StopReason::NormExceeded;
      out.t_final = t;
      break;
    }

    if (i % cfg.sample_every == 0) {
      WaveState st = make_state(t);
      record_sample(st);
      if (callbacks && callbacks->checkpoint_every > 0 && callbacks->on_checkpoint &&
          i % callbacks->checkpoint_every == 0)
        callbacks->on_checkpoint(st, i);
    } else if (callbacks && callbacks->checkpoint_every > 0 && callbacks->on_checkpoint &&
               i % callbacks->checkpoint_every == 0) {
      callbacks->on_checkpoint(make_state(t), i);
    }

    if (i % snap_interval == 0) {
      ring.push_back({t, u_hat, v_hat});
      if (ring.size() > kRingCap) {
        std::vector<Snapshot> thin;
        for (std::size_t r = 0; r < ring.size(); r += 2) thin.push_back(std::move(ring[r]));
        ring = std::move(thin);
        snap_interval *= 2;
      }
    }
  }

  if (out.kind == RunKind::Global) {
    out.t_final = t0 + static_cast<double>(nsteps) * cfg.dt;
    out.final_state = make_state(out.t_final);
    return out;
  }

  out.final_state = make_state(out.t_final);

  if (allow_confirm) {
    // re-run the final stretch at dt/2 from the newest snapshot at or
    // before ~90% of the elapsed time to the detection
    const double cutoff = t0 + 0.9 * (out.t_final - t0);
    const Snapshot* base = &ring.front();
    for (const auto& s : ring)
      if (s.t <= cutoff) base = &s;
    StepperConfig sub = cfg;
    sub.dt = 0.5 * cfg.dt;
    const double margin = std::max(10.0 * cfg.dt, 0.05 * (out.t_final - t0));
    sub.t_end = out.t_final + margin;
    WaveState restart = state_from_spectral(dom, base->t, base->u_hat, base->v_hat);
    RunOutcome confirm = evolve_impl(dom, spec, damping, restart, sub, nullptr, false);
    out.blowup_confirmed = (confirm.kind == RunKind::BlowUp);
  }
  return out;
}

}  // namespace

RunOutcome evolve(const SpectralDomain& dom, const NonlinearitySpec& spec,
                  const DampingProfile& damping, const WaveState& initial,
                  const StepperConfig& cfg, const EvolveCallbacks* callbacks) {
  return evolve_impl(dom, spec, damping, initial, cfg, callbacks, true);
}

}  // namespace dampedwave
