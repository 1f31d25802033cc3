#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "dampedwave/integrator.hpp"
#include "oracles.hpp"

using namespace dampedwave;
using std::numbers::pi;

namespace {

DomainConfig box3(int n, double beta = 0.0) {
  DomainConfig c;
  c.d = 3;
  c.n = {n};
  c.beta = beta;
  return c;
}

WaveState fundamental(const SpectralDomain& dom, double amp) {
  return state_from_spectral(dom, 0.0, dom.mode_field({1, 1, 1}, amp),
                             dom.make_spectral_field());
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("linear half step propagates a mode exactly") {
  SpectralDomain dom(box3(4));
  const double w = std::sqrt(3.0);
  for (double tau : {0.0, 0.05, 0.7, -0.3}) {
    auto u_hat = dom.mode_field({1, 1, 1}, 1.0);
    auto v_hat = dom.make_spectral_field();
    linear_half_step(dom, u_hat, v_hat, tau);
    CHECK(dom.mode_coefficient(u_hat, {1, 1, 1}) ==
          doctest::Approx(std::cos(w * tau)).epsilon(1e-14));
    CHECK(dom.mode_coefficient(v_hat, {1, 1, 1}) ==
          doctest::Approx(-w * std::sin(w * tau)).epsilon(1e-14));
  }
}

TEST_CASE("two half steps compose into one full step") {
  SpectralDomain dom(box3(4));
  auto u1 = dom.mode_field({2, 1, 1}, 0.8);
  auto v1 = dom.mode_field({1, 1, 1}, -0.4);
  auto u2 = u1, v2 = v1;
  const double tau = 0.31;
  linear_half_step(dom, u1, v1, tau);
  linear_half_step(dom, u2, v2, 0.5 * tau);
  linear_half_step(dom, u2, v2, 0.5 * tau);
  for (std::size_t i = 0; i < u1.coeffs.size(); ++i) {
    CHECK(std::fabs(u1.coeffs[i] - u2.coeffs[i]) < 1e-13);
    CHECK(std::fabs(v1.coeffs[i] - v2.coeffs[i]) < 1e-13);
  }
}

TEST_CASE("linear step rejects a mode with w^2 <= 0") {
  SpectralDomain dom(box3(4, -3.0));  // lambda1 + beta = 0
  auto u_hat = dom.mode_field({1, 1, 1}, 1.0);
  auto v_hat = dom.make_spectral_field();
  CHECK_THROWS_AS(linear_half_step(dom, u_hat, v_hat, 0.1), std::domain_error);
}

TEST_CASE("damping kick closed forms") {
  SpectralDomain dom(box3(4));
  auto cubic = NonlinearitySpec::make({{1.0, 3.0}});
  auto none = NonlinearitySpec::zero();

  // f = 0, constant gamma: pure decay
  {
    GridField u = dom.make_grid_field(), v = dom.make_grid_field();
    std::fill(v.values.begin(), v.values.end(), 2.0);
    WaveState st = state_from_grid(dom, 0.0, std::move(u), std::move(v));
    auto out = nonlinear_damping_step(dom, none, DampingProfile::constant(dom, 1.3), st, 0.2);
    for (double x : out.v.values)
      CHECK(x == doctest::Approx(2.0 * std::exp(-1.3 * 0.2)).epsilon(1e-14));
    for (std::size_t i = 0; i < st.u.values.size(); ++i)
      CHECK(out.u.values[i] == st.u.values[i]);  // u frozen in the kick
  }

  // gamma = 0: explicit kick v += dt f(u)
  {
    GridField u = dom.make_grid_field(), v = dom.make_grid_field();
    std::fill(u.values.begin(), u.values.end(), 0.5);
    WaveState st = state_from_grid(dom, 0.0, std::move(u), std::move(v));
    auto out = nonlinear_damping_step(dom, cubic, DampingProfile::constant(dom, 0.0), st, 0.1,
                                      /*dealias=*/false);
    for (double x : out.v.values)
      CHECK(x == doctest::Approx(0.1 * 0.125).epsilon(1e-13));
  }

  // gamma = 1, u = 2 (f = 8), v = 0, dt = 0.1: v = 8 (1 - e^-0.1)
  {
    GridField u = dom.make_grid_field(), v = dom.make_grid_field();
    std::fill(u.values.begin(), u.values.end(), 2.0);
    WaveState st = state_from_grid(dom, 0.0, std::move(u), std::move(v));
    auto out = nonlinear_damping_step(dom, cubic, DampingProfile::constant(dom, 1.0), st, 0.1,
                                      /*dealias=*/false);
    const double expect = 8.0 * (1.0 - std::exp(-0.1));  // ~0.76127
    for (double x : out.v.values) CHECK(x == doctest::Approx(expect).epsilon(1e-13));
  }

  // tiny gamma: series branch agrees with the closed form
  {
    GridField u = dom.make_grid_field(), v = dom.make_grid_field();
    std::fill(u.values.begin(), u.values.end(), 1.0);
    std::fill(v.values.begin(), v.values.end(), 1.0);
    WaveState st = state_from_grid(dom, 0.0, std::move(u), std::move(v));
    const double g = 1e-9, dt = 0.5;
    auto out = nonlinear_damping_step(dom, cubic, DampingProfile::constant(dom, g), st, dt,
                                      /*dealias=*/false);
    // expm1 keeps the reference accurate where 1 - exp(-g dt) would cancel
    const double expect = std::exp(-g * dt) * 1.0 + 1.0 * (-std::expm1(-g * dt)) / g;
    for (double x : out.v.values) CHECK(x == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("undamped linear evolution is exact at any dt") {
  SpectralDomain dom(box3(4));
  auto none = NonlinearitySpec::zero();
  auto damping = DampingProfile::constant(dom, 0.0);
  const double w = std::sqrt(3.0);

  for (double dt : {0.25, 0.01}) {
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 5.0;
    cfg.sample_every = 1;
    double worst = 0.0;
    EvolveCallbacks cbs;
    cbs.on_sample = [&](const WaveState& st) {
      const double got = dom.mode_coefficient(st.u_hat, {1, 1, 1});
      worst = std::max(worst, std::fabs(got - std::cos(w * st.t)));
    };
    auto out = evolve(dom, none, damping, fundamental(dom, 1.0), cfg, &cbs);
    CHECK(out.kind == RunKind::Global);
    CHECK(out.reason == StopReason::HorizonReached);
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("damped linear evolution converges at second order") {
  SpectralDomain dom(box3(4));
  auto none = NonlinearitySpec::zero();
  auto damping = DampingProfile::constant(dom, 1.0);

  double errs[3];
  int i = 0;
  for (double dt : {2e-2, 1e-2, 5e-3}) {
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 2.0;
    cfg.sample_every = static_cast<int>(std::llround(0.1 / dt));
    double worst = 0.0;
    EvolveCallbacks cbs;
    cbs.on_sample = [&](const WaveState& st) {
      const double got = dom.mode_coefficient(st.u_hat, {1, 1, 1});
      worst = std::max(worst, std::fabs(got - oracles::damped_mode_u(st.t, 3.0, 1.0)));
    };
    evolve(dom, none, damping, fundamental(dom, 1.0), cfg, &cbs);
    errs[i++] = worst;
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.25));
  CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("time reversal with gamma = 0") {
  SpectralDomain dom(box3(6));
  auto cubic = NonlinearitySpec::make({{1.0, 3.0}});
  auto damping = DampingProfile::constant(dom, 0.0);
  WaveState st = fundamental(dom, 0.5);

  const double dt = 0.02;
  WaveState fwd = st;
  for (int i = 0; i < 50; ++i) {
    fwd = linear_half_step(dom, fwd, 0.5 * dt);
    fwd = nonlinear_damping_step(dom, cubic, damping, fwd, dt);
    fwd = linear_half_step(dom, fwd, 0.5 * dt);
  }
  WaveState back = fwd;
  for (int i = 0; i < 50; ++i) {
    back = linear_half_step(dom, back, -0.5 * dt);
    back = nonlinear_damping_step(dom, cubic, damping, back, -dt);
    back = linear_half_step(dom, back, -0.5 * dt);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < st.u.values.size(); ++i) {
    worst = std::max(worst, std::fabs(back.u.values[i] - st.u.values[i]));
    worst = std::max(worst, std::fabs(back.v.values[i] - st.v.values[i]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("small cubic data stays global with bounded linear energy") {
  SpectralDomain dom(box3(8));
  auto cubic = NonlinearitySpec::make({{1.0, 3.0}});
  auto damping = DampingProfile::constant(dom, 0.0);
  StepperConfig cfg;
  cfg.dt = 5e-3;
  cfg.t_end = 5.0;
  cfg.sample_every = 20;
  auto out = evolve(dom, cubic, damping, fundamental(dom, 0.1), cfg);
  CHECK(out.kind == RunKind::Global);
  const double e0 = out.samples.front().E_lin;
  for (const auto& s : out.samples) CHECK(s.E_lin <= 2.0 * e0);

  // monotone energy within the dissipation tolerance
  const double tol = 10.0 * dissipation_residual(out.samples, cfg.dt * cfg.sample_every) + 1e-12;
  for (std::size_t i = 1; i < out.samples.size(); ++i)
    CHECK(out.samples[i].E <= out.samples[i - 1].E + tol);
}

TEST_CASE("negative-energy data blows up and the detection is confirmed") {
  SpectralDomain dom(box3(8));
  auto cubic = NonlinearitySpec::make({{1.0, 3.0}});
  auto damping = DampingProfile::constant(dom, 0.0);
  WaveState init = fundamental(dom, 6.0);
  CHECK(energy(dom, cubic, init) < 0.0);

  StepperConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 20.0;
  cfg.sample_every = 10;
  cfg.blowup_threshold = 1e4;
  auto out = evolve(dom, cubic, damping, init, cfg);
  CHECK(out.kind == RunKind::BlowUp);
  CHECK(out.t_final < 20.0);
  CHECK(out.blowup_confirmed);
  CHECK((out.reason == StopReason::NormExceeded || out.reason == StopReason::NonFinite));
}

TEST_CASE("evolve validates its preconditions") {
  SpectralDomain bad(box3(4, -4.0));
  auto none = NonlinearitySpec::zero();
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  CHECK_THROWS_AS(
      evolve(bad, none, DampingProfile::constant(bad, 0.0),
             state_from_spectral(bad, 0.0, bad.make_spectral_field(), bad.make_spectral_field()),
             cfg),
      std::invalid_argument);

  SpectralDomain dom(box3(4));
  StepperConfig big;
  big.dt = 1.0;  // above dt_cap
  big.t_end = 2.0;
  CHECK_THROWS_AS(evolve(dom, none, DampingProfile::constant(dom, 0.0), fundamental(dom, 0.1), big),
                  std::invalid_argument);
}

}  // TEST_SUITE
