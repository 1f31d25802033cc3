#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <numbers>
#include <random>
#include <sstream>

#include "dampedwave/diagnostics.hpp"
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

const double kPi3 = pi * pi * pi;

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("energy of the fundamental mode with the cubic") {
  SpectralDomain dom(box3(16));
  auto spec = NonlinearitySpec::make({{1.0, 3.0}});
  auto u_hat = dom.mode_field({1, 1, 1}, 1.0);
  auto v_hat = dom.make_spectral_field();
  WaveState st = state_from_spectral(dom, 0.0, u_hat, v_hat);

  // E = (1/2)(3 pi^3/8) - 27 pi^3/2048 = 357 pi^3 / 2048
  const double expect = 357.0 * kPi3 / 2048.0;
  CHECK(std::fabs(energy(dom, spec, st) - expect) < 1e-10);

  // intF against the closed form 27 pi^3 / 2048
  const double intF = integral_F(dom, spec, st.u_hat, st.u, true);
  CHECK(std::fabs(intF - 27.0 * kPi3 / 2048.0) < 1e-12);

  WaveState zero = state_from_spectral(dom, 0.0, dom.make_spectral_field(),
                                       dom.make_spectral_field());
  CHECK(energy(dom, spec, zero) == 0.0);

  // empty nonlinearity: E reduces to the linear energy
  auto none = NonlinearitySpec::zero();
  CHECK(energy(dom, none, st) == doctest::Approx(0.5 * 3.0 * kPi3 / 8.0).epsilon(1e-13));
}

TEST_CASE("virial sample closed forms on the fundamental mode") {
  SpectralDomain dom(box3(16));
  auto spec = NonlinearitySpec::make({{1.0, 3.0}});
  auto damping = DampingProfile::constant(dom, 0.7);
  WaveState st = state_from_spectral(dom, 0.0, dom.mode_field({1, 1, 1}, 1.0),
                                     dom.make_spectral_field());
  auto s = virial_sample(dom, spec, damping, st);

  CHECK(s.Mp == 0.0);  // v = 0
  CHECK(std::fabs(s.M - kPi3 / 8.0) < 1e-12);
  CHECK(std::fabs(s.intUf - 27.0 * kPi3 / 512.0) < 1e-11);
  // Mpp = -2 (3 pi^3/8) + 2 (27 pi^3/512) = -165 pi^3/256
  CHECK(std::fabs(s.Mpp - (-165.0 * kPi3 / 256.0)) < 1e-10);

  // u = 0, v arbitrary: Mpp collapses to 2 l2_v
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  GridField v = dom.make_grid_field();
  for (auto& x : v.values) x = d(rng);
  WaveState st2 = state_from_grid(dom, 0.0, dom.make_grid_field(), std::move(v));
  auto s2 = virial_sample(dom, spec, DampingProfile::constant(dom, 0.0), st2);
  CHECK(s2.Mpp == doctest::Approx(2.0 * s2.l2_v).epsilon(1e-13));
}

TEST_CASE("sample identities hold for random states") {
  SpectralDomain dom(box3(8, 0.5));
  auto spec = NonlinearitySpec::make({{0.8, 3.0}, {0.2, 2.0}});
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  GridField u = dom.make_grid_field(), v = dom.make_grid_field();
  for (auto& x : u.values) x = d(rng);
  for (auto& x : v.values) x = d(rng);
  GridField g = dom.make_grid_field();
  for (auto& x : g.values) x = 0.25 * (1.0 + d(rng));
  auto damping = DampingProfile::from_grid(dom, std::move(g));

  WaveState st = state_from_grid(dom, 1.5, std::move(u), std::move(v));
  auto s = virial_sample(dom, spec, damping, st);
  CHECK(s.t == 1.5);
  CHECK(s.E == doctest::Approx(s.E_lin - s.intF).epsilon(1e-14));
  CHECK(s.E_lin == doctest::Approx(0.5 * s.h1_u + 0.5 * s.l2_v).epsilon(1e-14));
  CHECK(s.M == s.l2_u);
  CHECK(s.Mpp ==
        doctest::Approx(2 * s.l2_v - 2 * s.h1_u + 2 * s.intUf - 2 * s.intGuv).epsilon(1e-13));
  CHECK(s.E_lin >= 0.0);
  // Poincare control of the linear energy
  const double lam = dom.poincare_check().lambda1_plus_beta;
  CHECK(s.h1_u >= lam * s.l2_u * (1.0 - 1e-12));
  // energy identity against the standalone evaluation
  CHECK(energy(dom, spec, st) == doctest::Approx(s.E).epsilon(1e-14));
}

TEST_CASE("dealiasing removes quadrature error of high-mode quartics") {
  // u = sin(4x) + sin(5x) on n = 8: u^4 contains cos(18x), which the
  // 9-point trapezoid aliases onto the constant; the 3/2 grid resolves it
  DomainConfig cfg;
  cfg.d = 1;
  cfg.n = {8};
  SpectralDomain dom(cfg);
  auto spec = NonlinearitySpec::make({{1.0, 3.0}});
  auto u_hat = dom.mode_field({4}, 1.0);
  u_hat.coeffs[4] += 1.0;  // mode 5
  WaveState st = state_from_spectral(dom, 0.0, u_hat, dom.make_spectral_field());

  const double expect = oracles::adaptive_quadrature(
      [&](double x) { return spec.F(std::sin(4 * x) + std::sin(5 * x)); }, 0.0, pi, 1e-14);
  const double dealiased = integral_F(dom, spec, st.u_hat, st.u, true);
  const double plain = integral_F(dom, spec, st.u_hat, st.u, false);
  CHECK(std::fabs(dealiased - expect) < 1e-12);
  CHECK(std::fabs(plain - expect) > 1e-3);  // aliased on the coarse grid
}

TEST_CASE("f_of_u dealiased matches the projection of f(u)") {
  SpectralDomain dom(box3(8));
  auto spec = NonlinearitySpec::make({{1.0, 3.0}});
  auto u_hat = dom.mode_field({2, 1, 1}, 0.8);
  WaveState st = state_from_spectral(dom, 0.0, u_hat, dom.make_spectral_field());

  GridField fu = f_of_u(dom, spec, st.u_hat, st.u, true);
  // inner products of the projection against resolved modes match the
  // dealiased quadrature of u^3 sin-mode products
  auto fu_hat = dom.to_spectral(fu);
  const SpectralDomain* fine = dom.padded();
  GridField u_fine = fine->to_grid(dom.pad_to(*fine, st.u_hat));
  GridField cube = fine->make_grid_field();
  spec.f_array(u_fine.values.data(), cube.values.data(), cube.values.size());
  for (auto k : std::vector<std::vector<int>>{{1, 1, 1}, {2, 1, 1}, {6, 3, 3}}) {
    GridField mode = fine->to_grid(fine->mode_field(k, 1.0));
    const double proj = fine->inner_product(cube, mode) / dom.l2_norm_sq(dom.mode_field(k, 1.0));
    CHECK(dom.mode_coefficient(fu_hat, k) == doctest::Approx(proj).epsilon(1e-10));
  }
}

TEST_CASE("dissipation residual") {
  std::vector<DiagnosticsSample> s(3);
  // gamma = 0: residual is the worst conservation defect
  s[0].E = 1.0;
  s[1].E = 0.9;
  s[2].E = 1.05;
  s[0].intGvv = s[1].intGvv = s[2].intGvv = 0.0;
  CHECK(dissipation_residual(s, 0.5) == doctest::Approx(0.15).epsilon(1e-14));

  // constant-in-time state with v = 0: zero residual
  for (auto& x : s) {
    x.E = 2.0;
    x.intGvv = 0.0;
  }
  CHECK(dissipation_residual(s, 0.5) == 0.0);

  // exactly balanced decay: E' = -intGvv with trapezoid-consistent samples
  std::vector<DiagnosticsSample> t(4);
  const double dt = 0.25;
  double E = 1.0;
  for (int i = 0; i < 4; ++i) {
    t[i].intGvv = 0.3 + 0.1 * i;
    t[i].E = E;
    if (i < 3) E -= 0.5 * dt * (t[i].intGvv + 0.3 + 0.1 * (i + 1));
  }
  CHECK(dissipation_residual(t, dt) < 1e-15);

  std::vector<DiagnosticsSample> one(1);
  CHECK_THROWS_AS(dissipation_residual(one, 0.1), std::invalid_argument);
}

TEST_CASE("csv format is frozen") {
  CHECK(std::string(kCsvHeader) ==
        "t,E,E_lin,M,Mp,Mpp,l2_u,l2_v,h1_u,intF,intUf,intGuv,intGvv");
  DiagnosticsSample s{};
  s.t = 0.5;
  s.E = -1.25;
  std::ostringstream os;
  write_csv_row(os, s);
  const std::string row = os.str();
  CHECK(row == "0.5,-1.25,0,0,0,0,0,0,0,0,0,0,0\n");
}

TEST_CASE("damping profile validation") {
  SpectralDomain dom(box3(4));
  auto ok = DampingProfile::constant(dom, 1.5);
  CHECK(ok.gamma_inf() == 1.5);
  CHECK(!ok.is_zero());
  CHECK(DampingProfile::constant(dom, 0.0).is_zero());

  GridField bad = dom.make_grid_field();
  bad.values[3] = -0.1;
  CHECK_THROWS_AS(DampingProfile::from_grid(dom, std::move(bad)), std::invalid_argument);
}

}  // TEST_SUITE
