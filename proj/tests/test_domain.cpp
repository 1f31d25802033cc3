#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>

#include "dampedwave/domain.hpp"
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

GridField random_grid(const SpectralDomain& dom, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  GridField g = dom.make_grid_field();
  for (auto& x : g.values) x = d(rng);
  return g;
}

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1e-300, std::fabs(b)); }

}  // namespace

TEST_SUITE("domain") {

TEST_CASE("single sine mode synthesizes the product of sines") {
  SpectralDomain dom(box3(8));
  auto c = dom.mode_field({1, 2, 3}, 1.5);
  GridField g = dom.to_grid(c);
  for (std::size_t idx = 0; idx < dom.grid_size(); idx += 37) {
    auto x = dom.grid_point(idx);
    const double expect = 1.5 * std::sin(x[0]) * std::sin(2 * x[1]) * std::sin(3 * x[2]);
    CHECK(g.values[idx] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("zero field transforms to zero") {
  SpectralDomain dom(box3(4));
  auto z = dom.make_grid_field();
  auto c = dom.to_spectral(z);
  for (double v : c.coeffs) CHECK(v == 0.0);
}

TEST_CASE("round trip is the identity") {
  for (BoundaryKind bc : {BoundaryKind::DirichletSine, BoundaryKind::PeriodicFourier}) {
    DomainConfig cfg = box3(8);
    cfg.bc = bc;
    cfg.beta = 1.0;
    SpectralDomain dom(cfg);
    GridField g = random_grid(dom, 77);
    GridField back = dom.to_grid(dom.to_spectral(g));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i)
      worst = std::max(worst, std::fabs(back.values[i] - g.values[i]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("forward transform matches the direct summation oracle") {
  DomainConfig cfg;
  cfg.d = 3;
  cfg.n = {5, 4, 3};
  cfg.lengths = {pi, 2.0, 1.0};
  SpectralDomain dom(cfg);
  GridField g = random_grid(dom, 5);

  oracles::SineGrid sg{cfg.n, cfg.lengths};
  std::vector<double> grid(g.values.begin(), g.values.end());
  auto expect = oracles::slow_sine_analysis(sg, grid);

  auto got = dom.to_spectral(g);
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(got.coeffs[i] == doctest::Approx(expect[i]).epsilon(1e-11));
}

TEST_CASE("transform linearity") {
  SpectralDomain dom(box3(6));
  GridField a = random_grid(dom, 1), b = random_grid(dom, 2);
  GridField comb = dom.make_grid_field();
  for (std::size_t i = 0; i < comb.values.size(); ++i)
    comb.values[i] = 2.5 * a.values[i] - b.values[i];
  auto ca = dom.to_spectral(a), cb = dom.to_spectral(b), cc = dom.to_spectral(comb);
  for (std::size_t i = 0; i < cc.coeffs.size(); ++i)
    CHECK(cc.coeffs[i] == doctest::Approx(2.5 * ca.coeffs[i] - cb.coeffs[i]).epsilon(1e-11));
}

TEST_CASE("laplacian scales modes by -mu") {
  SpectralDomain dom(box3(8));
  auto c = dom.mode_field({1, 1, 1}, 1.0);
  auto lap = dom.laplacian_apply(c);
  CHECK(dom.mode_coefficient(lap, {1, 1, 1}) == doctest::Approx(-3.0).epsilon(1e-15));

  auto c2 = dom.mode_field({2, 1, 1}, 1.0);
  auto lap2 = dom.laplacian_apply(c2);
  CHECK(dom.mode_coefficient(lap2, {2, 1, 1}) == doctest::Approx(-6.0).epsilon(1e-15));
}

TEST_CASE("laplacian matches finite differences at second order") {
  // smooth field on the half-sample grid; ghosts come from the odd
  // reflection u(-x) = -u(x), exact for the sine basis
  double errs[2];
  int idx = 0;
  for (int n : {16, 32}) {
    DomainConfig cfg;
    cfg.d = 1;
    cfg.n = {n};
    cfg.lengths = {pi};
    SpectralDomain dom(cfg);
    auto c = dom.mode_field({2}, 1.0);
    GridField u = dom.to_grid(c);
    GridField lap = dom.to_grid(dom.laplacian_apply(c));
    const double h = pi / n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double um = (i == 0) ? -u.values[0] : u.values[i - 1];
      const double up = (i == n - 1) ? -u.values[n - 1] : u.values[i + 1];
      const double fd = (up - 2.0 * u.values[i] + um) / (h * h);
      worst = std::max(worst, std::fabs(fd - lap.values[i]));
    }
    errs[idx++] = worst;
  }
  CHECK(errs[1] < 0.3 * errs[0]);  // second order: ~ 1/4 per halving
}

TEST_CASE("closed-form norms of the fundamental mode") {
  SpectralDomain dom(box3(16));
  auto c = dom.mode_field({1, 1, 1}, 1.0);
  CHECK(rel_err(dom.l2_norm_sq(c), pi * pi * pi / 8.0) < 1e-13);
  CHECK(rel_err(dom.h1_norm_sq(c), 3.0 * pi * pi * pi / 8.0) < 1e-13);
  GridField g = dom.to_grid(c);
  CHECK(rel_err(dom.l2_norm_sq(g), pi * pi * pi / 8.0) < 1e-12);
  CHECK(dom.l2_norm_sq(dom.make_grid_field()) == 0.0);
}

TEST_CASE("Parseval: grid and spectral norms agree") {
  for (BoundaryKind bc : {BoundaryKind::DirichletSine, BoundaryKind::PeriodicFourier}) {
    DomainConfig cfg = box3(8);
    cfg.bc = bc;
    SpectralDomain dom(cfg);
    GridField g = random_grid(dom, 31);
    auto c = dom.to_spectral(g);
    CHECK(rel_err(dom.l2_norm_sq(c), dom.l2_norm_sq(g)) < 1e-10);
  }
}

TEST_CASE("Rayleigh quotient is sharp at the fundamental mode") {
  SpectralDomain dom(box3(6, 0.25));
  const auto pc = dom.poincare_check();
  double best = 1e300;
  std::vector<int> argmin;
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j)
      for (int k = 1; k <= 6; ++k) {
        auto c = dom.mode_field({i, j, k}, 1.0);
        const double q = dom.h1_norm_sq(c) / dom.l2_norm_sq(c);
        if (q < best) {
          best = q;
          argmin = {i, j, k};
        }
      }
  CHECK(argmin == std::vector<int>{1, 1, 1});
  CHECK(best == doctest::Approx(pc.lambda1_plus_beta).epsilon(1e-15));
}

TEST_CASE("poincare check examples") {
  {
    SpectralDomain dom(box3(4, 0.0));
    auto pc = dom.poincare_check();
    CHECK(pc.lambda1_plus_beta == 3.0);  // exact: (pi/pi)^2 * 3
    CHECK(pc.ok);
  }
  {
    SpectralDomain dom(box3(4, -3.0));
    auto pc = dom.poincare_check();
    CHECK(pc.lambda1_plus_beta == 0.0);
    CHECK(!pc.ok);
  }
  {
    SpectralDomain dom(box3(4, -2.5));
    auto pc = dom.poincare_check();
    CHECK(pc.lambda1_plus_beta == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pc.ok);
  }
  {
    DomainConfig cfg = box3(4, 0.0);
    cfg.bc = BoundaryKind::PeriodicFourier;
    SpectralDomain dom(cfg);
    CHECK(!dom.poincare_check().ok);  // constant mode needs beta > 0
    cfg.beta = 1.0;
    SpectralDomain dom2(cfg);
    CHECK(dom2.poincare_check().ok);
  }
}

TEST_CASE("periodic modes: eigenvalues and norms") {
  DomainConfig cfg;
  cfg.d = 3;
  cfg.n = {8, 8, 8};
  cfg.lengths = {2 * pi, 2 * pi, 2 * pi};
  cfg.bc = BoundaryKind::PeriodicFourier;
  cfg.beta = 1.0;
  SpectralDomain dom(cfg);
  const double V = dom.volume();

  CHECK(dom.mode_eigenvalue({1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dom.mode_eigenvalue({1, -2, 3}) == doctest::Approx(14.0).epsilon(1e-15));

  // cos(k.x) has squared L2 norm V/2 (V for the constant mode)
  for (auto k : std::vector<std::vector<int>>{{1, 0, 0}, {0, 1, 0}, {1, -2, 3}, {2, 1, 0}}) {
    auto c = dom.mode_field(k, 0.7);
    CHECK(rel_err(dom.l2_norm_sq(c), 0.49 * V / 2.0) < 1e-12);
    // synthesized grid matches the cosine product
    GridField g = dom.to_grid(c);
    for (std::size_t idx = 0; idx < dom.grid_size(); idx += 61) {
      auto x = dom.grid_point(idx);
      const double phase = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
      CHECK(g.values[idx] == doctest::Approx(0.7 * std::cos(phase)).epsilon(1e-11));
    }
  }
  auto c0 = dom.mode_field({0, 0, 0}, 0.7);
  CHECK(rel_err(dom.l2_norm_sq(c0), 0.49 * V) < 1e-12);

  // h1 = (mu + beta) l2 for an eigenmode
  auto c = dom.mode_field({1, -2, 3}, 1.0);
  CHECK(rel_err(dom.h1_norm_sq(c), 15.0 * dom.l2_norm_sq(c)) < 1e-12);
}

TEST_CASE("padded companion: pad then truncate is the identity") {
  for (BoundaryKind bc : {BoundaryKind::DirichletSine, BoundaryKind::PeriodicFourier}) {
    DomainConfig cfg = box3(8);
    cfg.bc = bc;
    SpectralDomain dom(cfg);
    const SpectralDomain* fine = dom.padded();
    REQUIRE(fine != nullptr);
    CHECK(fine->extents()[0] >= 12);
    CHECK(fine->padded() == nullptr);

    GridField g = random_grid(dom, 9);
    auto c = dom.to_spectral(g);
    if (bc == BoundaryKind::PeriodicFourier) {
      // zero Nyquist content so the embed is lossless
      c = dom.truncate_from(*fine, dom.pad_to(*fine, c));
    }
    auto back = dom.truncate_from(*fine, dom.pad_to(*fine, c));
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
      CHECK(back.coeffs[i] == doctest::Approx(c.coeffs[i]).epsilon(1e-14));
  }
}

TEST_CASE("padding preserves the represented function") {
  SpectralDomain dom(box3(8));
  const SpectralDomain* fine = dom.padded();
  auto c = dom.mode_field({2, 3, 1}, 1.2);
  GridField gf = fine->to_grid(dom.pad_to(*fine, c));
  for (std::size_t idx = 0; idx < fine->grid_size(); idx += 101) {
    auto x = fine->grid_point(idx);
    const double expect = 1.2 * std::sin(2 * x[0]) * std::sin(3 * x[1]) * std::sin(x[2]);
    CHECK(gf.values[idx] == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("shape and config validation") {
  SpectralDomain dom(box3(4));
  GridField wrong;
  wrong.values.assign(7, 0.0);
  CHECK_THROWS_AS(dom.to_spectral(wrong), std::invalid_argument);
  SpectralField wrongc;
  wrongc.coeffs.assign(7, 0.0);
  CHECK_THROWS_AS(dom.to_grid(wrongc), std::invalid_argument);

  DomainConfig bad = box3(4);
  bad.d = 4;
  CHECK_THROWS_AS(SpectralDomain{bad}, std::invalid_argument);

  DomainConfig odd = box3(5);
  odd.bc = BoundaryKind::PeriodicFourier;
  CHECK_THROWS_AS(SpectralDomain{odd}, std::invalid_argument);

  DomainConfig neg = box3(4);
  neg.lengths = {-1.0};
  CHECK_THROWS_AS(SpectralDomain{neg}, std::invalid_argument);

  CHECK_THROWS_AS(dom.mode_field({0, 1, 1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dom.mode_field({1, 1, 5}, 1.0), std::invalid_argument);
}

}  // TEST_SUITE
