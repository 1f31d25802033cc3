#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "dampedwave/nonlinearity.hpp"
#include "oracles.hpp"

using namespace dampedwave;

namespace {

NonlinearitySpec cubic() { return NonlinearitySpec::make({{1.0, 3.0}}); }

}  // namespace

TEST_SUITE("nonlinearity") {

TEST_CASE("point evaluations") {
  auto c = cubic();
  CHECK(c.f(2.0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(c.f(0.0) == 0.0);
  CHECK(c.F(2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(c.F(-2.0) == doctest::Approx(4.0).epsilon(1e-15));

  auto two = NonlinearitySpec::make({{1.0, 3.0}, {2.0, 2.0}});
  CHECK(two.f(-1.0) == doctest::Approx(-3.0).epsilon(1e-15));  // -1 + 2*(-1)*1
  CHECK(two.p0() == 2.0);
  CHECK(two.p() == 3.0);
  CHECK(two.epsilon() == 1.0);
}

TEST_CASE("F matches adaptive quadrature of f") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> sd(-3.0, 3.0);
  std::vector<NonlinearitySpec> specs = {
      cubic(),
      NonlinearitySpec::make({{0.7, 2.0}, {1.3, 4.0}}),
      NonlinearitySpec::make({{1.0, 2.5}}),
      NonlinearitySpec::make({{0.2, 1.5}, {2.0, 3.7}}),
  };
  for (const auto& spec : specs) {
    for (int i = 0; i < 20; ++i) {
      const double s = sd(rng);
      const double q = oracles::adaptive_quadrature([&](double t) { return spec.f(t); }, 0.0, s);
      CHECK(std::fabs(spec.F(s) - q) < 1e-10);
    }
  }
}

TEST_CASE("validation rejects bad terms") {
  CHECK_THROWS_AS(NonlinearitySpec::make({}), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::make({{-1.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::make({{0.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::make({{1.0, 0.5}}), std::invalid_argument);
  // smallest exponent exactly 1 leaves epsilon = 0
  CHECK_THROWS_AS(NonlinearitySpec::make({{1.0, 1.0}, {1.0, 3.0}}), std::invalid_argument);
  CHECK(NonlinearitySpec::zero().is_zero());
  CHECK(NonlinearitySpec::zero().f(3.0) == 0.0);
}

TEST_CASE("hypothesis report") {
  auto r = hypothesis_report(cubic(), 3);
  CHECK(r.theorem_dimension);
  CHECK(r.subcritical_i_ii);      // 3 < 5
  CHECK(r.part_iii_applicable);   // 3 <= 3
  CHECK(r.p == 3.0);
  CHECK(r.p0 == 3.0);
  CHECK(r.epsilon == 2.0);

  auto q = hypothesis_report(NonlinearitySpec::make({{1.0, 5.0}}), 3);
  CHECK(!q.subcritical_i_ii);     // 5 < 5 fails
  CHECK(!q.part_iii_applicable);

  auto s = hypothesis_report(NonlinearitySpec::make({{1.0, 2.0}}), 3);
  CHECK(s.subcritical_i_ii);
  CHECK(s.part_iii_applicable);
  CHECK(s.epsilon == 1.0);

  auto low = hypothesis_report(cubic(), 2);
  CHECK(!low.theorem_dimension);
  CHECK(low.subcritical_i_ii);

  CHECK_THROWS_AS(hypothesis_report(cubic(), 4), std::invalid_argument);
}

TEST_CASE("sign structure: f odd, F even and nonnegative") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> sd(-5.0, 5.0);
  std::uniform_real_distribution<double> ad(1.1, 5.0);
  std::uniform_real_distribution<double> ld(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto spec = NonlinearitySpec::make({{ld(rng), ad(rng)}, {ld(rng), ad(rng)}});
    for (int i = 0; i < 40; ++i) {
      const double s = sd(rng);
      CHECK(spec.f(-s) == doctest::Approx(-spec.f(s)).epsilon(1e-13));
      CHECK(spec.F(-s) == doctest::Approx(spec.F(s)).epsilon(1e-13));
      CHECK(spec.F(s) >= 0.0);
    }
  }
}

TEST_CASE("growth inequality s f(s) >= (2 + epsilon) F(s)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> sd(-6.0, 6.0);
  std::uniform_real_distribution<double> ad(1.05, 6.0);
  std::uniform_real_distribution<double> ld(0.05, 4.0);
  for (int trial = 0; trial < 60; ++trial) {
    auto spec = NonlinearitySpec::make(
        {{ld(rng), ad(rng)}, {ld(rng), ad(rng)}, {ld(rng), ad(rng)}});
    const double two_eps = 2.0 + spec.epsilon();
    for (int i = 0; i < 50; ++i) {
      const double s = sd(rng);
      const double slack = s * spec.f(s) - two_eps * spec.F(s);
      CHECK(slack >= -1e-11 * (1.0 + std::fabs(s * spec.f(s))));
    }
    // equality on the lowest term alone
    auto single = NonlinearitySpec::make({spec.terms().front()});
    const double s = 1.7;
    CHECK(s * single.f(s) ==
          doctest::Approx((2.0 + single.epsilon()) * single.F(s)).epsilon(1e-12));
  }
}

TEST_CASE("local Lipschitz bound with C = sum lambda alpha") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> sd(-3.0, 3.0);
  auto spec = NonlinearitySpec::make({{1.0, 3.0}, {0.5, 2.2}});
  const double C = spec.lipschitz_coeff();
  const double pm1 = spec.p() - 1.0;
  for (int i = 0; i < 500; ++i) {
    const double s1 = sd(rng), s2 = sd(rng);
    const double lhs = std::fabs(spec.f(s1) - spec.f(s2));
    const double rhs = C * std::fabs(s1 - s2) *
                       (1.0 + std::pow(std::fabs(s1), pm1) + std::pow(std::fabs(s2), pm1));
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("dF/ds matches f at second order") {
  auto spec = NonlinearitySpec::make({{1.0, 3.0}, {0.3, 4.5}});
  for (double s : {-2.0, -0.7, 0.4, 1.9}) {
    double prev_err = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-2 / (1 << k);
      const double fd = (spec.F(s + h) - spec.F(s - h)) / (2.0 * h);
      const double err = std::fabs(fd - spec.f(s));
      if (k > 0) CHECK(err < 0.35 * prev_err);  // ~ factor 4 per halving
      prev_err = err;
    }
  }
}

TEST_CASE("array forms agree with scalar forms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> sd(-2.0, 2.0);
  auto spec = NonlinearitySpec::make({{1.0, 3.0}, {0.5, 2.5}});
  kernels::buffer s(100), f_out(100), F_out(100);
  for (auto& x : s) x = sd(rng);
  spec.f_array(s.data(), f_out.data(), s.size());
  spec.F_array(s.data(), F_out.data(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(f_out[i] == doctest::Approx(spec.f(s[i])).epsilon(1e-13));
    CHECK(F_out[i] == doctest::Approx(spec.F(s[i])).epsilon(1e-13));
  }
}

}  // TEST_SUITE
