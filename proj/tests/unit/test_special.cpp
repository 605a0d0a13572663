#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "afpk/errors.hpp"
#include "afpk/special.hpp"

using namespace afpk;
using big = boost::multiprecision::cpp_bin_float_100;

namespace {

// power series in 100-digit arithmetic, summed until the terms drop below 1e-40
double ml_oracle(double a, double b, double z) {
  big s = 0, zk = 1;
  for (int k = 0; k < 5000; ++k) {
    const big term = zk / boost::math::tgamma(big(a) * k + big(b));
    s += term;
    if (k > 10 && abs(term) < 1e-40) break;
    zk *= big(z);
  }
  return static_cast<double>(s);
}

double erfc_scaled(double z) { return static_cast<double>(std::exp(static_cast<long double>(z) * z) * std::erfc(static_cast<long double>(z))); }

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_SUITE("special") {
  TEST_CASE("Mittag-Leffler closed forms") {
    CHECK(mittag_leffler({1.0, 1.0}, -1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(std::abs(mittag_leffler({0.5, 1.0}, -1.0) - 0.4275835761558070) < 1e-12);
    for (double a : {0.3, 0.5, 0.7, 1.0})
      for (double b : {0.5, 1.0, 1.7})
        CHECK(mittag_leffler({a, b}, 0.0) == doctest::Approx(1.0 / std::tgamma(b)).epsilon(1e-15));
  }

  TEST_CASE("Mittag-Leffler against extended-precision series") {
    for (double a : {0.3, 0.5, 0.75, 1.0})
      for (double b : {1.0, 0.5, 1.5, 2.25})
        for (double z : {-0.1, -1.0, -2.5, -4.0}) CHECK(std::abs(mittag_leffler({a, b}, z) - ml_oracle(a, b, z)) < 1e-10);
  }

  TEST_CASE("E_{1/2,1}(-z) = exp(z^2) erfc(z) on [0, 20]") {
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double z = 0.1 * i;
      worst = std::max(worst, std::abs(mittag_leffler({0.5, 1.0}, -z) - erfc_scaled(z)));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("E_{1,1} = exp") {
    for (int i = 0; i <= 100; ++i) {
      const double x = 0.5 * i;
      CHECK(std::abs(mittag_leffler({1.0, 1.0}, -x) - std::exp(-x)) < 1e-12);
    }
  }

  TEST_CASE("regimes agree on the overlap band") {
    for (double a : {0.3, 0.5, 0.8})
      for (double b : {1.0, a, a + 1.0})
        for (double w = detail::kMLSeriesMax; w <= detail::kMLAsymptoticMin; w += 2.5) {
          const double x = std::pow(w, a);
          const double s = detail::ml_series(a, b, x), i = detail::ml_integral(a, b, x), as = detail::ml_asymptotic(a, b, x);
          CHECK(std::abs(s - i) < 1e-8);
          CHECK(std::abs(i - as) < 1e-8);
        }
  }

  TEST_CASE("E_{a,1}(-x) is nonnegative and decreasing") {
    for (double a : {0.2, 0.5, 0.9}) {
      double prev = 1.0;
      for (int i = 1; i <= 400; ++i) {
        const double x = std::pow(10.0, -3.0 + 7.0 * i / 400.0);
        const double e = mittag_leffler({a, 1.0}, -x);
        CHECK(e >= 0.0);
        CHECK(e <= prev);
        prev = e;
      }
    }
  }

  TEST_CASE("Mittag-Leffler errors") {
    CHECK_THROWS_AS(mittag_leffler({0.5, 1.0}, 0.5), DomainError);
    CHECK_THROWS_AS(mittag_leffler({0.0, 1.0}, -1.0), ParameterError);
    CHECK_THROWS_AS(mittag_leffler({1.5, 1.0}, -1.0), ParameterError);
  }

  TEST_CASE("stable density, alpha = 1/2 closed form") {
    auto g = [](double s) { return std::pow(s, -1.5) * std::exp(-0.25 / s) / (2.0 * std::sqrt(std::numbers::pi)); };
    CHECK(stable_density(0.5, 1.0) == doctest::Approx(0.2196956447338612).epsilon(1e-9));
    for (double s : {0.01, 0.05, 0.3, 1.0, 4.0, 30.0, 1e3}) CHECK(stable_density(0.5, s) == doctest::Approx(g(s)).epsilon(1e-8));
  }

  TEST_CASE("stable density normalisation") {
    boost::math::quadrature::sinh_sinh<double> ss;
    for (double a : {0.5, 0.8}) {
      // s = e^u
      const double I = ss.integrate([&](double u) {
        if (std::abs(u) > 700.0) return 0.0;
        const double s = std::exp(u);
        return stable_density(a, s) * s;
      }, 1e-9);
      CHECK(I == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("stable density Laplace transform") {
    boost::math::quadrature::exp_sinh<double> es;
    for (double a : {0.3, 0.5, 0.8})
      for (double lam : {0.5, 1.0, 2.0, 5.0}) {
        const double I = es.integrate([&](double s) { return s > 0.0 ? std::exp(-lam * s) * stable_density(a, s) : 0.0; },
                                      0.0, kInf, 1e-10);
        CHECK(std::abs(I - std::exp(-std::pow(lam, a))) < 1e-6);
      }
    const double I = es.integrate([](double s) { return s > 0.0 ? std::exp(-2.0 * s) * stable_density(0.7, s) : 0.0; }, 0.0, kInf);
    CHECK(I == doctest::Approx(0.19693).epsilon(1e-4));
  }

  TEST_CASE("stable density errors") {
    CHECK_THROWS_AS(stable_density(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(stable_density(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(stable_density(0.5, 0.0), DomainError);
  }
}
