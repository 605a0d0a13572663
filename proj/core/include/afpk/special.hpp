#pragma once

namespace afpk {

struct MLParams {
  double a;  // in (0, 1]
  double b;
};

// Two-parameter Mittag-Leffler function on the closed negative real axis.
double mittag_leffler(MLParams params, double z);

// Density of the one-sided alpha-stable law with Laplace transform exp(-lambda^alpha).
double stable_density(double alpha, double s);

namespace detail {

// Individual regimes, exposed for overlap testing. All take x = -z >= 0.
double ml_series(double a, double b, double x);
double ml_integral(double a, double b, double x);
double ml_asymptotic(double a, double b, double x);

// Regime boundaries in w = x^(1/a).
inline constexpr double kMLSeriesMax = 30.0;
inline constexpr double kMLAsymptoticMin = 45.0;

// 1/Gamma(x), zero at the poles.
double rgamma(double x);

}  // namespace detail
}  // namespace afpk
