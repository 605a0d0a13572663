#include "afpk/component.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <string>

#include "afpk/errors.hpp"
#include "afpk/special.hpp"

namespace afpk {
namespace {

constexpr double kPi = boost::math::constants::pi<double>();

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::ooura_fourier_cos;
using boost::math::quadrature::ooura_fourier_sin;

ooura_fourier_cos<double>& ooura_cos() {
  thread_local ooura_fourier_cos<double> q(1e-12, 8);
  return q;
}
ooura_fourier_sin<double>& ooura_sin() {
  thread_local ooura_fourier_sin<double> q(1e-12, 8);
  return q;
}
exp_sinh<double>& half_line() {
  thread_local exp_sinh<double> q;
  return q;
}

// closed form for pure drift b: (4 pi b t)^{-d/2} exp(-r^2 / 4bt)
double gaussian(double b, int d, double t, double x, int m) {
  const double s = b * t;
  const double r = std::abs(x);
  const double p = std::pow(4.0 * kPi * s, -0.5 * d) * std::exp(-r * r / (4.0 * s));
  if (m == 0) return p;
  if (m == 1) return -(d == 1 ? x : r) / (2.0 * s) * p;
  return (r * r / (4.0 * s * s) - 1.0 / (2.0 * s)) * p;
}

// phi = c lambda^{1/2}: Poisson kernel Gamma((d+1)/2) pi^{-(d+1)/2} s (s^2 + r^2)^{-(d+1)/2}, s = c t
double poisson(double s, int d, double x, int m) {
  const double k = 0.5 * (d + 1);
  const double K = std::tgamma(k) * std::pow(kPi, -k) * s;
  const double q = s * s + x * x;
  if (m == 0) return K * std::pow(q, -k);
  if (m == 1) return -2.0 * k * x * K * std::pow(q, -k - 1.0);
  return K * (4.0 * k * (k + 1.0) * x * x * std::pow(q, -k - 2.0) - 2.0 * k * std::pow(q, -k - 1.0));
}

double sinc0(double u) { return std::abs(u) < 1e-2 ? 1.0 - u * u / 6.0 + u * u * u * u / 120.0 : std::sin(u) / u; }
double sinc1(double u) {
  if (std::abs(u) < 1e-2) return -u / 3.0 + u * u * u / 30.0 - std::pow(u, 5) / 840.0;
  return (u * std::cos(u) - std::sin(u)) / (u * u);
}
double sinc2(double u) {
  if (std::abs(u) < 1e-2) return -1.0 / 3.0 + u * u / 10.0 - std::pow(u, 4) / 168.0;
  return ((2.0 - u * u) * std::sin(u) - 2.0 * u * std::cos(u)) / (u * u * u);
}

double j1_over_u(double u) {
  if (std::abs(u) < 1e-4) return 0.5 - u * u / 16.0;
  return boost::math::cyl_bessel_j(1, u) / u;
}

// panels of width ~pi/r up to the decay cutoff, Gauss-Kronrod on each
template <class F>
double panel_integral(F&& f, double r, double rho_max) {
  const double width = r > 0.0 ? std::min(kPi / r, rho_max / 8.0) : rho_max / 8.0;
  double sum = 0.0;
  for (double a = 0.0; a < rho_max; a += width) {
    const double b = std::min(a + width, rho_max);
    sum += gauss_kronrod<double, 31>::integrate(f, a, b, 3, 1e-11);
  }
  return sum;
}

// One stable term c lambda^b plus drift: mix the Gaussian over the b-stable
// subordinator, p = int g_t(s) G(drift t + s, r) ds. Used far from the origin,
// where the Fourier integrals oscillate too fast.
double subordinated_gaussian(const BernsteinSpec& phi, int dim, double t, double x, int m) {
  const StableTerm& term = phi.terms().front();
  const double tau = std::pow(t * term.coef, 1.0 / term.beta);
  const double shift = phi.drift() * t;
  const double r = std::abs(x);
  const double u0 = std::log(std::max(r * r / (2.0 * dim * tau), 1e-300));
  auto f = [&](double w) {
    const double u = u0 + w;
    if (std::abs(u) > 700.0) return 0.0;
    const double v = std::exp(u);
    const double g = stable_density(term.beta, v);
    if (g == 0.0) return 0.0;
    const double sig = shift + tau * v;
    double G = std::pow(4.0 * kPi * sig, -0.5 * dim) * std::exp(-r * r / (4.0 * sig));
    if (m == 1) G *= -(dim == 1 ? x : r) / (2.0 * sig);
    if (m == 2) G *= r * r / (4.0 * sig * sig) - 1.0 / (2.0 * sig);
    return g * v * G;
  };
  thread_local boost::math::quadrature::sinh_sinh<double> ss;
  return ss.integrate(f, 1e-9);
}

}  // namespace

double component_density(const BernsteinSpec& phi, int dim, double t, double x, int m) {
  if (dim < 1) throw ParameterError("component_density: dimension must be positive");
  if (dim > 3) throw UnsupportedError("component_density: dimension " + std::to_string(dim) + " > 3");
  if (m < 0 || m > 2) throw ParameterError("component_density: derivative order must be 0, 1 or 2");
  if (!(t > 0.0)) throw DomainError("component_density: t must be positive");
  if (dim > 1 && x < 0.0) throw DomainError("component_density: radius must be >= 0");

  if (phi.terms().empty()) return gaussian(phi.drift(), dim, t, x, m);
  if (phi.drift() == 0.0 && phi.terms().size() == 1 && phi.terms().front().beta == 0.5)
    return poisson(phi.terms().front().coef * t, dim, x, m);

  auto decay = [&](double rho) { return std::isfinite(rho) ? std::exp(-t * phi.symbol(rho * rho)) : 0.0; };
  // radius beyond which the symbol factor is below e^{-40}
  const double rho_s = std::sqrt(phi.inverse(40.0 / t));
  const double r = std::abs(x);
  const bool near = r * rho_s <= 30.0;
  if (!near && phi.terms().size() == 1 && phi.terms().front().beta < 1.0) return subordinated_gaussian(phi, dim, t, x, m);

  if (dim == 1) {
    const double sgn = x < 0.0 ? -1.0 : 1.0;
    if (m == 1 && r == 0.0) return 0.0;
    if (near) {
      auto f = [&](double rho) {
        const double e = decay(rho);
        if (e == 0.0) return 0.0;
        if (m == 0) return std::cos(rho * r) * e;
        if (m == 1) return -rho * std::sin(rho * r) * e;
        return -rho * rho * std::cos(rho * r) * e;
      };
      return (m == 1 ? sgn : 1.0) * half_line().integrate(f) / kPi;
    }
    if (m == 0) return ooura_cos().integrate(decay, r).first / kPi;
    if (m == 1) return -sgn * ooura_sin().integrate([&](double rho) { return rho * decay(rho); }, r).first / kPi;
    return -ooura_cos().integrate([&](double rho) { return rho * rho * decay(rho); }, r).first / kPi;
  }

  if (dim == 3) {
    const double c = 1.0 / (2.0 * kPi * kPi);
    if (near) {
      auto f = [&](double rho) {
        const double e = decay(rho), u = rho * r;
        if (e == 0.0) return 0.0;
        if (m == 0) return rho * rho * e * sinc0(u);
        if (m == 1) return rho * rho * rho * e * sinc1(u);
        return rho * rho * rho * rho * e * sinc2(u);
      };
      return c * half_line().integrate(f);
    }
    const double A = c * ooura_sin().integrate([&](double rho) { return rho * decay(rho); }, r).first;
    if (m == 0) return A / r;
    const double A1 = c * ooura_cos().integrate([&](double rho) { return rho * rho * decay(rho); }, r).first;
    if (m == 1) return A1 / r - A / (r * r);
    const double A2 = -c * ooura_sin().integrate([&](double rho) { return rho * rho * rho * decay(rho); }, r).first;
    return A2 / r - 2.0 * A1 / (r * r) + 2.0 * A / (r * r * r);
  }

  // dim == 2
  const double c = 1.0 / (2.0 * kPi);
  // push the cutoff out until the polynomial weight cannot revive the tail
  double rho_max = rho_s;
  while (std::pow(rho_max, m + 1) * decay(rho_max) > 1e-18 * std::pow(rho_s, m + 1)) rho_max *= 1.5;
  auto f = [&](double rho) {
    const double e = decay(rho), u = rho * r;
    if (m == 0) return rho * boost::math::cyl_bessel_j(0, u) * e;
    if (m == 1) return -rho * rho * (r == 0.0 ? 0.0 : boost::math::cyl_bessel_j(1, u)) * e;
    return -rho * rho * rho * (boost::math::cyl_bessel_j(0, u) - j1_over_u(u)) * e;
  };
  return c * panel_integral(f, r, rho_max);
}

double product_density(const OperatorSpec& spec, double t, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(spec.total_dim()))
    throw ParameterError("product_density: point dimension mismatch");
  double p = 1.0;
  for (std::size_t i = 0; i < spec.ell(); ++i) {
    const auto& b = spec.block(i);
    double xi = 0.0;
    if (b.dim == 1) {
      xi = x[spec.offset(i)];
    } else {
      for (int k = 0; k < b.dim; ++k) xi += x[spec.offset(i) + k] * x[spec.offset(i) + k];
      xi = std::sqrt(xi);
    }
    p *= component_density(b.phi, b.dim, t, xi, 0);
  }
  return p;
}

}  // namespace afpk
