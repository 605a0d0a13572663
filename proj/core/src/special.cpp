#include "afpk/special.hpp"

#include <quadmath.h>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "afpk/errors.hpp"

namespace afpk {
namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// ---- double-double helpers ------------------------------------------------

struct DD {
  double hi, lo;
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD dd_mul_d(DD a, double b) {
  double p = a.hi * b;
  double e = std::fma(a.hi, b, -p);
  e += a.lo * b;
  return quick_two_sum(p, e);
}

__float128 rgamma_q(__float128 x) {
  if (x > 0) return expq(-lgammaq(x));
  if (x == floorq(x)) return 0;
  const __float128 pi = M_PIq;
  return sinq(pi * x) * expq(lgammaq((__float128)1 - x)) / pi;
}

// ---- coefficient caches ---------------------------------------------------

struct SeriesCoeffs {
  std::vector<DD> c;         // 1/Gamma(a k + b)
  std::vector<double> logc;  // log|c_k|, -inf at poles
};

struct AsymCoeffs {
  std::vector<double> c;    // 1/Gamma(b - a k), index k (k = 0 unused)
  std::vector<double> env;  // lgamma(a k + 1 - b) when the argument is > 1
};

constexpr double kSeriesWCap = 60.0;
constexpr int kAsymMaxTerms = 800;

std::shared_ptr<const SeriesCoeffs> build_series(double a, double b) {
  auto out = std::make_shared<SeriesCoeffs>();
  const int kmax = static_cast<int>(std::ceil((4.0 * kSeriesWCap + 60.0 - std::min(b, 0.0)) / a)) + 2;
  out->c.reserve(kmax + 1);
  out->logc.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    __float128 arg = (__float128)a * k + (__float128)b;
    __float128 c = rgamma_q(arg);
    double hi = (double)c;
    double lo = (double)(c - (__float128)hi);
    out->c.push_back({hi, lo});
    out->logc.push_back(c == 0 ? -std::numeric_limits<double>::infinity() : (double)logq(fabsq(c)));
  }
  return out;
}

std::shared_ptr<const AsymCoeffs> build_asym(double a, double b) {
  auto out = std::make_shared<AsymCoeffs>();
  out->c.resize(kAsymMaxTerms + 1);
  out->env.resize(kAsymMaxTerms + 1);
  for (int k = 1; k <= kAsymMaxTerms; ++k) {
    __float128 arg = (__float128)b - (__float128)a * k;
    out->c[k] = (double)rgamma_q(arg);
    double g = a * k + 1.0 - b;
    out->env[k] = g > 1.0 ? boost::math::lgamma(g) : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

template <class T, std::shared_ptr<const T> (*Build)(double, double)>
const T& cached(double a, double b) {
  thread_local double la = std::numeric_limits<double>::quiet_NaN();
  thread_local double lb = std::numeric_limits<double>::quiet_NaN();
  thread_local std::shared_ptr<const T> last;
  if (last && la == a && lb == b) return *last;
  static std::mutex mu;
  static std::map<std::pair<double, double>, std::shared_ptr<const T>> table;
  std::shared_ptr<const T> p;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = table[{a, b}];
    if (!slot) slot = Build(a, b);
    p = slot;
  }
  la = a;
  lb = b;
  last = p;
  return *last;
}

void check_params(double a, double b) {
  if (!(a > 0.0 && a <= 1.0)) throw ParameterError("mittag_leffler: a must lie in (0,1]");
  if (!std::isfinite(b)) throw ParameterError("mittag_leffler: b must be finite");
}

}  // namespace

namespace detail {

double rgamma(double x) { return (double)rgamma_q((__float128)x); }

double ml_series(double a, double b, double x) {
  check_params(a, b);
  const auto& co = cached<SeriesCoeffs, build_series>(a, b);
  if (x == 0.0) return co.c[0].hi;
  const double lx = std::log(x);
  // terms are log-concave in k, so stop once past the peak and negligible
  double lmax = -std::numeric_limits<double>::infinity();
  double prev = lmax;
  std::size_t K = 0;
  bool done = false;
  for (std::size_t k = 0; k < co.c.size(); ++k) {
    double lt = co.logc[k] + static_cast<double>(k) * lx;
    if (!std::isfinite(lt)) continue;
    lmax = std::max(lmax, lt);
    if (lt < prev && lt < lmax - 85.0 && lt < -85.0) {
      K = k;
      done = true;
      break;
    }
    prev = lt;
  }
  if (!done) throw ConvergenceError("mittag_leffler: series table exhausted");
  const double z = -x;
  DD s = co.c[K];
  for (std::size_t k = K; k-- > 0;) s = dd_add(dd_mul_d(s, z), co.c[k]);
  return s.hi + s.lo;
}

double ml_integral(double a, double b, double x) {
  check_params(a, b);
  if (x == 0.0) return rgamma(b);
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  thread_local boost::math::quadrature::exp_sinh<double> es;
  constexpr double tol = 1e-14;

  if (a == 1.0) {
    if (b > 1.0) {
      auto f = [&](double s, double xc) {
        // xc is the signed distance to the nearer endpoint
        double sc = s > 0.5 ? xc : 1.0 - s;
        return std::exp(-x * s) * std::pow(sc, b - 2.0);
      };
      double I = ts.integrate(f, 0.0, 1.0, tol);
      return I * rgamma(b - 1.0);
    }
    return rgamma(b) - x * ml_integral(1.0, b + 1.0, x);
  }

  // keep the u^(a-b) endpoint singularity mild
  if (b >= 1.0 + 0.5 * a) return (ml_integral(a, b - a, x) - rgamma(b - a)) / (-x);

  const double s1 = std::sin(kPi * (1.0 - b));
  const double s2 = std::sin(kPi * (1.0 - b + a));
  const double c = std::cos(kPi * a);
  auto f = [&](double u) {
    if (u <= 0.0) return 0.0;
    double ua = std::pow(u, a);
    double den = ua * ua + 2.0 * ua * x * c + x * x;
    return std::exp((a - b) * std::log(u) - u) * (ua * s1 + x * s2) / den;
  };
  const double ustar = std::pow(x, 1.0 / a);
  double I1 = ts.integrate(f, 0.0, ustar, tol);
  double I2 = es.integrate(f, ustar, std::numeric_limits<double>::infinity(), tol);
  return (I1 + I2) / kPi;
}

double ml_asymptotic(double a, double b, double x) {
  check_params(a, b);
  if (!(x > 0.0)) throw DomainError("mittag_leffler: asymptotic regime needs x > 0");
  const auto& co = cached<AsymCoeffs, build_asym>(a, b);
  const double lx = std::log(x);
  double sum = 0.0;
  double prev_env = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kAsymMaxTerms; ++k) {
    if (!std::isnan(co.env[k])) {
      double env = co.env[k] - k * lx;
      if (env > prev_env) break;  // past the optimal truncation point
      prev_env = env;
    }
    double ck = co.c[k];
    if (ck != 0.0) {
      double mag = std::exp(std::log(std::abs(ck)) - k * lx);
      sum -= (k % 2 == 0 ? 1.0 : -1.0) * (ck > 0 ? mag : -mag);  // z^{-k} / Gamma(b - a k)
    }
    // coefficients near a pole can be tiny, so the stop test uses the envelope
    if (!std::isnan(co.env[k]) && std::exp(co.env[k] - k * lx) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

double mittag_leffler(MLParams p, double z) {
  check_params(p.a, p.b);
  if (std::isnan(z) || z > 0.0) throw DomainError("mittag_leffler: argument must be <= 0");
  const double x = -z;
  if (x == 0.0) return detail::rgamma(p.b);
  if (std::isinf(x)) return 0.0;
  const double w = p.a == 1.0 ? x : std::pow(x, 1.0 / p.a);
  if (w <= detail::kMLSeriesMax) return detail::ml_series(p.a, p.b, x);
  if (w < detail::kMLAsymptoticMin) return detail::ml_integral(p.a, p.b, x);
  return detail::ml_asymptotic(p.a, p.b, x);
}

double stable_density(double alpha, double s) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stable_density: alpha must lie in (0,1)");
  if (!(s > 0.0)) throw DomainError("stable_density: s must be positive");
  if (std::isinf(s)) return 0.0;

  const double y = std::pow(s, -alpha);
  if (y <= 0.25) {
    // large-s expansion, convergent for alpha < 1
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      double lg = boost::math::lgamma(alpha * k + 1.0) - boost::math::lgamma(k + 1.0) + k * std::log(y);
      double sn = std::sin(kPi * alpha * k);
      double term = (k % 2 ? 1.0 : -1.0) * std::exp(lg) * sn;
      sum += term;
      if (std::exp(lg) < 1e-18 * std::abs(sum)) break;
    }
    return sum / (kPi * s);
  }

  const double c = alpha / (1.0 - alpha);
  const double p = 1.0 / (1.0 - alpha);
  const double ls = std::log(s);
  // small-s rate exp(-(1-alpha) alpha^c s^{-c}): negligible, and the
  // quadrature below stalls once the integrand nears underflow
  if ((1.0 - alpha) * std::exp(c * std::log(alpha) - c * ls) > 600.0) return 0.0;
  // log of the integrand; unimodal in th since A(th) is monotone
  auto L = [&](double th) {
    if (th <= 0.0 || th >= kPi) return -std::numeric_limits<double>::infinity();
    double logA = c * std::log(std::sin(alpha * th)) + std::log(std::sin((1.0 - alpha) * th)) -
                  p * std::log(std::sin(th));
    return logA - p * ls - std::exp(logA - c * ls);
  };
  auto f = [&](double th) { return std::exp(L(th)); };
  // locate the peak and the window where the integrand is within e^{-50} of it;
  // the adaptive rule otherwise misses narrow peaks at the endpoints
  double lo = 0.0, hi = kPi;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
    (L(m1) < L(m2) ? lo : hi) = L(m1) < L(m2) ? m1 : m2;
    if (hi - lo < 1e-14) break;
  }
  const double peak = 0.5 * (lo + hi), Lmax = L(peak);
  auto edge = [&](double inner, double outer) {
    if (L(outer) > Lmax - 50.0) return outer;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (inner + outer);
      (L(mid) > Lmax - 50.0 ? inner : outer) = mid;
    }
    return outer;
  };
  const double a = edge(peak, 0.0), b = edge(peak, kPi);
  using boost::math::quadrature::gauss_kronrod;
  // rounding in L limits the attainable relative accuracy to ~eps |L|
  const double tol = std::max(1e-13, 1e-14 * (1.0 + std::abs(Lmax)));
  double I = 0.0;
  const double slack = 1e-3 * (b - a);
  if (peak - a > slack && b - peak > slack) {
    I = gauss_kronrod<double, 61>::integrate(f, a, peak, 20, tol) + gauss_kronrod<double, 61>::integrate(f, peak, b, 20, tol);
  } else {
    I = gauss_kronrod<double, 61>::integrate(f, a, b, 20, tol);
  }
  return c / kPi * I;
}

}  // namespace afpk
