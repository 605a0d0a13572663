#include "afpk/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "afpk/errors.hpp"

namespace afpk {

BernsteinSpec::BernsteinSpec(double drift, std::vector<StableTerm> terms)
    : drift_(drift), terms_(std::move(terms)) {
  if (!(drift_ >= 0.0) || !std::isfinite(drift_))
    throw ParameterError("bernstein: drift must be a finite nonnegative number");
  for (const auto& t : terms_) {
    if (!(t.coef > 0.0) || !std::isfinite(t.coef))
      throw ParameterError("bernstein: term coefficients must be positive");
    if (!(t.beta > 0.0 && t.beta <= 1.0))
      throw ParameterError("bernstein: term exponents must lie in (0,1], got " +
                           std::to_string(t.beta));
  }
  if (terms_.empty() && drift_ == 0.0)
    throw ParameterError("bernstein: phi must have a term or a positive drift");
}

BernsteinSpec BernsteinSpec::power(double beta, double coef) {
  if (beta == 1.0) return BernsteinSpec(coef, {});
  return BernsteinSpec(0.0, {{coef, beta}});
}

BernsteinSpec BernsteinSpec::brownian(double drift) { return BernsteinSpec(drift, {}); }

double BernsteinSpec::symbol(double lambda) const {
  if (lambda == 0.0) return 0.0;
  double v = drift_ * lambda;
  for (const auto& t : terms_) v += t.coef * (t.beta == 0.5 ? std::sqrt(lambda) : std::pow(lambda, t.beta));
  return v;
}

double BernsteinSpec::operator()(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("bernstein: eval needs lambda > 0");
  return symbol(lambda);
}

double BernsteinSpec::derivative(double lambda) const {
  double v = drift_;
  for (const auto& t : terms_) v += t.coef * t.beta * std::pow(lambda, t.beta - 1.0);
  return v;
}

double BernsteinSpec::min_exponent() const {
  double e = drift_ > 0.0 ? 1.0 : 2.0;
  for (const auto& t : terms_) e = std::min(e, t.beta);
  return e;
}

double BernsteinSpec::max_exponent() const {
  double e = drift_ > 0.0 ? 1.0 : 0.0;
  for (const auto& t : terms_) e = std::max(e, t.beta);
  return e;
}

bool BernsteinSpec::is_pure_power() const {
  return (terms_.empty()) || (terms_.size() == 1 && drift_ == 0.0);
}

double BernsteinSpec::inverse(double y) const {
  if (!(y > 0.0)) throw DomainError("bernstein: inverse needs y > 0");
  if (!std::isfinite(y)) return y;
  // bracket [lo, hi] with phi(lo) <= y <= phi(hi), seeded by the dominant power
  double seed = std::pow(y, 1.0 / max_exponent());
  if (!(seed > 0.0) || !std::isfinite(seed)) seed = 1.0;
  double lo = seed, hi = seed;
  while (symbol(hi) < y) hi *= 2.0;
  while (symbol(lo) > y) lo *= 0.5;
  // bisection on log(lambda)
  for (int it = 0; it < 200 && hi > lo * (1.0 + 4e-16); ++it) {
    double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (symbol(mid) < y) lo = mid;
    else hi = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton polish, kept only when it improves the residual
  for (int it = 0; it < 3; ++it) {
    double r = symbol(x) - y;
    double d = derivative(x);
    if (!(d > 0.0)) break;
    double xn = x - r / d;
    if (!(xn > 0.0) || std::abs(symbol(xn) - y) >= std::abs(r)) break;
    x = xn;
  }
  return x;
}

double eval(const BernsteinSpec& spec, double lambda) { return spec(lambda); }
double inverse(const BernsteinSpec& spec, double y) { return spec.inverse(y); }

ScalingCertificate wls_certificate(const BernsteinSpec& spec) {
  return {1.0, std::min(1.0, spec.min_exponent())};
}

}  // namespace afpk
