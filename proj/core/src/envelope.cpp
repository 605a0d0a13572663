#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "afpk/errors.hpp"
#include "afpk/kernel.hpp"
#include "envelope_detail.hpp"

namespace afpk {
namespace detail {

double lambda_integral(std::span<const InverseFactor> factors, int k, double p, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  // r = e^u
  auto f = [&](double u) {
    const double r = std::exp(u);
    double lg = (p + 1.0) * u;
    for (const auto& fc : factors) lg += fc.exponent * std::log(fc.phi->inverse(std::pow(r, -k)));
    return std::exp(lg);
  };
  const double uh = std::log(hi);
  if (lo <= 0.0) {
    thread_local boost::math::quadrature::exp_sinh<double> es;
    try {
      return es.integrate([&](double v) { return f(uh - v); }, 0.0, std::numeric_limits<double>::infinity());
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();  // divergent at r -> 0
    }
  }
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, std::log(lo), uh);
}

}  // namespace detail

namespace {

double inv_scaled(const BernsteinSpec& phi, double x) {
  // phi(|x|^{-2})^{-1/k}, with 0 for x = 0
  return x == 0.0 ? 0.0 : 1.0 / phi.symbol(1.0 / (x * x));
}

}  // namespace

BoundEnvelope bound_envelope(const OperatorSpec& spec, const KernelQuery& q, EnvelopeConvention conv) {
  if (!(q.alpha > 0.0 && q.alpha <= 1.0)) throw ParameterError("bound_envelope: alpha must lie in (0,1]");
  if (!(q.t > 0.0)) throw DomainError("bound_envelope: t must be positive");
  const std::size_t ell = spec.ell();
  if (!q.m.empty() && q.m.size() != ell) throw ParameterError("bound_envelope: one derivative order per block");
  auto mo = [&](std::size_t i) { return q.m.empty() ? 0 : q.m[i]; };

  for (double n : spec.block_norms(q.x))
    if (n == 0.0) throw DomainError("bound_envelope: every block coordinate must be nonzero");

  BoundEnvelope env{};
  env.regime = classify_regime(spec, q.alpha, q.t, q.x);
  const auto norms = spec.block_norms(q.x);
  const auto& near = env.regime.near_diagonal;
  const auto& off = env.regime.off_diagonal;
  const double ta = std::pow(q.t, q.alpha);

  env.off_diagonal_factor = 1.0;
  for (std::size_t j : off) {
    const auto& b = spec.block(j);
    env.off_diagonal_factor *=
        std::sqrt(b.phi.symbol(1.0 / (norms[j] * norms[j]))) / std::pow(norms[j], b.dim + mo(j));
  }

  const int l2 = static_cast<int>(near.size());
  if (l2 == 0) {
    if (conv == EnvelopeConvention::AsDisplayed) {
      env.lambda1 = 1.0;
    } else {
      env.lambda2 = 2.0 * ta;
    }
  } else {
    auto factor = [&](std::size_t i) {
      const auto& b = spec.block(i);
      return detail::InverseFactor{&b.phi, 0.5 * (b.dim + mo(i))};
    };
    const double upper = std::pow(2.0 * ta, 1.0 / l2);
    auto lower = [&](std::size_t i) { return std::pow(inv_scaled(spec.block(i).phi, norms[i]), 1.0 / l2); };
    // single-block integrals, reused by Lambda^1 and Lambda^3
    std::vector<double> single(l2);
    for (int n = 0; n < l2; ++n) {
      const auto fc = factor(near[n]);
      single[n] = detail::lambda_integral({&fc, 1}, l2, 0.0, lower(near[n]), upper);
    }
    env.lambda1 = 1.0;
    for (double s : single) env.lambda1 *= s;

    std::vector<detail::InverseFactor> all;
    for (std::size_t i : near) all.push_back(factor(i));
    env.lambda2 = detail::lambda_integral(all, 1, 0.0, inv_scaled(spec.block(near.back()).phi, norms[near.back()]), 2.0 * ta);

    for (int k = 2; k <= l2; ++k) {
      std::vector<detail::InverseFactor> head(all.begin(), all.begin() + (k - 1));
      double term = detail::lambda_integral(head, l2, k - 2.0, lower(near[k - 2]), upper);
      for (int n = k - 1; n < l2; ++n) term *= single[n];
      env.lambda3 += term;
    }
  }
  env.value = std::pow(q.t, 0.5 * static_cast<double>(off.size()) * q.alpha - q.beta) * env.off_diagonal_factor *
              (env.lambda1 + env.lambda2 + env.lambda3);
  return env;
}

}  // namespace afpk
