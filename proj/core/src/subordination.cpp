#include "afpk/subordination.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "afpk/errors.hpp"
#include "afpk/special.hpp"

namespace afpk {
namespace {

void check_alpha(double a) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("subordination: alpha must lie in (0,1)");
}

// M(z) from the stable density; exact apart from quadrature error.
double wright_m_exact(double alpha, double z) {
  if (z == 0.0) return 1.0 / boost::math::tgamma(1.0 - alpha);
  const double s = std::pow(z, -1.0 / alpha);
  return std::pow(s, 1.0 + alpha) * stable_density(alpha, s) / alpha;
}

struct MTable {
  double zmax;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

constexpr int kTableSize = 4097;

std::shared_ptr<const MTable> build_table(double alpha) {
  // M(z) ~ exp(-c z^{1/(1-alpha)}); stop where the log-decay reaches 80
  const double c = (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha));
  const double zmax = std::pow(80.0 / c, 1.0 - alpha);
  std::vector<double> v(kTableSize);
  const double h = zmax / (kTableSize - 1);
  for (int i = 0; i < kTableSize; ++i) v[i] = wright_m_exact(alpha, i * h);
  const double d0 = -detail::rgamma(1.0 - 2.0 * alpha);
  return std::make_shared<MTable>(
      MTable{zmax, boost::math::interpolators::cardinal_cubic_b_spline<double>(v.begin(), v.end(), 0.0, h, d0, 0.0)});
}

const MTable& table_for(double alpha) {
  thread_local double last_alpha = -1.0;
  thread_local std::shared_ptr<const MTable> last;
  if (last && last_alpha == alpha) return *last;
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const MTable>> tables;
  std::shared_ptr<const MTable> p;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = tables[alpha];
    if (!slot) slot = build_table(alpha);
    p = slot;
  }
  last_alpha = alpha;
  last = p;
  return *last;
}

// Hat-function moments on [B, B + d] against v^{mu-1}:
// lo = int_0^d y (B+y)^{mu-1} dy, hi = int_0^d (d-y) (B+y)^{mu-1} dy.
// Short intervals far from the singularity use the binomial series.
void hat_moments(double B, double d, double mu, double& lo, double& hi) {
  if (B == 0.0) {
    lo = std::pow(d, mu + 1.0) / (mu + 1.0);
    hi = std::pow(d, mu + 1.0) / (mu * (mu + 1.0));
    return;
  }
  const double x = d / B;
  if (x < 0.125) {
    double c = 1.0, xp = x * x, sl = 0.0, sh = 0.0;
    for (int j = 0; j < 40; ++j) {
      // int_0^x y^{j+1} dy and int_0^x (x-y) y^j dy
      sl += c * xp / (j + 2.0);
      sh += c * xp / ((j + 1.0) * (j + 2.0));
      if (std::abs(c * xp) < 1e-18 * std::abs(sl)) break;
      c *= (mu - 1.0 - j) / (j + 1.0);
      xp *= x;
    }
    const double scale = std::pow(B, mu + 1.0);
    lo = scale * sl;
    hi = scale * sh;
    return;
  }
  const double A = B + d;
  const double P1 = (std::pow(A, mu + 1.0) - std::pow(B, mu + 1.0)) / (mu + 1.0);
  const double P0 = (std::pow(A, mu) - std::pow(B, mu)) / mu;
  lo = P1 - B * P0;
  hi = A * P0 - P1;
}

// Weights of the exact integral of the piecewise-linear interpolant on `s`
// against (T - u)^{mu-1}/Gamma(mu), T = s[K].
std::vector<double> pl_weights(const std::vector<double>& s, std::size_t K, double mu) {
  std::vector<double> w(K + 1, 0.0);
  const double T = s[K];
  const double g = boost::math::tgamma(mu);
  for (std::size_t i = 0; i < K; ++i) {
    const double B = T - s[i + 1], len = s[i + 1] - s[i];
    double lo = 0.0, hi = 0.0;
    // v = T - u runs over [B, B + len]; the node s[i] sits at v = B + len
    hat_moments(B, len, mu, lo, hi);
    w[i] += lo / (len * g);
    w[i + 1] += hi / (len * g);
  }
  return w;
}

// Time mesh: geometric below h0 (4 nodes per octave down to s_min), uniform
// step h0 up to t + h0, then every interval bisected `level` times.
std::vector<double> time_mesh(double t, std::size_t n0, double s_min, int level, std::size_t& k_t) {
  const double h0 = t / static_cast<double>(n0);
  std::vector<double> base{0.0};
  int octaves = s_min < h0 ? static_cast<int>(std::ceil(std::log2(h0 / s_min))) : 0;
  octaves = std::min(octaves, 400);
  for (int m = 4 * octaves; m >= 1; --m) base.push_back(h0 * std::exp2(-0.25 * m));
  for (std::size_t k = 1; k <= n0 + 1; ++k) base.push_back(static_cast<double>(k) * h0);
  const std::size_t sub = std::size_t{1} << level;
  std::vector<double> s;
  s.reserve((base.size() - 1) * sub + 1);
  for (std::size_t i = 0; i + 1 < base.size(); ++i)
    for (std::size_t j = 0; j < sub; ++j)
      s.push_back(base[i] + (base[i + 1] - base[i]) * static_cast<double>(j) / static_cast<double>(sub));
  s.push_back(base.back());
  k_t = s.size() - 1 - sub;  // node at t
  return s;
}

// One evaluation of phi_{alpha,beta}(t, r_j) at the given refinement level.
std::vector<double> weight_on_grid(double alpha, double gamma, double t, std::span<const double> r, int level) {
  constexpr std::size_t n0 = 256;
  const double zmax = wright_m_support(alpha);
  // below (r/zmax)^{1/alpha} the integrand vanishes for every r in the grid
  const double s_min = 0.5 * std::pow(r.front() / zmax, 1.0 / alpha);
  std::size_t kt = 0;
  const std::vector<double> s = time_mesh(t, n0, s_min, level, kt);
  std::vector<double> sa(s.size(), 0.0);
  for (std::size_t k = 1; k < s.size(); ++k) sa[k] = std::pow(s[k], -alpha);

  std::vector<double> out(r.size());
  std::vector<double> f(s.size());
  if (gamma > 0.0) {
    const double mu = 1.0 - gamma;
    const auto wlo = pl_weights(s, kt - 1, mu);
    const auto whi = pl_weights(s, kt + 1, mu);
    const double dt = s[kt + 1] - s[kt - 1];
    for (std::size_t j = 0; j < r.size(); ++j) {
      for (std::size_t k = 1; k < s.size(); ++k) f[k] = sa[k] * wright_m(alpha, r[j] * sa[k]);
      double hi = 0.0, lo = 0.0;
      for (std::size_t k = 1; k <= kt + 1; ++k) hi += whi[k] * f[k];
      for (std::size_t k = 1; k <= kt - 1; ++k) lo += wlo[k] * f[k];
      out[j] = (hi - lo) / dt;
    }
  } else {
    const auto w = pl_weights(s, kt, -gamma);
    for (std::size_t j = 0; j < r.size(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 1; k <= kt; ++k) acc += w[k] * sa[k] * wright_m(alpha, r[j] * sa[k]);
      out[j] = acc;
    }
  }
  return out;
}

}  // namespace

double wright_m(double alpha, double z) {
  check_alpha(alpha);
  if (z < 0.0) throw DomainError("wright_m: z must be >= 0");
  const MTable& tb = table_for(alpha);
  if (z >= tb.zmax) return 0.0;
  return std::max(0.0, tb.spline(z));
}

double wright_m_support(double alpha) {
  check_alpha(alpha);
  return table_for(alpha).zmax;
}

double inverse_subordinator_density(SubordinationParams p, double t, double r) {
  check_alpha(p.alpha);
  if (!(t > 0.0)) throw DomainError("inverse_subordinator_density: t must be positive");
  if (!(r > 0.0)) throw DomainError("inverse_subordinator_density: r must be positive");
  const double a = p.alpha;
  const double y = r * std::pow(t, -a);
  if (y <= 0.25) {
    // Wright series in y = r t^{-alpha}; avoids overflow of s as r -> 0
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      const double mag = std::exp(std::lgamma(a * k + 1.0) - std::lgamma(k + 1.0) + (k == 1 ? 0.0 : (k - 1) * std::log(y)));
      sum += (k % 2 ? 1.0 : -1.0) * mag * std::sin(std::numbers::pi * a * k);
      if (mag < 1e-18 * std::abs(sum)) break;
    }
    return sum * std::pow(t, -a) / (a * std::numbers::pi);
  }
  const double s = t * std::pow(r, -1.0 / a);
  if (s == 0.0) return 0.0;
  const double g = stable_density(a, s);
  return g == 0.0 ? 0.0 : t / a * std::pow(r, -1.0 - 1.0 / a) * g;
}

KernelWeightReport fractional_kernel_weight_report(SubordinationParams p, double beta, double t,
                                                   std::span<const double> r) {
  check_alpha(p.alpha);
  if (!(t > 0.0)) throw DomainError("fractional_kernel_weight: t must be positive");
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (!(r[j] > 0.0)) throw DomainError("fractional_kernel_weight: r grid must be positive");
    if (j > 0 && !(r[j] > r[j - 1])) throw DomainError("fractional_kernel_weight: r grid must be increasing");
  }
  const double gamma = beta - p.alpha;
  if (!(gamma > -1.0 && gamma < 1.0))
    throw ParameterError("fractional_kernel_weight: beta - alpha must lie in (-1,1)");

  KernelWeightReport rep;
  if (gamma == 0.0) {
    rep.values.resize(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) rep.values[j] = inverse_subordinator_density(p, t, r[j]);
    rep.relative_change = 0.0;
    rep.steps = 0;
    return rep;
  }

  constexpr int max_level = 5;
  constexpr double target = 1e-5, accept = 1e-4;
  std::vector<double> v1 = weight_on_grid(p.alpha, gamma, t, r, 0);
  double rel = 0.0;
  int level = 0;
  std::vector<double> v2;
  while (true) {
    ++level;
    v2 = weight_on_grid(p.alpha, gamma, t, r, level);
    double dmax = 0.0, vmax = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      dmax = std::max(dmax, std::abs(v2[j] - v1[j]));
      vmax = std::max(vmax, std::abs(v2[j]));
    }
    rel = vmax > 0.0 ? dmax / vmax : 0.0;
    if (rel <= target || level >= max_level) break;
    v1 = std::move(v2);
  }
  if (rel > accept)
    throw ConvergenceError("fractional_kernel_weight: time grid too coarse (Richardson change " +
                           std::to_string(rel) + ")");
  rep.values.resize(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) rep.values[j] = (4.0 * v2[j] - v1[j]) / 3.0;
  rep.relative_change = rel;
  rep.steps = 256 << level;
  return rep;
}

std::vector<double> fractional_kernel_weight(SubordinationParams p, double beta, double t,
                                             std::span<const double> r) {
  return fractional_kernel_weight_report(p, beta, t, r).values;
}

double sample_inverse_subordinator(SubordinationParams p, double t, double u) {
  check_alpha(p.alpha);
  if (!(u > 0.0)) throw DomainError("sample_inverse_subordinator: stable sample must be positive");
  if (!(t >= 0.0)) throw DomainError("sample_inverse_subordinator: t must be >= 0");
  return std::pow(t / u, p.alpha);
}

}  // namespace afpk
