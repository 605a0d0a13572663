#include "afpk/montecarlo.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "afpk/errors.hpp"
#include "afpk/parallel.hpp"

namespace afpk {
namespace {

constexpr double kPi = std::numbers::pi;

// Marginal of a grid density along one axis: node masses, normalised to one.
std::vector<double> marginal_masses(const ScalarField& f, std::size_t axis) {
  const std::size_t N = f.sizes[axis];
  std::size_t inner = 1;
  for (std::size_t a = axis + 1; a < f.axes(); ++a) inner *= f.sizes[a];
  std::vector<double> m(N, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) m[(i / inner) % N] += std::max(f.values[i], 0.0);
  double total = 0.0;
  for (double v : m) total += v;
  if (!(total > 0.0)) throw DomainError("density_distance: field has no positive mass");
  for (double& v : m) v /= total;
  return m;
}

// CDF of the marginal with each node mass spread uniformly over its cell
struct MarginalCdf {
  double lo, h;
  std::vector<double> edge;  // edge[n] = mass left of cell n

  MarginalCdf(const ScalarField& f, std::size_t axis, const std::vector<double>& mass)
      : lo(f.coord(axis, 0) - 0.5 * f.spacing[axis]), h(f.spacing[axis]), edge(mass.size() + 1, 0.0) {
    for (std::size_t n = 0; n < mass.size(); ++n) edge[n + 1] = edge[n] + mass[n];
  }
  double hi() const { return lo + h * static_cast<double>(edge.size() - 1); }
  double operator()(double x) const {
    const double s = (x - lo) / h;
    if (s <= 0.0) return 0.0;
    const std::size_t n = static_cast<std::size_t>(s);
    if (n + 1 >= edge.size()) return 1.0;
    return edge[n] + (s - static_cast<double>(n)) * (edge[n + 1] - edge[n]);
  }
};

}  // namespace

void SamplerConfig::validate() const {
  if (n_paths < 1) throw ParameterError("sampler: n_paths must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("sampler: alpha must lie in (0,1]");
  if (!(t > 0.0)) throw ParameterError("sampler: t must be positive");
  for (const Block& b : spec.blocks())
    for (const auto& term : b.phi.terms())
      if (!(term.beta > 0.0 && term.beta <= 1.0)) throw ParameterError("sampler: stable exponents must lie in (0,1]");
}

double sample_stable(double beta, CounterRng& rng) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("sample_stable: beta must lie in (0,1]");
  if (beta == 1.0) return 1.0;
  const double u = kPi * rng.uniform();
  const double e = -std::log(rng.uniform());
  const double a = std::sin(beta * u) / std::pow(std::sin(u), 1.0 / beta);
  const double b = std::pow(std::sin((1.0 - beta) * u) / e, (1.0 - beta) / beta);
  return a * b;
}

std::vector<double> sample_endpoint(const SamplerConfig& config, CounterRng& rng) {
  const double R = config.alpha == 1.0 ? config.t : std::pow(config.t / sample_stable(config.alpha, rng), config.alpha);
  std::normal_distribution<double> normal;
  std::vector<double> x(static_cast<std::size_t>(config.spec.total_dim()));
  for (std::size_t i = 0; i < config.spec.ell(); ++i) {
    const Block& blk = config.spec.block(i);
    double S = blk.phi.drift() * R;
    for (const auto& term : blk.phi.terms()) S += std::pow(term.coef * R, 1.0 / term.beta) * sample_stable(term.beta, rng);
    const double sd = std::sqrt(2.0 * S);
    for (int a = 0; a < blk.dim; ++a) x[config.spec.offset(i) + a] = sd * normal(rng);
  }
  return x;
}

std::vector<double> sample_endpoints(const SamplerConfig& config) {
  config.validate();
  const std::size_t D = static_cast<std::size_t>(config.spec.total_dim());
  std::vector<double> out(config.n_paths * D);
  parallel_for(config.n_paths, [&](std::size_t p) {
    CounterRng rng(config.seed, p);
    const auto x = sample_endpoint(config, rng);
    std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(p * D));
  });
  return out;
}

double DistanceReport::ks_max() const { return ks.empty() ? 0.0 : *std::max_element(ks.begin(), ks.end()); }
double DistanceReport::chi2_p_min() const { return chi2_p.empty() ? 1.0 : *std::min_element(chi2_p.begin(), chi2_p.end()); }

DistanceReport density_distance(const std::vector<double>& samples, const ScalarField& field, std::size_t bins) {
  const std::size_t D = field.axes();
  if (D == 0 || samples.size() % D != 0) throw ParameterError("density_distance: sample layout does not match the field");
  const std::size_t n = samples.size() / D;
  if (n < 1000) throw DomainError("density_distance: at least 1000 samples required");
  if (bins < 2) throw ParameterError("density_distance: need at least 2 bins");

  std::vector<MarginalCdf> cdf;
  for (std::size_t a = 0; a < D; ++a) cdf.emplace_back(field, a, marginal_masses(field, a));

  // a sample counts only if it lies inside the box on every axis
  std::vector<char> inside(n, 1);
  std::size_t kept = 0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t a = 0; a < D; ++a) {
      const double x = samples[p * D + a];
      if (!(x >= cdf[a].lo && x < cdf[a].hi())) inside[p] = 0;
    }
    kept += inside[p];
  }
  if (kept < 1000) throw DomainError("density_distance: fewer than 1000 samples inside the box");

  DistanceReport r;
  r.clipped_fraction = static_cast<double>(n - kept) / static_cast<double>(n);
  for (std::size_t a = 0; a < D; ++a) {
    std::vector<double> xs;
    xs.reserve(kept);
    for (std::size_t p = 0; p < n; ++p)
      if (inside[p]) xs.push_back(samples[p * D + a]);
    std::sort(xs.begin(), xs.end());
    const double m = static_cast<double>(xs.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double F = cdf[a](xs[i]);
      ks = std::max({ks, std::abs(static_cast<double>(i + 1) / m - F), std::abs(static_cast<double>(i) / m - F)});
    }
    r.ks.push_back(ks);

    // equal-width bins over the box; neighbours merged until the expected count is >= 5
    const double lo = cdf[a].lo, w = (cdf[a].hi() - lo) / static_cast<double>(bins);
    std::vector<double> observed(bins, 0.0), expected(bins);
    for (double x : xs) observed[std::min(bins - 1, static_cast<std::size_t>((x - lo) / w))] += 1.0;
    for (std::size_t b = 0; b < bins; ++b)
      expected[b] = m * (cdf[a](lo + w * static_cast<double>(b + 1)) - cdf[a](lo + w * static_cast<double>(b)));
    double chi2 = 0.0, eo = 0.0, ee = 0.0;
    std::size_t cells = 0;
    for (std::size_t b = 0; b < bins; ++b) {
      eo += observed[b];
      ee += expected[b];
      if (ee >= 5.0 || b + 1 == bins) {
        if (ee > 0.0) {
          chi2 += (eo - ee) * (eo - ee) / ee;
          ++cells;
        }
        eo = ee = 0.0;
      }
    }
    const std::size_t dof = cells > 1 ? cells - 1 : 1;
    r.chi2.push_back(chi2);
    r.dof.push_back(dof);
    r.chi2_p.push_back(boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(dof)), chi2)));
  }
  return r;
}

std::vector<double> sample_marginal(const ScalarField& field, std::size_t axis, std::size_t n, std::uint64_t seed) {
  if (axis >= field.axes()) throw ParameterError("sample_marginal: axis out of range");
  const MarginalCdf cdf(field, axis, marginal_masses(field, axis));
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t p) {
    CounterRng rng(seed, p);
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.edge.begin(), cdf.edge.end(), u);
    const std::size_t c = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cdf.edge.begin() - 1, 0,
                                                                             static_cast<std::ptrdiff_t>(cdf.edge.size()) - 2));
    const double span = cdf.edge[c + 1] - cdf.edge[c];
    const double frac = span > 0.0 ? (u - cdf.edge[c]) / span : 0.5;
    out[p] = cdf.lo + cdf.h * (static_cast<double>(c) + frac);
  });
  return out;
}

}  // namespace afpk
