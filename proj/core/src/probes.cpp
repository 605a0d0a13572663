#include "afpk/probes.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <random>

#include "afpk/errors.hpp"
#include "afpk/parallel.hpp"
#include "afpk/random.hpp"
#include "afpk/special.hpp"
#include "afpk/spectral.hpp"

namespace afpk {
namespace {

double spatial_norm(const ScalarField& f, double p) {
  double s = 0.0;
  for (double v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(s * f.cell_volume(), 1.0 / p);
}

// multilinear interpolation of one slice; x inside the box
double interpolate(const ScalarField& f, std::span<const double> x) {
  const std::size_t A = f.axes();
  std::vector<std::size_t> lo(A);
  std::vector<double> fr(A);
  for (std::size_t a = 0; a < A; ++a) {
    const double s = x[a] / f.spacing[a] + static_cast<double>(f.sizes[a] / 2);
    const double fl = std::floor(s);
    lo[a] = static_cast<std::size_t>(std::clamp(fl, 0.0, static_cast<double>(f.sizes[a] - 1)));
    fr[a] = s - fl;
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << A); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < A; ++a) {
      const bool up = (corner >> a) & 1U;
      w *= up ? fr[a] : 1.0 - fr[a];
      const std::size_t idx = (lo[a] + (up ? 1 : 0)) % f.sizes[a];
      flat = flat * f.sizes[a] + idx;
    }
    if (w != 0.0) acc += w * f.values[flat];
  }
  return acc;
}

void check_cylinder(const OperatorSpec& spec, const SpaceTimeField& g, const CylinderSpec& c) {
  if (!(c.b > 0.0) || c.kappa.size() != spec.ell() || c.x0.size() != static_cast<std::size_t>(spec.total_dim()))
    throw DomainError("oscillation_probe: empty or malformed cylinder");
  for (double k : c.kappa)
    if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("oscillation_probe: empty cylinder");
  if (c.t0 - c.b < 0.0 || c.t0 + c.b > g.grid.end() * (1.0 + 1e-12))
    throw DomainError("oscillation_probe: cylinder leaves the time interval");
  const ScalarField& s = g.slices.front();
  for (std::size_t i = 0; i < spec.ell(); ++i)
    for (int a = 0; a < spec.block(i).dim; ++a) {
      const std::size_t axis = static_cast<std::size_t>(spec.offset(i) + a);
      if (std::abs(c.x0[axis]) + c.kappa[i] > s.half_width(axis) - s.spacing[axis])
        throw DomainError("oscillation_probe: cylinder leaves the spatial box");
    }
}

}  // namespace

double mixed_norm(const SpaceTimeField& f, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw ParameterError("mixed_norm: p, q must be >= 1");
  f.check_consistent();
  const std::size_t n = f.grid.n;
  std::vector<double> node(n + 1);
  parallel_for(n + 1, [&](std::size_t k) { node[k] = std::pow(spatial_norm(f.slices[k], p), q); });
  double s = 0.0;
  for (std::size_t k = 0; k <= n; ++k) s += (k == 0 || k == n ? 0.5 : 1.0) * node[k];
  return std::pow(s * f.grid.h, 1.0 / q);
}

SpaceTimeField generator_of_solution(const ZeroInitSolver& solver, const OperatorSpec& spec, const SpaceTimeField& f) {
  SpaceTimeField u = solver(f);
  parallel_for(u.nodes(), [&](std::size_t k) { u.slices[k] = apply_generator(spec, u.slices[k]); });
  return u;
}

SpaceTimeField generator_of_solution(const OperatorSpec& spec, double alpha, const SpaceTimeField& f,
                                     const SolveOptions& options) {
  f.check_consistent();
  return generator_of_solution(ZeroInitSolver(spec, alpha, f.grid, f.slices.front(), options), spec, f);
}

double regularity_probe(const ZeroInitSolver& solver, const OperatorSpec& spec, double p, double q,
                        const SpaceTimeField& f) {
  if (!(p > 1.0) || !(q > 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw ParameterError("regularity_probe: p, q must lie in (1,inf)");
  const double fn = mixed_norm(f, p, q);
  if (!(fn > 0.0)) throw DomainError("regularity_probe: ||f|| = 0");
  return mixed_norm(generator_of_solution(solver, spec, f), p, q) / fn;
}

double regularity_probe(const OperatorSpec& spec, double alpha, double p, double q, const SpaceTimeField& f) {
  f.check_consistent();
  return regularity_probe(ZeroInitSolver(spec, alpha, f.grid, f.slices.front()), spec, p, q, f);
}

CylinderSpec make_cylinder(const OperatorSpec& spec, double alpha, double t0, std::vector<double> x0, double b) {
  if (!(b > 0.0)) throw DomainError("make_cylinder: b must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("make_cylinder: alpha must lie in (0,1]");
  if (x0.size() != static_cast<std::size_t>(spec.total_dim())) throw ParameterError("make_cylinder: center dimension");
  CylinderSpec c{t0, std::move(x0), b, {}};
  for (const Block& blk : spec.blocks()) c.kappa.push_back(1.0 / std::sqrt(blk.phi.inverse(std::pow(b, -alpha))));
  return c;
}

std::vector<double> mean_oscillations(const OperatorSpec& spec, const SpaceTimeField& g,
                                      const std::vector<CylinderSpec>& cylinders, std::size_t samples,
                                      std::uint64_t seed) {
  g.check_consistent();
  if (samples == 0) throw ParameterError("mean_oscillations: need at least one sample");
  for (const auto& c : cylinders) check_cylinder(spec, g, c);
  const std::size_t D = static_cast<std::size_t>(spec.total_dim());
  std::vector<double> out(cylinders.size());
  parallel_for(cylinders.size(), [&](std::size_t ci) {
    const CylinderSpec& c = cylinders[ci];
    CounterRng rng(seed, ci);
    std::normal_distribution<double> normal;
    std::vector<double> vals(samples), x(D);
    for (std::size_t s = 0; s < samples; ++s) {
      const double t = c.t0 + c.b * (2.0 * rng.uniform() - 1.0);
      for (std::size_t i = 0; i < spec.ell(); ++i) {
        const int d = spec.block(i).dim, off = spec.offset(i);
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
          x[off + a] = normal(rng);
          r2 += x[off + a] * x[off + a];
        }
        const double scale = c.kappa[i] * std::pow(rng.uniform(), 1.0 / d) / std::sqrt(r2);
        for (int a = 0; a < d; ++a) x[off + a] = c.x0[off + a] + scale * x[off + a];
      }
      const double pos = std::min(t / g.grid.h, static_cast<double>(g.grid.n));
      const std::size_t k = std::min(static_cast<std::size_t>(pos), g.grid.n - 1);
      const double w = pos - static_cast<double>(k);
      vals[s] = (1.0 - w) * interpolate(g.slices[k], x) + w * interpolate(g.slices[k + 1], x);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(samples);
    double osc = 0.0;
    for (double v : vals) osc += std::abs(v - mean);
    out[ci] = osc / static_cast<double>(samples);
  });
  return out;
}

double oscillation_probe(const OperatorSpec& spec, double alpha, const SpaceTimeField& f,
                         const std::vector<CylinderSpec>& cylinders, const OscillationOptions& options) {
  f.check_consistent();
  double finf = 0.0;
  for (const auto& s : f.slices)
    for (double v : s.values) finf = std::max(finf, std::abs(v));
  if (!(finf > 0.0)) throw DomainError("oscillation_probe: ||f||_inf = 0");
  if (cylinders.empty()) throw DomainError("oscillation_probe: no cylinders");
  const SpaceTimeField g = generator_of_solution(spec, alpha, f, options.solve);
  const auto osc = mean_oscillations(spec, g, cylinders, options.samples, options.seed);
  return *std::max_element(osc.begin(), osc.end()) / finf;
}

TraceNorms trace_probe(const OperatorSpec& spec, double alpha, double gamma, const ScalarField& u0, double T) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw ParameterError("trace_probe: requires alpha q > 1, i.e. alpha > 1/2");
  if (!(T > 0.0)) throw ParameterError("trace_probe: T must be positive");
  ScalarField g = u0;
  g.spec = spec;
  const SymbolField sym = symbol_field(g);
  const auto X = sym.fft.forward(g.values);

  // J(m) = int_0^T E_{alpha,1}(-t^alpha m)^2 dt
  auto J_direct = [&](double m) {
    if (m == 0.0) return T;
    if (alpha == 1.0) return -std::expm1(-2.0 * T * m) / (2.0 * m);
    static thread_local boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(
        [&](double t) {
          const double e = mittag_leffler({alpha, 1.0}, -std::pow(t, alpha) * m);
          return e * e;
        },
        0.0, T, 1e-10);
  };
  double mlo = std::numeric_limits<double>::infinity(), mhi = 0.0;
  for (double m : sym.m)
    if (m > 0.0) {
      mlo = std::min(mlo, m);
      mhi = std::max(mhi, m);
    }
  // log J is smooth in log m: tabulate at 32 points per decade unless the grid is tiny
  std::function<double(double)> J = J_direct;
  std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline;
  if (alpha < 1.0 && mhi > 0.0 && sym.m.size() > 256) {
    const double u0 = std::log(mlo), u1 = std::log(mhi);
    const std::size_t n = std::max<std::size_t>(8, static_cast<std::size_t>(32.0 * (u1 - u0) / std::log(10.0)) + 1);
    const double du = (u1 - u0) / static_cast<double>(n - 1);
    std::vector<double> logJ(n);
    parallel_for(n, [&](std::size_t i) { logJ[i] = std::log(J_direct(std::exp(u0 + du * static_cast<double>(i)))); });
    spline = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(logJ.begin(), logJ.end(), u0, du);
    J = [&, u1](double m) { return m == 0.0 ? T : std::exp((*spline)(std::min(std::log(m), u1))); };
  }

  double sol = 0.0, der = 0.0;
  for (std::size_t md = 0; md < X.size(); ++md) {
    const double m = sym.m[md];
    const double e = sym.fft.multiplicity(md) * std::norm(X[md]) * J(m);
    sol += std::pow(1.0 + m, gamma + 2.0) * e;
    der += m * m * std::pow(1.0 + m, gamma) * e;
  }
  const double scale = g.cell_volume() / static_cast<double>(sym.fft.points());
  TraceNorms out;
  out.besov = besov_norm(g, gamma + 2.0 - 1.0 / alpha, 2.0, 2.0, BesovWeight::HalfIndex);
  out.solution = std::sqrt(sol * scale) + std::sqrt(der * scale);
  return out;
}

}  // namespace afpk
