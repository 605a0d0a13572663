#include "afpk/spectral.hpp"

#include <cmath>

#include "afpk/errors.hpp"

namespace afpk {

SymbolField symbol_field(const ScalarField& f) {
  SymbolField s{RealFFT(f.sizes), {}, {}, f.axes()};
  const std::size_t modes = s.fft.modes();
  s.xi.resize(modes * s.axes);
  s.m.resize(modes);
  std::vector<long> k(s.axes);
  std::vector<double> sq(f.spec.ell());
  for (std::size_t md = 0; md < modes; ++md) {
    s.fft.mode_index(md, k);
    double* xi = s.xi.data() + md * s.axes;
    for (std::size_t a = 0; a < s.axes; ++a) {
      const double L = static_cast<double>(f.sizes[a]) * f.spacing[a];
      xi[a] = 2.0 * M_PI * static_cast<double>(k[a]) / L;
    }
    s.m[md] = f.spec.symbol({xi, s.axes});
  }
  return s;
}

ScalarField apply_multiplier(const ScalarField& f, const std::function<double(std::size_t)>& mult,
                             const SymbolField& sym) {
  auto X = sym.fft.forward(f.values);
  for (std::size_t md = 0; md < X.size(); ++md) X[md] *= mult(md);
  ScalarField out = ScalarField::like(f);
  out.values = sym.fft.backward(X);
  return out;
}

ScalarField apply_complex_multiplier(const ScalarField& f,
                                     const std::function<std::complex<double>(std::size_t)>& mult,
                                     const SymbolField& sym) {
  auto X = sym.fft.forward(f.values);
  for (std::size_t md = 0; md < X.size(); ++md) X[md] *= mult(md);
  ScalarField out = ScalarField::like(f);
  out.values = sym.fft.backward(X);
  return out;
}

ScalarField apply_bessel_multiplier(const ScalarField& f, double gamma) {
  if (gamma == 0.0) return f;
  const SymbolField sym = symbol_field(f);
  return apply_multiplier(f, [&](std::size_t md) { return std::pow(1.0 + sym.m[md], 0.5 * gamma); }, sym);
}

ScalarField apply_generator(const OperatorSpec& spec, const ScalarField& f) {
  ScalarField g = f;
  g.spec = spec;
  const SymbolField sym = symbol_field(g);
  return apply_multiplier(g, [&](std::size_t md) { return -sym.m[md]; }, sym);
}

namespace {

inline double smooth_h(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double lp_cutoff(double lambda) {
  const double a = std::abs(lambda);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double u = smooth_h(2.0 - a), v = smooth_h(a - 1.0);
  return u / (u + v);
}

double lp_window(double lambda) { return lp_cutoff(lambda) - lp_cutoff(2.0 * lambda); }

double lp_low_multiplier(double m) { return lp_cutoff(m); }

ScalarField lp_project(const ScalarField& f, int j) {
  const SymbolField sym = symbol_field(f);
  if (j == kS0) return apply_multiplier(f, [&](std::size_t md) { return lp_low_multiplier(sym.m[md]); }, sym);
  const double s = std::ldexp(1.0, -j);
  return apply_multiplier(f, [&](std::size_t md) { return lp_window(s * sym.m[md]); }, sym);
}

int lp_max_level(const ScalarField& f) {
  const SymbolField sym = symbol_field(f);
  double mmax = 0.0;
  for (double v : sym.m) mmax = std::max(mmax, v);
  // window j vanishes once 2^{j-1} >= mmax
  int j = 1;
  while (std::ldexp(1.0, j - 1) < mmax) ++j;
  return j;
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw ParameterError("lp_norm: p must be >= 1");
  double s = 0.0;
  if (p == 2.0) {
    for (double v : f.values) s += v * v;
    return std::sqrt(s * f.cell_volume());
  }
  for (double v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(s * f.cell_volume(), 1.0 / p);
}

double sobolev_norm(const ScalarField& f, double gamma, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("sobolev_norm: p must lie in (1,inf)");
  if (p != 2.0) return lp_norm(apply_bessel_multiplier(f, gamma), p);
  // Plancherel: ||u||^2 = (vol / N) sum |U|^2 over the full spectrum
  const SymbolField sym = symbol_field(f);
  auto X = sym.fft.forward(f.values);
  double s = 0.0;
  for (std::size_t md = 0; md < X.size(); ++md)
    s += sym.fft.multiplicity(md) * std::pow(1.0 + sym.m[md], gamma) * std::norm(X[md]);
  return std::sqrt(s * f.cell_volume() / static_cast<double>(sym.fft.points()));
}

double besov_norm(const ScalarField& f, double gamma, double p, double q, BesovWeight weight) {
  if (!(p >= 1.0) || !(q >= 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw ParameterError("besov_norm: p, q must lie in [1,inf)");
  const SymbolField sym = symbol_field(f);
  const auto X = sym.fft.forward(f.values);
  auto project = [&](auto&& mult) {
    auto Y = X;
    for (std::size_t md = 0; md < Y.size(); ++md) Y[md] *= mult(md);
    ScalarField g = ScalarField::like(f);
    g.values = sym.fft.backward(Y);
    return lp_norm(g, p);
  };
  double mmax = 0.0;
  for (double v : sym.m) mmax = std::max(mmax, v);
  const double low = project([&](std::size_t md) { return lp_low_multiplier(sym.m[md]); });
  double sum = 0.0;
  for (int j = 1; std::ldexp(1.0, j - 1) < mmax; ++j) {
    const double s = std::ldexp(1.0, -j);
    const double nj = project([&](std::size_t md) { return lp_window(s * sym.m[md]); });
    const double w = weight == BesovWeight::HalfIndex ? std::exp2(0.5 * j * gamma * q) : std::exp2(gamma * q);
    sum += w * std::pow(nj, q);
  }
  return low + std::pow(sum, 1.0 / q);
}

}  // namespace afpk
