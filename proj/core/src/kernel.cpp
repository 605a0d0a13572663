#include "afpk/kernel.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <optional>

#include "afpk/component.hpp"
#include "afpk/errors.hpp"
#include "afpk/spectral.hpp"
#include "afpk/special.hpp"
#include "afpk/subordination.hpp"
#include "envelope_detail.hpp"

namespace afpk {
namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr int kGeomPanels = 50;

// Gauss-Legendre rule mapped to [a, b], appended to (x, w).
template <int N>
void append_gl(double a, double b, std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& ab = G::abscissa();
  const auto& wt = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < ab.size(); ++i) {
    if (ab[i] == 0.0) {
      pts.emplace_back(c, h * wt[i]);
    } else {
      pts.emplace_back(c - h * ab[i], h * wt[i]);
      pts.emplace_back(c + h * ab[i], h * wt[i]);
    }
  }
  std::sort(pts.begin(), pts.end());
  for (auto& [xx, ww] : pts) {
    x.push_back(xx);
    w.push_back(ww);
  }
}

double block_coord(const OperatorSpec& spec, std::size_t i, std::span<const double> x) {
  const auto& b = spec.block(i);
  if (b.dim == 1) return x[spec.offset(i)];
  double s = 0.0;
  for (int k = 0; k < b.dim; ++k) s += x[spec.offset(i) + k] * x[spec.offset(i) + k];
  return std::sqrt(s);
}

void check_alpha_beta(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("kernel: alpha must lie in (0,1]");
  if (!std::isfinite(beta)) throw ParameterError("kernel: beta must be finite");
}

}  // namespace

QuadratureKernel::QuadratureKernel(const OperatorSpec& spec, double alpha, double beta, double t)
    : spec_(spec), alpha_(alpha), beta_(beta), t_(t) {
  check_alpha_beta(alpha, beta);
  if (!(t > 0.0)) throw DomainError("kernel: t must be positive");
  if (alpha == 1.0) {
    // R_t = t: the kernel is the product density itself
    if (beta != 1.0) throw ParameterError("kernel: for alpha = 1 only beta = 1 is supported");
    r_ = {t};
    w_ = {1.0};
    return;
  }
  if (!(beta - alpha > -1.0 && beta - alpha < 1.0))
    throw ParameterError("kernel: beta - alpha must lie in (-1,1)");

  const double s = std::pow(t, alpha);
  const double zmax = wright_m_support(alpha);
  std::vector<double> gw;
  for (int k = kGeomPanels - 1; k >= 0; --k) append_gl<16>(s * std::ldexp(1.0, -k - 1), s * std::ldexp(1.0, -k), r_, gw);
  for (double a = s; a < zmax * s; a += 0.5 * s) append_gl<16>(a, a + 0.5 * s, r_, gw);

  std::vector<double> phi;
  if (beta == alpha) {
    phi.resize(r_.size());
    for (std::size_t k = 0; k < r_.size(); ++k) phi[k] = wright_m(alpha, r_[k] / s) / s;
  } else {
    auto rep = fractional_kernel_weight_report({alpha}, beta, t, r_);
    phi = std::move(rep.values);
    richardson_ = rep.relative_change;
  }
  w_.resize(r_.size());
  double wmax = 0.0;
  for (std::size_t k = 0; k < r_.size(); ++k) {
    w_[k] = gw[k] * phi[k];
    wmax = std::max(wmax, std::abs(w_[k]));
  }
  // drop the negligible far tail (p(r, x) is bounded there)
  std::size_t keep = r_.size();
  while (keep > 0 && r_[keep - 1] > s && std::abs(w_[keep - 1]) < 1e-22 * wmax) --keep;
  r_.resize(keep);
  w_.resize(keep);
}

std::vector<double> QuadratureKernel::block_table(std::size_t i, double xi, int m) const {
  const auto& b = spec_.block(i);
  std::vector<double> out(r_.size());
  for (std::size_t k = 0; k < r_.size(); ++k) out[k] = component_density(b.phi, b.dim, r_[k], xi, m);
  return out;
}

double QuadratureKernel::combine(std::span<const std::vector<double>* const> tables) const {
  double s = 0.0;
  for (std::size_t k = 0; k < r_.size(); ++k) {
    double p = w_[k];
    for (const auto* tb : tables) p *= (*tb)[k];
    s += p;
  }
  return s;
}

double QuadratureKernel::operator()(std::span<const double> x, std::span<const int> m) const {
  if (x.size() != static_cast<std::size_t>(spec_.total_dim())) throw ParameterError("kernel: point dimension mismatch");
  std::vector<double> xi(spec_.ell());
  for (std::size_t i = 0; i < spec_.ell(); ++i) xi[i] = block_coord(spec_, i, x);
  auto term = [&](std::size_t k) {
    double p = w_[k];
    for (std::size_t i = 0; i < spec_.ell(); ++i) {
      const auto& b = spec_.block(i);
      p *= component_density(b.phi, b.dim, r_[k], xi[i], m.empty() ? 0 : m[i]);
      if (p == 0.0) break;
    }
    return p;
  };
  if (r_.size() == 1) return term(0);

  // walk downward in r; below t^alpha stop after two negligible panels in a row
  const double s = std::pow(t_, alpha_);
  double total = 0.0, panel = 0.0;
  int quiet = 0;
  double panel_floor = s;
  for (std::size_t k = r_.size(); k-- > 0;) {
    if (r_[k] < panel_floor) {
      if (panel_floor < s) {
        quiet = std::abs(panel) < 1e-15 * std::abs(total) ? quiet + 1 : 0;
        if (quiet >= 2) break;
      }
      while (r_[k] < panel_floor) panel_floor *= 0.5;
      panel = 0.0;
    }
    const double v = term(k);
    panel += v;
    total += v;
  }
  return total;
}

double subordinated_kernel_quadrature(const OperatorSpec& spec, const KernelQuery& q) {
  QuadratureKernel K(spec, q.alpha, q.beta, q.t);
  return K(q.x, q.m);
}

// ---- spectral route --------------------------------------------------------

namespace {

double kernel_symbol(double alpha, double beta, double t, double m) {
  const double ta = std::pow(t, alpha);
  return std::pow(t, alpha - beta) * mittag_leffler({alpha, 1.0 - beta + alpha}, -ta * m);
}

}  // namespace

SpectralKernel subordinated_kernel_spectral(const OperatorSpec& spec, double alpha, double beta, double t,
                                            const ScalarField& grid, std::span<const int> m) {
  check_alpha_beta(alpha, beta);
  if (!(t > 0.0)) throw DomainError("kernel: t must be positive");
  ScalarField g = ScalarField::like(grid);
  g.spec = spec;
  if (g.axes() != static_cast<std::size_t>(spec.total_dim())) throw ParameterError("kernel: grid dimension mismatch");
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] != 0 && spec.block(i).dim != 1)
      throw UnsupportedError("kernel: spectral derivatives are implemented for dim-1 blocks");

  const SymbolField sym = symbol_field(g);
  std::vector<std::complex<double>> X(sym.fft.modes());
  std::vector<long> k(g.axes());
  for (std::size_t md = 0; md < X.size(); ++md) {
    sym.fft.mode_index(md, k);
    std::complex<double> v = kernel_symbol(alpha, beta, t, sym.m[md]);
    long parity = 0;
    for (long kk : k) parity += kk;
    if (parity & 1) v = -v;  // shift so that index N/2 sits at x = 0
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      const std::size_t a = spec.offset(i);
      const bool nyquist = 2 * std::abs(k[a]) == static_cast<long>(g.sizes[a]);
      const double xi = nyquist ? 0.0 : sym.xi_of(md)[a];
      v *= std::pow(std::complex<double>(0.0, xi), m[i]);
    }
    X[md] = v;
  }
  g.values = sym.fft.backward(X);
  const double inv_vol = 1.0 / g.cell_volume();
  double vmax = 0.0;
  for (double& v : g.values) {
    v *= inv_vol;
    vmax = std::max(vmax, std::abs(v));
  }
  // faces: index 0 along any axis
  double bmax = 0.0;
  std::vector<double> pt(g.axes());
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    std::size_t rem = flat;
    bool face = false;
    for (std::size_t a = g.axes(); a-- > 0;) {
      if (rem % g.sizes[a] == 0) face = true;
      rem /= g.sizes[a];
    }
    if (face) bmax = std::max(bmax, std::abs(g.values[flat]));
  }
  const double ratio = vmax > 0.0 ? bmax / vmax : 0.0;
  return SpectralKernel{std::move(g), ratio, ratio > 1e-8};
}

ScalarField default_kernel_grid(const OperatorSpec& spec, double alpha, double t, double extent,
                                std::size_t n1, std::size_t n2, std::size_t n3) {
  const int d = spec.total_dim();
  const std::size_t n = d == 1 ? n1 : d == 2 ? n2 : n3;
  std::vector<std::size_t> sizes(d, n);
  std::vector<double> hw(d);
  const double ta = std::pow(t, alpha);
  for (int a = 0; a < d; ++a) {
    const auto& b = spec.block(spec.block_of_axis(a));
    hw[a] = 0.5 * extent / std::sqrt(b.phi.inverse(1.0 / ta));
  }
  return ScalarField::zeros(spec, sizes, hw);
}

// ---- pointwise Fourier route ----------------------------------------------

double subordinated_kernel_fourier(const OperatorSpec& spec, const KernelQuery& q) {
  check_alpha_beta(q.alpha, q.beta);
  for (int mi : q.m)
    if (mi != 0) throw UnsupportedError("kernel_fourier: derivatives are not supported");
  const bool one = spec.ell() == 1 && spec.block(0).dim == 1;
  const bool two = spec.ell() == 2 && spec.block(0).dim == 1 && spec.block(1).dim == 1;
  if (!one && !two) throw UnsupportedError("kernel_fourier: needs one or two dim-1 blocks");

  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::ooura_fourier_cos;
  thread_local ooura_fourier_cos<double> outer(1e-9, 8), inner(1e-9, 8);
  thread_local exp_sinh<double> es_outer, es_inner;

  const double a = q.alpha, b = q.beta, t = q.t;
  auto Q = [&](double m) { return kernel_symbol(a, b, t, m); };
  // cosine transform over [0, inf), plain half-line integral at x = 0
  auto cos_transform = [](auto& oo, auto& es, auto&& f, double x) {
    auto g = [&](double xi) { return std::isfinite(xi) ? f(xi) : 0.0; };
    if (x == 0.0) return es.integrate(g);
    return oo.integrate(g, x).first;
  };

  if (one) {
    const auto& phi = spec.block(0).phi;
    return cos_transform(outer, es_outer, [&](double xi) { return Q(phi.symbol(xi * xi)); }, std::abs(q.x[0])) / kPi;
  }
  const auto& p1 = spec.block(0).phi;
  const auto& p2 = spec.block(1).phi;
  const double x1 = std::abs(q.x[0]), x2 = std::abs(q.x[1]);
  auto g = [&](double xi1) {
    const double m1 = p1.symbol(xi1 * xi1);
    return cos_transform(inner, es_inner, [&](double xi2) { return Q(m1 + p2.symbol(xi2 * xi2)); }, x2);
  };
  return cos_transform(outer, es_outer, g, x1) / (kPi * kPi);
}

// ---- regimes ------------------------------------------------------------------

RegimeSplit classify_regime(const OperatorSpec& spec, double alpha, double t, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(spec.total_dim())) throw ParameterError("classify_regime: point dimension mismatch");
  RegimeSplit rs;
  const auto norms = spec.block_norms(x);
  const double ta = std::pow(t, alpha);
  rs.scaled.resize(spec.ell());
  for (std::size_t i = 0; i < spec.ell(); ++i)
    rs.scaled[i] = norms[i] == 0.0 ? std::numeric_limits<double>::infinity()
                                   : ta * spec.block(i).phi.symbol(1.0 / (norms[i] * norms[i]));
  for (std::size_t i = 0; i < spec.ell(); ++i) (rs.scaled[i] >= 1.0 ? rs.near_diagonal : rs.off_diagonal).push_back(i);
  std::stable_sort(rs.near_diagonal.begin(), rs.near_diagonal.end(),
                   [&](std::size_t i, std::size_t j) { return rs.scaled[i] > rs.scaled[j]; });
  return rs;
}

// ---- mass -----------------------------------------------------------------

MassReport kernel_mass_report(const OperatorSpec& spec, double alpha, double beta, double t, const ScalarField* grid) {
  const ScalarField g = grid ? *grid : default_kernel_grid(spec, alpha, t);
  const SpectralKernel sk = subordinated_kernel_spectral(spec, alpha, beta, t, g);
  const ScalarField& f = sk.field;
  const double h = f.cell_volume();
  double mass = 0.0, tail = 0.0;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const double v = std::abs(f.values[flat]) * h;
    mass += v;
    std::size_t rem = flat;
    bool outer = false;
    for (std::size_t a = f.axes(); a-- > 0;) {
      const std::size_t n = f.sizes[a], idx = rem % n;
      rem /= n;
      if (idx < n / 32 || idx >= n - n / 32) outer = true;
    }
    if (outer) tail += v;
  }
  return MassReport{mass, tail, sk.boundary_ratio};
}

double kernel_mass(const OperatorSpec& spec, double alpha, double beta, double t) {
  return kernel_mass_report(spec, alpha, beta, t).mass;
}

// ---- marginal bound -----------------------------------------------------------

namespace {

// sum_k t^{alpha - alpha/k - beta} int (phi_i^{-1}(r^{-k}))^{(d_i+m)/2} dr over the near-diagonal range
double marginal_near_rhs(const OperatorSpec& spec, double alpha, double beta, std::size_t i, int m, double t,
                         double xi) {
  const auto& b = spec.block(i);
  const detail::InverseFactor fc{&b.phi, 0.5 * (b.dim + m)};
  const double ta = std::pow(t, alpha);
  const double inv = xi == 0.0 ? 0.0 : 1.0 / b.phi.symbol(1.0 / (xi * xi));
  double s = 0.0;
  for (int k = 1; k <= static_cast<int>(spec.ell()); ++k)
    s += std::pow(t, alpha - alpha / k - beta) *
         detail::lambda_integral({&fc, 1}, k, 0.0, std::pow(inv, 1.0 / k), std::pow(2.0 * ta, 1.0 / k));
  return s;
}

}  // namespace

namespace {

// Radial table of a block density over many (r, rho) pairs. A single stable
// term c lambda^b is self-similar, p(r, rho) = s^{-d} P(rho / s) with
// s = (c r)^{1/(2b)}, so one log-log spline of P serves every r.
class RadialTable {
 public:
  RadialTable(const BernsteinSpec& phi, int dim) : phi_(phi), dim_(dim) {
    if (phi.drift() != 0.0 || phi.terms().size() != 1 || phi.terms().front().beta >= 1.0) return;
    b_ = phi.terms().front().beta;
    c_ = phi.terms().front().coef;
    const BernsteinSpec unit = BernsteinSpec::power(b_);
    const int n = 211;
    std::vector<double> lp(n);
    for (int k = 0; k < n; ++k) lp[k] = std::log(component_density(unit, dim, 1.0, std::exp(lu0_ + k * dlu_), 0));
    lu1_ = lu0_ + (n - 1) * dlu_;
    lp1_ = lp.back();
    lp0_ = lp.front();
    spline_.emplace(lp.begin(), lp.end(), lu0_, dlu_);
  }

  double operator()(double r, double rho) const {
    if (!spline_) return component_density(phi_, dim_, r, rho, 0);
    const double sig = std::pow(c_ * r, 0.5 / b_);
    const double lu = std::log(rho / sig);
    double lp;
    if (lu <= lu0_) {
      lp = lp0_;
    } else if (lu >= lu1_) {
      lp = lp1_ - (dim_ + 2.0 * b_) * (lu - lu1_);  // stable tail rho^{-d-2b}
    } else {
      lp = (*spline_)(lu);
    }
    return std::exp(lp) * std::pow(sig, -dim_);
  }

 private:
  const BernsteinSpec& phi_;
  int dim_;
  double b_ = 0.0, c_ = 0.0;
  double lu0_ = std::log(1e-3), dlu_ = std::log(10.0) / 30.0, lu1_ = 0.0, lp0_ = 0.0, lp1_ = 0.0;
  std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

}  // namespace

MarginalScanner::MarginalScanner(const OperatorSpec& spec, double alpha, double beta, double t, std::size_t block)
    : kernel_(spec, alpha, beta, t), alpha_(alpha), beta_(beta), t_(t), block_(block) {
  if (spec.ell() < 2) throw ParameterError("marginal_bound_check: needs at least two blocks");
  if (block >= spec.ell()) throw ParameterError("marginal_bound_check: block index out of range");
  for (std::size_t j = 0; j < spec.ell(); ++j)
    if (j != block) others_.push_back(j);
  if (others_.size() > 2) throw UnsupportedError("marginal_bound_check: at most three blocks");

  const auto& r = kernel_.nodes();
  const double ta = std::pow(t, alpha);
  for (std::size_t j : others_) {
    const auto& b = spec.block(j);
    const double scale = 1.0 / std::sqrt(b.phi.inverse(1.0 / ta));
    std::vector<double> rho, w;
    for (double a = 1e-8 * scale; a < 1e6 * scale; a *= 2.0) append_gl<6>(a, 2.0 * a, rho, w);
    const double surface = b.dim == 1 ? 2.0 : b.dim == 2 ? 2.0 * kPi : 4.0 * kPi;
    for (std::size_t n = 0; n < rho.size(); ++n) w[n] *= surface * std::pow(rho[n], b.dim - 1);
    const RadialTable density(b.phi, b.dim);
    std::vector<double> tab(rho.size() * r.size());
    for (std::size_t n = 0; n < rho.size(); ++n)
      for (std::size_t k = 0; k < r.size(); ++k) tab[n * r.size() + k] = density(r[k], rho[n]);
    rho_.push_back(std::move(rho));
    rho_w_.push_back(std::move(w));
    tables_.push_back(std::move(tab));
  }
}

MarginalCheck MarginalScanner::operator()(int m, double xi) const {
  const auto& spec = kernel_.spec();
  const auto& r = kernel_.nodes();
  const auto& w = kernel_.weights();
  const auto a = kernel_.block_table(block_, xi, m);
  std::vector<double> wa(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) wa[k] = w[k] * a[k];

  double lhs = 0.0;
  const std::size_t K = r.size();
  if (others_.size() == 1) {
    for (std::size_t n = 0; n < rho_[0].size(); ++n) {
      const double* tb = tables_[0].data() + n * K;
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) s += wa[k] * tb[k];
      lhs += rho_w_[0][n] * std::abs(s);
    }
  } else {
    for (std::size_t n1 = 0; n1 < rho_[0].size(); ++n1)
      for (std::size_t n2 = 0; n2 < rho_[1].size(); ++n2) {
        const double* t1 = tables_[0].data() + n1 * K;
        const double* t2 = tables_[1].data() + n2 * K;
        double s = 0.0;
        for (std::size_t k = 0; k < K; ++k) s += wa[k] * t1[k] * t2[k];
        lhs += rho_w_[0][n1] * rho_w_[1][n2] * std::abs(s);
      }
  }

  const auto& bi = spec.block(block_);
  const double axi = std::abs(xi);
  const double ta = std::pow(t_, alpha_);
  const double phx = axi > 0.0 ? bi.phi.symbol(1.0 / (axi * axi)) : std::numeric_limits<double>::infinity();
  MarginalCheck out{lhs, 0.0, ta * phx > 1.0};
  if (!out.near_diagonal) {
    out.rhs = std::pow(t_, 1.5 * alpha_ - beta_) * std::sqrt(phx) / std::pow(axi, bi.dim + m);
  } else {
    out.rhs = marginal_near_rhs(spec, alpha_, beta_, block_, m, t_, axi);
  }
  return out;
}

MarginalCheck marginal_bound_check(const OperatorSpec& spec, double alpha, double beta, std::size_t block, int m,
                                   double t, double xi) {
  return MarginalScanner(spec, alpha, beta, t, block)(m, xi);
}

}  // namespace afpk
