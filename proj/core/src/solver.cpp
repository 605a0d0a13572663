#include "afpk/solver.hpp"

#include <cmath>
#include <complex>
#include <map>

#include "afpk/errors.hpp"
#include "afpk/parallel.hpp"
#include "afpk/special.hpp"
#include "afpk/spectral.hpp"

namespace afpk {
namespace {

using cplx = std::complex<double>;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("solver: alpha must lie in (0,1]");
}

ScalarField with_spec(const OperatorSpec& spec, const ScalarField& f) {
  if (static_cast<std::size_t>(spec.total_dim()) != f.axes()) throw ParameterError("solver: grid dimension mismatch");
  ScalarField g = f;
  g.spec = spec;
  return g;
}

// sum over the half spectrum of |X|^2 with multiplicities
double spectral_energy(const RealFFT& fft, std::span<const cplx> X) {
  double s = 0.0;
  for (std::size_t md = 0; md < X.size(); ++md) s += fft.multiplicity(md) * std::norm(X[md]);
  return s;
}

// Weights of the piecewise-linear product rule for the kernel
// K(tau) = tau^{alpha-1} E_{alpha,alpha}(-m tau^alpha):
// u_k = sum_{l=1}^k (a_l - b_l) f_{k-l} + b_l f_{k-l+1}.
struct ModeWeights {
  std::vector<double> a, b;
};


ModeWeights mode_weights(double alpha, double m, double h, std::size_t n, std::size_t stride) {
  // F1(tau) = tau^alpha E_{alpha,alpha+1}(-m tau^alpha) = int_0^tau K
  // F2(tau) = tau^{alpha+1} E_{alpha,alpha+2}(-m tau^alpha) = int_0^tau F1
  const std::size_t L = n / stride;
  const double H = h * static_cast<double>(stride);
  std::vector<double> F1(L + 1, 0.0), F2(L + 1, 0.0);
  for (std::size_t l = 1; l <= L; ++l) {
    const double tau = H * static_cast<double>(l);
    const double ta = std::pow(tau, alpha);
    F1[l] = ta * mittag_leffler({alpha, alpha + 1.0}, -m * ta);
    F2[l] = ta * tau * mittag_leffler({alpha, alpha + 2.0}, -m * ta);
  }
  ModeWeights w{std::vector<double>(L + 1, 0.0), std::vector<double>(L + 1, 0.0)};
  for (std::size_t l = 1; l <= L; ++l) {
    w.a[l] = F1[l] - F1[l - 1];
    w.b[l] = (F2[l] - F2[l - 1] - H * F1[l - 1]) / H;
  }
  return w;
}

}  // namespace

SpaceTimeField SpaceTimeField::zeros(TimeGrid grid, const ScalarField& like) {
  SpaceTimeField s{grid, {}};
  s.slices.assign(grid.n + 1, ScalarField::like(like));
  return s;
}

SpaceTimeField SpaceTimeField::separable(TimeGrid grid, const ScalarField& profile, const std::vector<double>& g) {
  if (g.size() != grid.n + 1) throw ParameterError("separable: one time factor per node");
  SpaceTimeField s = zeros(grid, profile);
  for (std::size_t k = 0; k <= grid.n; ++k)
    for (std::size_t i = 0; i < profile.size(); ++i) s.slices[k].values[i] = g[k] * profile.values[i];
  return s;
}

void SpaceTimeField::check_consistent() const {
  if (slices.size() != grid.n + 1) throw ParameterError("space-time field: one slice per time node required");
  for (const auto& s : slices) s.check_compatible(slices.front());
}

ZeroInitSolver::ZeroInitSolver(const OperatorSpec& spec, double alpha, TimeGrid grid, const ScalarField& like,
                               SolveOptions options)
    : spec_(spec), alpha_(alpha), grid_(grid), base_(with_spec(spec, like)), options_(options) {
  check_alpha(alpha);
  const std::size_t n = grid.n;
  check_ = options.half_step_check && n >= 2 && n % 2 == 0;
  const SymbolField sym = symbol_field(base_);
  // modes sharing a symbol value share their weights
  std::map<double, std::size_t> distinct;
  slot_.resize(sym.fft.modes());
  for (std::size_t md = 0; md < slot_.size(); ++md) slot_[md] = distinct.emplace(sym.m[md], distinct.size()).first->second;
  std::vector<double> mvals(distinct.size());
  for (const auto& [m, s] : distinct) mvals[s] = m;
  fine_.resize(mvals.size());
  coarse_.resize(check_ ? mvals.size() : 0);
  parallel_for(mvals.size(), [&](std::size_t s) {
    auto w = mode_weights(alpha, mvals[s], grid.h, n, 1);
    fine_[s] = {std::move(w.a), std::move(w.b)};
    if (check_) {
      auto c = mode_weights(alpha, mvals[s], grid.h, n, 2);
      coarse_[s] = {std::move(c.a), std::move(c.b)};
    }
  });
}

SpaceTimeField ZeroInitSolver::operator()(const SpaceTimeField& f, SolveReport* report) const {
  f.check_consistent();
  if (f.grid.n != grid_.n || f.grid.h != grid_.h) throw ParameterError("solve_zero_init: time grid differs from the prepared one");
  f.slices.front().check_compatible(base_);
  const std::size_t n = grid_.n;
  const RealFFT fft(base_.sizes);
  const std::size_t modes = fft.modes();

  // mode-major copies so each mode's history is contiguous
  const std::size_t T = n + 1;
  std::vector<cplx> F(modes * T), U(modes * T, cplx(0.0));
  parallel_for(T, [&](std::size_t k) {
    const auto X = fft.forward(f.slices[k].values);
    for (std::size_t md = 0; md < modes; ++md) F[md * T + k] = X[md];
  });

  std::vector<cplx> Uc(check_ ? modes : 0);
  parallel_for(modes, [&](std::size_t md) {
    const cplx* Fm = F.data() + md * T;
    cplx* Um = U.data() + md * T;
    const Weights& w = fine_[slot_[md]];
    for (std::size_t k = 1; k <= n; ++k) {
      cplx acc = 0.0;
      for (std::size_t l = 1; l <= k; ++l) acc += (w.a[l] - w.b[l]) * Fm[k - l] + w.b[l] * Fm[k - l + 1];
      Um[k] = acc;
    }
    if (check_) {
      const Weights& c = coarse_[slot_[md]];
      cplx acc = 0.0;
      for (std::size_t l = 1; l <= n / 2; ++l) acc += (c.a[l] - c.b[l]) * Fm[n - 2 * l] + c.b[l] * Fm[n - 2 * l + 2];
      Uc[md] = acc;
    }
  });

  double change = 0.0;
  if (check_) {
    std::vector<cplx> last(modes), diff(modes);
    for (std::size_t md = 0; md < modes; ++md) {
      last[md] = U[md * T + n];
      diff[md] = last[md] - Uc[md];
    }
    const double top = spectral_energy(fft, last);
    if (top > 0.0) change = std::sqrt(spectral_energy(fft, diff) / top);
  }
  if (report) report->half_step_change = change;
  if (check_ && change > options_.half_step_tolerance)
    throw ConvergenceError("solve_zero_init: half-step comparison " + std::to_string(change) + " exceeds tolerance");

  SpaceTimeField u = SpaceTimeField::zeros(grid_, base_);
  parallel_for(n, [&](std::size_t k) {
    std::vector<cplx> X(modes);
    for (std::size_t md = 0; md < modes; ++md) X[md] = U[md * T + k + 1];
    u.slices[k + 1].values = fft.backward(X);
  });
  return u;
}

SpaceTimeField solve_zero_init(const OperatorSpec& spec, double alpha, const SpaceTimeField& f,
                               const SolveOptions& options, SolveReport* report) {
  check_alpha(alpha);
  f.check_consistent();
  return ZeroInitSolver(spec, alpha, f.grid, f.slices.front(), options)(f, report);
}

ScalarField propagate_initial(const OperatorSpec& spec, double alpha, const ScalarField& u0, double t) {
  check_alpha(alpha);
  if (!(t >= 0.0)) throw DomainError("propagate_initial: t must be >= 0");
  const ScalarField g = with_spec(spec, u0);
  if (t == 0.0) return g;
  const SymbolField sym = symbol_field(g);
  const double ta = std::pow(t, alpha);
  return apply_multiplier(g, [&](std::size_t md) { return mittag_leffler({alpha, 1.0}, -ta * sym.m[md]); }, sym);
}

SpaceTimeField propagate_initial(const OperatorSpec& spec, double alpha, const ScalarField& u0, TimeGrid grid) {
  check_alpha(alpha);
  const ScalarField g = with_spec(spec, u0);
  const SymbolField sym = symbol_field(g);
  const auto X = sym.fft.forward(g.values);
  SpaceTimeField u = SpaceTimeField::zeros(grid, g);
  parallel_for(grid.n + 1, [&](std::size_t k) {
    const double ta = std::pow(grid.node(k), alpha);
    std::vector<cplx> Y(X.size());
    for (std::size_t md = 0; md < X.size(); ++md) Y[md] = X[md] * mittag_leffler({alpha, 1.0}, -ta * sym.m[md]);
    u.slices[k].values = sym.fft.backward(Y);
  });
  return u;
}

ResidualReport residual(const OperatorSpec& spec, double alpha, const SpaceTimeField& u, const SpaceTimeField& f,
                        const ScalarField& u0) {
  check_alpha(alpha);
  u.check_consistent();
  f.check_consistent();
  if (u.grid.n != f.grid.n || u.grid.h != f.grid.h) throw ParameterError("residual: time grids differ");
  u.slices.front().check_compatible(f.slices.front());
  u.slices.front().check_compatible(u0);
  const std::size_t n = u.grid.n, P = u0.size();

  // Caputo derivative of u - u0 at every grid point; the correction terms make
  // the rule exact on t^alpha and t^{2 alpha}, the leading terms of the solution
  TimeSeries w(u.grid, P);
  for (std::size_t k = 0; k <= n; ++k) {
    auto row = w.row(k);
    for (std::size_t i = 0; i < P; ++i) row[i] = u.slices[k].values[i] - u0.values[i];
  }
  const double corr[] = {alpha, 2.0 * alpha};
  const TimeSeries dw = caputo_derivative(w, alpha, alpha < 1.0 ? std::span<const double>(corr) : std::span<const double>());

  ResidualReport rep{SpaceTimeField::zeros(u.grid, u0), std::vector<double>(n + 1, 0.0), 0.0};
  double rr = 0.0, gg = 0.0, ff = 0.0;
  const double vol = u0.cell_volume();
  std::vector<double> node_g(n + 1), node_f(n + 1);
  parallel_for(n + 1, [&](std::size_t k) {
    const ScalarField gen = apply_generator(spec, u.slices[k]);
    auto& r = rep.field.slices[k].values;
    const auto drow = dw.row(k);
    double sr = 0.0, sg = 0.0, sf = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
      r[i] = drow[i] - gen.values[i] - f.slices[k].values[i];
      sr += r[i] * r[i];
      sg += gen.values[i] * gen.values[i];
      sf += f.slices[k].values[i] * f.slices[k].values[i];
    }
    rep.node_norms[k] = std::sqrt(sr * vol);
    node_g[k] = std::sqrt(sg * vol);
    node_f[k] = std::sqrt(sf * vol);
  });
  // t_0 is excluded: the derivative of t^alpha is singular there
  for (std::size_t k = 1; k <= n; ++k) {
    rr += rep.node_norms[k] * rep.node_norms[k];
    gg += node_g[k] * node_g[k];
    ff += node_f[k] * node_f[k];
  }
  const double denom = std::sqrt(gg) + std::sqrt(ff);
  rep.relative = denom > 0.0 ? std::sqrt(rr) / denom : std::sqrt(rr);
  return rep;
}

}  // namespace afpk
