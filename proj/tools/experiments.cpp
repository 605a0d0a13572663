#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "afpk/errors.hpp"
#include "afpk/field_io.hpp"
#include "afpk/kernel.hpp"
#include "afpk/montecarlo.hpp"
#include "afpk/parallel.hpp"
#include "afpk/probes.hpp"
#include "afpk/random.hpp"
#include "afpk/solver.hpp"
#include "afpk/special.hpp"
#include "afpk/spectral.hpp"
#include "csv.hpp"

#ifndef AFPK_VERSION
#define AFPK_VERSION "unknown"
#endif

namespace afpk::tool {
namespace {

constexpr double kPi = std::numbers::pi;

struct Outputs {
  std::vector<CsvReport> csv;
  std::vector<std::pair<std::string, ScalarField>> fields;
};

double drift_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

// natural length scale of block i at time t: (phi_i^{-1}(t^{-alpha}))^{-1/2}
double block_scale(const OperatorSpec& spec, std::size_t i, double alpha, double t) {
  return 1.0 / std::sqrt(spec.block(i).phi.inverse(std::pow(t, -alpha)));
}

// grid from the config, falling back to the given per-axis defaults
ScalarField config_grid(const ExperimentConfig& c, const OperatorSpec& spec, std::vector<std::size_t> sizes,
                        std::vector<double> half) {
  const std::size_t axes = static_cast<std::size_t>(spec.total_dim());
  if (!c.grid_size.empty()) sizes = c.grid_size.size() == 1 ? std::vector<std::size_t>(axes, c.grid_size[0]) : c.grid_size;
  if (!c.grid_half_width.empty())
    half = c.grid_half_width.size() == 1 ? std::vector<double>(axes, c.grid_half_width[0]) : c.grid_half_width;
  return ScalarField::zeros(spec, sizes, half);
}

// solver-type default: 2^10 points (d = 1), 2^8 (d = 2), 2^6 (d = 3); half-width 8 natural scales at T
ScalarField solver_grid(const ExperimentConfig& c, const OperatorSpec& spec) {
  const int d = spec.total_dim();
  const std::size_t n = d == 1 ? 1024 : d == 2 ? 256 : 64;
  std::vector<double> half;
  for (int a = 0; a < d; ++a) half.push_back(8.0 * block_scale(spec, spec.block_of_axis(a), c.alpha, c.T));
  return config_grid(c, spec, std::vector<std::size_t>(d, n), half);
}

ScalarField gaussian(const ScalarField& like, double width) {
  ScalarField g = ScalarField::like(like);
  std::vector<double> x(like.axes());
  for (std::size_t i = 0; i < g.size(); ++i) {
    like.point(i, x);
    double r2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) r2 += x[a] * x[a] / (like.half_width(a) * like.half_width(a));
    g.values[i] = std::exp(-r2 / (width * width));
  }
  return g;
}

double l2_diff(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
  return std::sqrt(s * a.cell_volume());
}

std::vector<std::string> axis_columns(const OperatorSpec& spec, const std::string& prefix = "x") {
  std::vector<std::string> c;
  for (int a = 0; a < spec.total_dim(); ++a) c.push_back(prefix + "_" + std::to_string(a + 1));
  return c;
}

bool fourier_supported(const OperatorSpec& spec) {
  return (spec.ell() == 1 && spec.block(0).dim == 1) ||
         (spec.ell() == 2 && spec.block(0).dim == 1 && spec.block(1).dim == 1);
}

// ---- kernel-table ---------------------------------------------------------

RunResult kernel_table(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  std::size_t npts = c.param_size("points", 40);
  const double tol = c.param("tolerance", 1e-4);
  const double extent = c.param("extent", 8.0);
  std::string route = c.param_text("route", fourier_supported(spec) ? "fourier" : "fft");
  if (route != "fourier" && route != "fft") throw ConfigError("experiment.route must be fourier or fft");
  if (route == "fourier" && !fourier_supported(spec)) throw ConfigError("experiment.route = fourier needs one or two dim-1 blocks");

  const ScalarField def = default_kernel_grid(spec, c.alpha, c.T, extent);
  const ScalarField grid = config_grid(c, spec, def.sizes, [&] {
    std::vector<double> h;
    for (std::size_t a = 0; a < def.axes(); ++a) h.push_back(def.half_width(a));
    return h;
  }());
  const SpectralKernel fft = subordinated_kernel_spectral(spec, c.alpha, c.beta, c.T, grid);
  const QuadratureKernel quad(spec, c.alpha, c.beta, c.T);

  // nodes along the box diagonal, inside the central 90%; the kernel may be
  // singular where a block coordinate vanishes, so such nodes are skipped
  const std::size_t D = grid.axes();
  std::vector<std::size_t> flat;
  std::vector<std::vector<double>> xs;
  for (std::size_t p = 0; p < npts; ++p) {
    const double s = -0.9 + 1.8 * (static_cast<double>(p) + 0.5) / static_cast<double>(npts);
    std::size_t f = 0;
    std::vector<double> x(D);
    for (std::size_t a = 0; a < D; ++a) {
      const long idx = std::lround(s * static_cast<double>(grid.sizes[a] / 2)) + static_cast<long>(grid.sizes[a] / 2);
      f = f * grid.sizes[a] + static_cast<std::size_t>(idx);
      x[a] = grid.coord(a, static_cast<std::size_t>(idx));
    }
    const auto norms = spec.block_norms(x);
    if (std::any_of(norms.begin(), norms.end(), [](double r) { return r == 0.0; })) continue;
    flat.push_back(f);
    xs.push_back(x);
  }
  npts = xs.size();
  std::vector<double> qq(npts), qf(npts, 0.0);
  parallel_for(npts, [&](std::size_t p) {
    qq[p] = quad(xs[p]);
    if (route == "fourier") qf[p] = subordinated_kernel_fourier(spec, KernelQuery{c.alpha, c.beta, c.T, xs[p], {}});
  });

  std::vector<double> ref(npts);
  for (std::size_t p = 0; p < npts; ++p) ref[p] = route == "fourier" ? qf[p] : fft.field.values[flat[p]];
  double mx = 0.0;
  for (double v : ref) mx = std::max(mx, std::abs(v));
  double worst = 0.0;
  auto cols = axis_columns(spec);
  cols.insert(cols.end(), {"q_quadrature", "q_fft", "q_fourier", "rel_diff"});
  CsvReport csv("kernel_table.csv", cols);
  for (std::size_t p = 0; p < npts; ++p) {
    const double rel = mx > 0.0 ? std::abs(qq[p] - ref[p]) / mx : 0.0;
    if (std::abs(ref[p]) > 1e-6 * mx) worst = std::max(worst, rel);
    auto row = xs[p];
    row.insert(row.end(), {qq[p], fft.field.values[flat[p]], route == "fourier" ? qf[p] : std::nan(""), rel});
    csv.row(row);
  }
  out.csv.push_back(std::move(csv));
  out.fields.emplace_back("kernel.afpk", fft.field);
  return {worst <= tol, "max |q_quad - q_" + route + "| / max = " + format_number(worst) + " (tolerance " +
                            format_number(tol) + ")"};
}

// ---- verify-bounds --------------------------------------------------------

RunResult verify_bounds(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const std::size_t npts = c.param_size("points", 200);
  const auto dil = c.param_list("dilations", {-4.0, 0.0, 4.0});
  const std::string conv = c.param_text("convention", "proof");
  const double limit = c.param("drift_limit", 3.0);
  if (conv != "proof" && conv != "displayed") throw ConfigError("experiment.convention must be proof or displayed");
  const auto convention = conv == "proof" ? EnvelopeConvention::ProofConsistent : EnvelopeConvention::AsDisplayed;

  // per block, |x_i| = s * scale_i(t) with s log-spaced over 1e-2 .. 1e2 (both regimes)
  const std::size_t L = spec.ell();
  const std::size_t per = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(npts), 1.0 / static_cast<double>(L)))));
  auto cols = std::vector<std::string>{"t"};
  for (auto& s : axis_columns(spec)) cols.push_back(s);
  cols.insert(cols.end(), {"q", "envelope", "ratio", "near_blocks"});
  CsvReport csv("verify_bounds.csv", cols);
  std::vector<double> sups;
  for (double e : dil) {
    const double t = c.T * std::exp2(e);
    const QuadratureKernel quad(spec, c.alpha, c.beta, t);
    std::vector<std::vector<double>> pts;
    std::vector<std::size_t> idx(L, 0);
    for (std::size_t p = 0; p < npts; ++p) {
      std::size_t k = p;
      std::vector<double> x(static_cast<std::size_t>(spec.total_dim()), 0.0);
      for (std::size_t i = 0; i < L; ++i) {
        const std::size_t j = k % per;
        k /= per;
        const double s = std::pow(10.0, -2.0 + 4.0 * static_cast<double>(j) / static_cast<double>(per - 1));
        // first coordinate of the block carries the radius
        x[static_cast<std::size_t>(spec.offset(i))] = s * block_scale(spec, i, c.alpha, t);
      }
      pts.push_back(x);
    }
    std::vector<double> q(npts), env(npts);
    std::vector<std::size_t> near(npts);
    parallel_for(npts, [&](std::size_t p) {
      q[p] = quad(pts[p]);
      const auto b = bound_envelope(spec, KernelQuery{c.alpha, c.beta, t, pts[p], {}}, convention);
      env[p] = b.value;
      near[p] = b.regime.near_diagonal.size();
    });
    double sup = 0.0;
    for (std::size_t p = 0; p < npts; ++p) {
      const double r = std::abs(q[p]) / env[p];
      sup = std::max(sup, r);
      auto row = std::vector<double>{t};
      row.insert(row.end(), pts[p].begin(), pts[p].end());
      row.insert(row.end(), {q[p], env[p], r, static_cast<double>(near[p])});
      csv.row(row);
    }
    sups.push_back(sup);
  }
  out.csv.push_back(std::move(csv));
  const double d = drift_of(sups);
  const bool finite = std::all_of(sups.begin(), sups.end(), [](double s) { return std::isfinite(s); });
  return {finite && d < limit, "sup |q|/envelope drift across dilations = " + format_number(d)};
}

// ---- mass-scan ------------------------------------------------------------

RunResult mass_scan(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const auto times = c.param_list("times", {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0});
  const double tol = c.param("tolerance", 1e-3);
  const double limit = c.param("drift_limit", 1.5);
  for (double t : times)
    if (!(t > 0.0)) throw ConfigError("experiment.times must be positive");
  CsvReport csv("mass_scan.csv", {"t", "mass", "tail_estimate", "boundary_ratio", "scaled_mass"});
  std::vector<MassReport> reps(times.size());
  parallel_for(times.size(), [&](std::size_t i) { reps[i] = kernel_mass_report(spec, c.alpha, c.beta, times[i]); });
  std::vector<double> scaled;
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double s = reps[i].mass * std::pow(times[i], c.beta - c.alpha);
    scaled.push_back(s);
    worst = std::max(worst, std::abs(reps[i].mass - 1.0));
    csv.row({times[i], reps[i].mass, reps[i].tail_estimate, reps[i].boundary_ratio, s});
  }
  out.csv.push_back(std::move(csv));
  if (c.beta == c.alpha) return {worst <= tol, "max |mass - 1| = " + format_number(worst)};
  const double d = drift_of(scaled);
  return {d < limit, "mass * t^(beta-alpha) drift = " + format_number(d)};
}

// ---- solve / residual -----------------------------------------------------

struct Problem {
  SpaceTimeField f;
  ScalarField u0;
  std::function<ScalarField(double)> exact;  // may be empty
};

// manufactured: u = t^{1+alpha} g; constant: f = g with the per-mode closed form;
// propagator: u0 = g, f = 0.
Problem make_problem(const OperatorSpec& spec, double alpha, const TimeGrid& tg, const ScalarField& grid,
                     const std::string& kase) {
  const ScalarField g = gaussian(grid, 0.25);
  Problem pr{SpaceTimeField::zeros(tg, g), ScalarField::like(g), {}};
  if (kase == "manufactured") {
    const ScalarField Lg = apply_generator(spec, g);
    const double c = std::tgamma(2.0 + alpha);
    for (std::size_t k = 0; k <= tg.n; ++k) {
      const double t = tg.node(k), p = std::pow(t, 1.0 + alpha);
      for (std::size_t i = 0; i < g.size(); ++i) pr.f[k].values[i] = c * t * g.values[i] - p * Lg.values[i];
    }
    pr.exact = [g, alpha](double t) {
      ScalarField u = g;
      for (double& v : u.values) v *= std::pow(t, 1.0 + alpha);
      return u;
    };
  } else if (kase == "constant") {
    for (auto& s : pr.f.slices) s.values = g.values;
    pr.exact = [g, alpha](double t) {
      const SymbolField sym = symbol_field(g);
      const double ta = std::pow(t, alpha);
      return apply_multiplier(g, [&](std::size_t md) {
        const double m = sym.m[md];
        return m == 0.0 ? ta / std::tgamma(1.0 + alpha) : (1.0 - mittag_leffler({alpha, 1.0}, -ta * m)) / m;
      }, sym);
    };
  } else if (kase == "propagator") {
    pr.u0 = g;
  } else {
    throw ConfigError("experiment.case must be manufactured, constant or propagator");
  }
  return pr;
}

RunResult solve(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const std::string kase = c.param_text("case", "manufactured");
  const double tol = c.param("tolerance", 1e-3);
  const bool write = c.param_text("write_fields", "true") == "true";
  if (kase == "propagator") throw ConfigError("solve: case must be manufactured or constant");
  const ScalarField grid = solver_grid(c, spec);
  const TimeGrid tg(c.T / static_cast<double>(c.nt), c.nt);
  const Problem pr = make_problem(spec, c.alpha, tg, grid, kase);
  SolveReport rep;
  const SpaceTimeField u = solve_zero_init(spec, c.alpha, pr.f, {}, &rep);
  CsvReport csv("solve.csv", {"t", "norm_u", "error_l2", "relative_error"});
  double final_rel = 0.0;
  for (std::size_t k = 0; k <= tg.n; ++k) {
    const ScalarField ex = pr.exact(tg.node(k));
    const double nu = lp_norm(u[k], 2.0), ne = lp_norm(ex, 2.0), err = l2_diff(u[k], ex);
    final_rel = ne > 0.0 ? err / ne : err;
    csv.row({tg.node(k), nu, err, final_rel});
  }
  CsvReport sum("solve_summary.csv", {"half_step_change", "final_relative_error"});
  sum.row({rep.half_step_change, final_rel});
  out.csv.push_back(std::move(csv));
  out.csv.push_back(std::move(sum));
  if (write) {
    out.fields.emplace_back("u_final.afpk", u[tg.n]);
    out.fields.emplace_back("exact_final.afpk", pr.exact(tg.end()));
  }
  return {final_rel <= tol, "relative L2 error at T = " + format_number(final_rel)};
}

RunResult residual_run(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const std::string kase = c.param_text("case", "propagator");
  const double tol = c.param("tolerance", 3e-2);
  const ScalarField grid = solver_grid(c, spec);
  const TimeGrid tg(c.T / static_cast<double>(c.nt), c.nt);
  const Problem pr = make_problem(spec, c.alpha, tg, grid, kase);
  const SpaceTimeField u =
      kase == "propagator" ? propagate_initial(spec, c.alpha, pr.u0, tg) : solve_zero_init(spec, c.alpha, pr.f);
  const ResidualReport r = residual(spec, c.alpha, u, pr.f, pr.u0);
  CsvReport csv("residual.csv", {"t", "residual_l2"});
  for (std::size_t k = 0; k <= tg.n; ++k) csv.row({tg.node(k), r.node_norms[k]});
  CsvReport sum("residual_summary.csv", {"relative_l2l2"});
  sum.row({r.relative});
  out.csv.push_back(std::move(csv));
  out.csv.push_back(std::move(sum));
  return {r.relative <= tol, "relative L2(L2) residual = " + format_number(r.relative)};
}

// ---- mc-compare -----------------------------------------------------------

bool heavy_tailed(const Block& b) { return !b.phi.terms().empty() && b.phi.min_exponent() < 1.0; }

RunResult mc_compare(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const std::size_t paths = c.param_size("paths", 100000);
  const double tol = c.param("tolerance", 0.015);
  const bool dump = c.param_text("dump_samples", "false") == "true";
  const std::size_t bins = c.param_size("bins", 64);
  const int D = spec.total_dim();
  std::vector<std::size_t> sizes;
  std::vector<double> half;
  for (int a = 0; a < D; ++a) {
    const std::size_t i = spec.block_of_axis(a);
    const bool heavy = heavy_tailed(spec.block(i));
    half.push_back((heavy ? 256.0 : 16.0) * block_scale(spec, i, c.alpha, c.T));
    sizes.push_back(D == 1 ? (heavy ? 65536 : 4096) : D == 2 ? (heavy ? 4096 : 256) : 64);
  }
  const ScalarField grid = config_grid(c, spec, sizes, half);
  const SpectralKernel q = subordinated_kernel_spectral(spec, c.alpha, c.alpha, c.T, grid);
  const SamplerConfig sc{spec, c.alpha, c.T, paths, c.seed};
  const auto samples = sample_endpoints(sc);
  const DistanceReport d = density_distance(samples, q.field, bins);
  CsvReport csv("mc_compare.csv", {"axis", "ks", "chi2", "dof", "chi2_p"});
  for (std::size_t a = 0; a < d.ks.size(); ++a)
    csv.row({static_cast<double>(a + 1), d.ks[a], d.chi2[a], static_cast<double>(d.dof[a]), d.chi2_p[a]});
  CsvReport sum("mc_summary.csv", {"paths", "ks_max", "clipped_fraction"});
  sum.row({static_cast<double>(paths), d.ks_max(), d.clipped_fraction});
  out.csv.push_back(std::move(csv));
  out.csv.push_back(std::move(sum));
  if (dump) {
    auto cols = std::vector<std::string>{"path_id"};
    for (auto& s : axis_columns(spec)) cols.push_back(s);
    CsvReport s("samples.csv", cols);
    for (std::size_t p = 0; p < paths; ++p) {
      std::vector<double> row{static_cast<double>(p)};
      row.insert(row.end(), samples.begin() + static_cast<std::ptrdiff_t>(p * D),
                 samples.begin() + static_cast<std::ptrdiff_t>((p + 1) * D));
      s.row(row);
    }
    out.csv.push_back(std::move(s));
  }
  return {d.ks_max() < tol, "max KS = " + format_number(d.ks_max()) + ", clipped " + format_number(d.clipped_fraction)};
}

// ---- norms ----------------------------------------------------------------

RunResult norms(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const auto gammas = c.param_list("gammas", {-1.0, 0.0, 1.0, 2.0});
  const double p = c.param("p", 2.0), q = c.param("q", 2.0);
  const std::string file = c.param_text("field", "");
  const ScalarField f = file.empty() ? gaussian(solver_grid(c, spec), 0.25) : read_field(file, spec);
  CsvReport csv("norms.csv", {"gamma", "lp", "sobolev", "besov_half_index", "besov_literal"});
  for (double g : gammas)
    csv.row({g, lp_norm(f, p), sobolev_norm(f, g, p), besov_norm(f, g, p, q, BesovWeight::HalfIndex),
             besov_norm(f, g, p, q, BesovWeight::Literal)});
  out.csv.push_back(std::move(csv));
  return {true, "norms written"};
}

// ---- probes ---------------------------------------------------------------

RunResult trace(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const double gamma = c.param("gamma", 0.0);
  const auto dil = c.param_list("dilations", {-2.0, -1.0, 0.0, 1.0, 2.0});
  const double limit = c.param("drift_limit", 3.0);
  if (!(c.alpha > 0.5)) throw ConfigError("trace-probe requires time.alpha > 1/2");
  const ScalarField grid = solver_grid(c, spec);
  // Gaussian, first-moment Gaussian, algebraic decay; argument scaled to the box
  const std::vector<std::function<double(std::span<const double>)>> profiles = {
      [](std::span<const double> y) {
        double r2 = 0.0;
        for (double v : y) r2 += v * v;
        return std::exp(-r2);
      },
      [](std::span<const double> y) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < y.size(); ++a) r2 += (a ? 2.0 : 1.0) * y[a] * y[a];
        return y[0] * std::exp(-r2 / 2.0);
      },
      [](std::span<const double> y) {
        double r2 = 0.0;
        for (double v : y) r2 += v * v;
        return std::pow(1.0 + r2, -3.0);
      }};
  CsvReport csv("trace_probe.csv", {"profile", "lambda", "besov", "solution", "ratio"});
  double worst = 0.0;
  std::vector<double> x(grid.axes()), y(grid.axes());
  for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
    std::vector<double> ratios;
    for (double e : dil) {
      const double lam = std::exp2(e);
      ScalarField u0 = ScalarField::like(grid);
      for (std::size_t i = 0; i < u0.size(); ++i) {
        grid.point(i, x);
        for (std::size_t a = 0; a < x.size(); ++a) y[a] = lam * x[a] * 4.0 / grid.half_width(a);
        u0.values[i] = profiles[pi](y);
      }
      const TraceNorms n = trace_probe(spec, c.alpha, gamma, u0, c.T);
      ratios.push_back(n.solution / n.besov);
      csv.row({static_cast<double>(pi + 1), lam, n.besov, n.solution, ratios.back()});
    }
    worst = std::max(worst, drift_of(ratios));
  }
  out.csv.push_back(std::move(csv));
  return {worst < limit, "worst ratio drift over dilations = " + format_number(worst)};
}

RunResult bmo(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const auto levels = c.param_list("levels", {-4.0, -3.0, -2.0, -1.0, 0.0});
  const std::size_t samples = c.param_size("samples", 10000);
  const double limit = c.param("drift_limit", 2.0);
  for (double l : levels)
    if (l > 0.0) throw ConfigError("experiment.levels must be <= 0 (b = T/2 * 2^level)");
  const ScalarField grid = solver_grid(c, spec);
  const TimeGrid tg(c.T / static_cast<double>(c.nt), c.nt);
  // bounded forcing with a jump through the cylinder centre
  ScalarField sgn = ScalarField::like(grid);
  std::vector<double> x(grid.axes());
  for (std::size_t i = 0; i < sgn.size(); ++i) {
    grid.point(i, x);
    double v = 1.0;
    for (std::size_t a = 0; a < std::min<std::size_t>(2, x.size()); ++a) v *= x[a] >= 0.0 ? 1.0 : -1.0;
    sgn.values[i] = v;
  }
  SpaceTimeField f = SpaceTimeField::zeros(tg, grid);
  for (auto& s : f.slices) s.values = sgn.values;
  std::vector<CylinderSpec> cyl;
  for (double l : levels)
    cyl.push_back(make_cylinder(spec, c.alpha, 0.5 * c.T, std::vector<double>(grid.axes(), 0.0), 0.5 * c.T * std::exp2(l)));
  const SpaceTimeField g = generator_of_solution(spec, c.alpha, f);
  const auto osc = mean_oscillations(spec, g, cyl, samples, c.seed);
  auto cols = std::vector<std::string>{"b"};
  for (std::size_t i = 0; i < spec.ell(); ++i) cols.push_back("kappa_" + std::to_string(i + 1));
  cols.push_back("oscillation");
  CsvReport csv("bmo_probe.csv", cols);
  for (std::size_t k = 0; k < cyl.size(); ++k) {
    std::vector<double> row{cyl[k].b};
    row.insert(row.end(), cyl[k].kappa.begin(), cyl[k].kappa.end());
    row.push_back(osc[k]);
    csv.row(row);
  }
  out.csv.push_back(std::move(csv));
  const double d = drift_of(osc);
  return {d < limit, "mean-oscillation drift across b = " + format_number(d)};
}

RunResult regularity(const ExperimentConfig& c, Outputs& out) {
  const OperatorSpec spec = c.spec();
  const std::size_t forcings = c.param_size("forcings", 20);
  const auto dil = c.param_list("dilations", {0.25, 0.5, 1.0, 2.0, 4.0});
  const double p = c.param("p", 2.0), q = c.param("q", 2.0);
  const double limit = c.param("drift_limit", 3.0);
  const ScalarField grid = solver_grid(c, spec);
  const TimeGrid tg(c.T / static_cast<double>(c.nt), c.nt);
  const ZeroInitSolver solver(spec, c.alpha, tg, grid);
  CsvReport csv("regularity_probe.csv", {"lambda", "forcing", "ratio"});
  std::vector<double> maxima;
  for (double lam : dil) {
    std::vector<double> r(forcings);
    for (std::size_t j = 0; j < forcings; ++j) {
      const SpaceTimeField f = [&] {
        // four separable terms, spatial wave numbers 1..4 box periods, time frequency in [0, pi/T]
        CounterRng rng(c.seed, j);
        const std::size_t A = grid.axes();
        SpaceTimeField s = SpaceTimeField::zeros(tg, grid);
        std::vector<double> x(A);
        for (int term = 0; term < 4; ++term) {
          const double amp = 2.0 * rng.uniform() - 1.0, w = kPi * rng.uniform() / c.T, ph = 2.0 * kPi * rng.uniform();
          std::vector<double> kx(A), px(A);
          for (std::size_t a = 0; a < A; ++a) {
            kx[a] = kPi / grid.half_width(a) * static_cast<double>(1 + static_cast<int>(4.0 * rng.uniform()));
            px[a] = 2.0 * kPi * rng.uniform();
          }
          std::vector<double> prof(grid.size());
          for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.point(i, x);
            double v = amp;
            for (std::size_t a = 0; a < A; ++a) v *= std::cos(kx[a] * x[a] + px[a]);
            prof[i] = v;
          }
          for (std::size_t k = 0; k <= tg.n; ++k) {
            const double tf = std::cos(w * lam * tg.node(k) + ph);
            for (std::size_t i = 0; i < grid.size(); ++i) s[k].values[i] += tf * prof[i];
          }
        }
        return s;
      }();
      r[j] = regularity_probe(solver, spec, p, q, f);
      csv.row({lam, static_cast<double>(j + 1), r[j]});
    }
    maxima.push_back(*std::max_element(r.begin(), r.end()));
  }
  out.csv.push_back(std::move(csv));
  const double d = drift_of(maxima);
  return {d < limit, "drift of max ratio across dilations = " + format_number(d)};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& c, std::ostream& log) {
  Outputs out;
  RunResult r;
  switch (c.kind) {
    case Kind::KernelTable: r = kernel_table(c, out); break;
    case Kind::VerifyBounds: r = verify_bounds(c, out); break;
    case Kind::MassScan: r = mass_scan(c, out); break;
    case Kind::Solve: r = solve(c, out); break;
    case Kind::Residual: r = residual_run(c, out); break;
    case Kind::McCompare: r = mc_compare(c, out); break;
    case Kind::Norms: r = norms(c, out); break;
    case Kind::TraceProbe: r = trace(c, out); break;
    case Kind::BmoProbe: r = bmo(c, out); break;
    case Kind::RegularityProbe: r = regularity(c, out); break;
  }
  const std::string eff = c.effective();
  std::filesystem::create_directories(c.directory);
  for (const auto& csv : out.csv) csv.save(c.directory, eff, AFPK_VERSION);
  for (const auto& [name, field] : out.fields) write_field(c.directory / name, field);
  {
    std::ofstream e(c.directory / "effective_config.txt", std::ios::trunc);
    e << eff;
  }
  log << kind_name(c.kind) << ": " << r.summary << (r.accepted ? "" : "  [FAILED]") << '\n';
  return r;
}

std::string csv_schemas() {
  return R"(CSV schemas (every file ends with '# config_hash' and '# version' comment lines):
  kernel-table      kernel_table.csv: x_1..x_d, q_quadrature, q_fft, q_fourier, rel_diff   (+ kernel.afpk)
  verify-bounds     verify_bounds.csv: t, x_1..x_d, q, envelope, ratio, near_blocks
  mass-scan         mass_scan.csv: t, mass, tail_estimate, boundary_ratio, scaled_mass
  solve             solve.csv: t, norm_u, error_l2, relative_error
                    solve_summary.csv: half_step_change, final_relative_error   (+ u_final.afpk, exact_final.afpk)
  residual          residual.csv: t, residual_l2;  residual_summary.csv: relative_l2l2
  mc-compare        mc_compare.csv: axis, ks, chi2, dof, chi2_p;  mc_summary.csv: paths, ks_max, clipped_fraction
                    samples.csv (experiment.dump_samples = true): path_id, x_1..x_d
  norms             norms.csv: gamma, lp, sobolev, besov_half_index, besov_literal
  trace-probe       trace_probe.csv: profile, lambda, besov, solution, ratio
  bmo-probe         bmo_probe.csv: b, kappa_1..kappa_l, oscillation
  regularity-probe  regularity_probe.csv: lambda, forcing, ratio
)";
}

}  // namespace afpk::tool
