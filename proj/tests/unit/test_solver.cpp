#include <doctest.h>

#include <cmath>
#include <vector>

#include "afpk/errors.hpp"
#include "afpk/solver.hpp"
#include "afpk/special.hpp"
#include "afpk/spectral.hpp"

using namespace afpk;

namespace {

const OperatorSpec kHeat({{1, BernsteinSpec::brownian()}});
const OperatorSpec kCauchy({{1, BernsteinSpec::power(0.5)}});

ScalarField gaussian(const OperatorSpec& spec, std::size_t n = 256, double hw = 12.0, double shift = 0.0) {
  auto f = ScalarField::zeros(spec, {n}, {hw});
  for (std::size_t i = 0; i < n; ++i) f.values[i] = std::exp(-std::pow(f.coord(0, i) - shift, 2));
  return f;
}

double l2(const ScalarField& a) { return lp_norm(a, 2.0); }

double l2_diff(const ScalarField& a, const ScalarField& b) {
  auto d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= b.values[i];
  return l2(d);
}

double mass(const ScalarField& a) {
  double s = 0.0;
  for (double v : a.values) s += v;
  return s * a.cell_volume();
}

// f = D_t^alpha u - phi.Delta u for u = t^{1+alpha} g
SpaceTimeField manufactured(const OperatorSpec& spec, double alpha, TimeGrid grid, const ScalarField& g) {
  const auto Lg = apply_generator(spec, g);
  auto f = SpaceTimeField::zeros(grid, g);
  for (std::size_t k = 0; k <= grid.n; ++k) {
    const double t = grid.node(k);
    for (std::size_t i = 0; i < g.size(); ++i)
      f[k].values[i] = std::tgamma(2.0 + alpha) * t * g.values[i] - std::pow(t, 1.0 + alpha) * Lg.values[i];
  }
  return f;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("zero forcing") {
    const TimeGrid grid(1.0 / 32, 32);
    const auto u = solve_zero_init(kCauchy, 0.5, SpaceTimeField::zeros(grid, gaussian(kCauchy)));
    for (std::size_t k = 0; k < u.nodes(); ++k)
      for (double v : u[k].values) CHECK(v == 0.0);
  }

  TEST_CASE("heat equation, manufactured u = t g") {
    const TimeGrid grid(1.0 / 32, 32);
    const auto g = gaussian(kHeat);
    const auto Lg = apply_generator(kHeat, g);
    auto f = SpaceTimeField::zeros(grid, g);
    for (std::size_t k = 0; k <= grid.n; ++k)
      for (std::size_t i = 0; i < g.size(); ++i) f[k].values[i] = g.values[i] - grid.node(k) * Lg.values[i];
    const auto u = solve_zero_init(kHeat, 1.0, f);
    auto exact = g;
    for (double& v : exact.values) v *= grid.end();
    CHECK(l2_diff(u[grid.n], exact) / l2(exact) < 1e-4);
  }

  TEST_CASE("time-constant forcing, alpha = 1/2") {
    const double a = 0.5;
    const TimeGrid grid(1.0 / 64, 64);
    const auto g = gaussian(kCauchy);
    const auto u = solve_zero_init(kCauchy, a, SpaceTimeField::separable(grid, g, std::vector<double>(grid.n + 1, 1.0)));
    const SymbolField sym = symbol_field(g);
    for (std::size_t k : {16u, 64u}) {
      const double t = grid.node(k);
      const auto exact = apply_multiplier(g, [&](std::size_t md) {
        const double m = sym.m[md];
        return m == 0.0 ? std::sqrt(t) / std::tgamma(1.5) : (1.0 - mittag_leffler({a, 1.0}, -std::sqrt(t) * m)) / m;
      }, sym);
      CHECK(l2_diff(u[k], exact) / l2(exact) < 1e-3);
    }
  }

  TEST_CASE("linearity and causality") {
    const double a = 0.6;
    const TimeGrid grid(1.0 / 32, 32);
    const auto g1 = gaussian(kCauchy, 256, 12.0, -1.0), g2 = gaussian(kCauchy, 256, 12.0, 2.0);
    std::vector<double> s1(grid.n + 1), s2(grid.n + 1);
    for (std::size_t k = 0; k <= grid.n; ++k) {
      const double t = grid.node(k);
      s1[k] = std::cos(2.0 * t);
      s2[k] = t > 0.5 ? (t - 0.5) : 0.0;
    }
    const SolveOptions opt{false};
    const auto f1 = SpaceTimeField::separable(grid, g1, s1), f2 = SpaceTimeField::separable(grid, g2, s2);
    auto f = f1;
    for (std::size_t k = 0; k <= grid.n; ++k)
      for (std::size_t i = 0; i < f[k].size(); ++i) f[k].values[i] = 2.0 * f1[k].values[i] - 3.0 * f2[k].values[i];
    const auto u1 = solve_zero_init(kCauchy, a, f1, opt), u2 = solve_zero_init(kCauchy, a, f2, opt);
    const auto u = solve_zero_init(kCauchy, a, f, opt);
    double worst = 0.0;
    for (std::size_t k = 0; k <= grid.n; ++k)
      for (std::size_t i = 0; i < u[k].size(); ++i)
        worst = std::max(worst, std::abs(u[k].values[i] - 2.0 * u1[k].values[i] + 3.0 * u2[k].values[i]));
    CHECK(worst < 1e-12);
    // f2 vanishes up to t = 0.5
    for (std::size_t k = 0; k <= 16; ++k)
      for (double v : u2[k].values) CHECK(v == 0.0);
  }

  TEST_CASE("mass law") {
    // the zero mode obeys D^alpha M = int f
    const double a = 0.7;
    const TimeGrid grid(1.0 / 32, 32);
    const auto g = gaussian(kHeat);
    const auto u = solve_zero_init(kHeat, a, SpaceTimeField::separable(grid, g, std::vector<double>(grid.n + 1, 1.0)));
    for (std::size_t k : {8u, 32u})
      CHECK(mass(u[k]) == doctest::Approx(std::pow(grid.node(k), a) / std::tgamma(1.0 + a) * mass(g)).epsilon(1e-10));
  }

  TEST_CASE("half-step gate") {
    const TimeGrid grid(0.5, 2);
    std::vector<double> s{0.0, 1.0, -1.0};
    const auto f = SpaceTimeField::separable(grid, gaussian(kCauchy), s);
    SolveReport rep;
    CHECK_THROWS_AS(solve_zero_init(kCauchy, 0.5, f, {true, 1e-3}, &rep), ConvergenceError);
    solve_zero_init(kCauchy, 0.5, f, {true, 10.0}, &rep);
    CHECK(rep.half_step_change > 1e-3);
  }

  TEST_CASE("propagator") {
    const auto u0 = gaussian(kHeat, 512, 24.0);
    CHECK(l2_diff(propagate_initial(kCauchy, 0.5, u0, 0.0), u0) < 1e-14);
    const auto heat = propagate_initial(kHeat, 1.0, u0, 2.0);
    CHECK(mass(heat) == doctest::Approx(mass(u0)).epsilon(1e-8));
    // e^{-x^2} under the heat semigroup at t: (1 + 4t)^{-1/2} e^{-x^2 / (1 + 4t)}
    double worst = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i) {
      const double x = u0.coord(0, i);
      worst = std::max(worst, std::abs(heat.values[i] - std::exp(-x * x / 9.0) / 3.0));
    }
    CHECK(worst < 1e-10);

    // eigenmode
    const double xi0 = 2.0, hw = std::numbers::pi;  // box length 2 pi
    auto c = ScalarField::zeros(kCauchy, {64}, {hw});
    for (std::size_t i = 0; i < 64; ++i) c.values[i] = std::cos(xi0 * c.coord(0, i));
    const double t = 1.5;
    const auto p = propagate_initial(kCauchy, 0.5, c, t);
    const double e = mittag_leffler({0.5, 1.0}, -std::sqrt(t) * xi0);
    for (std::size_t i = 0; i < 64; ++i) CHECK(p.values[i] == doctest::Approx(e * c.values[i]).epsilon(1e-12));
  }

  TEST_CASE("residual of the propagator") {
    const double a = 0.5;
    const auto u0 = gaussian(kCauchy, 1024, 16.0);
    double prev = 0.0;
    for (std::size_t nt : {64u, 128u, 256u}) {
      const TimeGrid grid(1.0 / nt, nt);
      const auto u = propagate_initial(kCauchy, a, u0, grid);
      const double r = residual(kCauchy, a, u, SpaceTimeField::zeros(grid, u0), u0).relative;
      if (nt == 256) CHECK(r <= 3e-2);
      if (prev > 0.0) CHECK(prev / r >= 1.4);
      prev = r;
    }
  }

  TEST_CASE("residual of a stationary field") {
    const auto u0 = gaussian(kCauchy);
    const TimeGrid grid(1.0 / 16, 16);
    const auto u = SpaceTimeField::separable(grid, u0, std::vector<double>(grid.n + 1, 1.0));
    auto Lu = apply_generator(kCauchy, u0);
    for (double& v : Lu.values) v = -v;
    const auto f = SpaceTimeField::separable(grid, Lu, std::vector<double>(grid.n + 1, 1.0));
    CHECK(residual(kCauchy, 0.5, u, f, u0).relative <= 1e-6);
  }

  TEST_CASE("residual of manufactured solves") {
    const TimeGrid grid(1.0 / 64, 64);
    const auto g = gaussian(kCauchy);
    SUBCASE("alpha = 1, u = t g") {
      const auto Lg = apply_generator(kCauchy, g);
      auto f = SpaceTimeField::zeros(grid, g);
      for (std::size_t k = 0; k <= grid.n; ++k)
        for (std::size_t i = 0; i < g.size(); ++i) f[k].values[i] = g.values[i] - grid.node(k) * Lg.values[i];
      const auto u = solve_zero_init(kCauchy, 1.0, f);
      CHECK(residual(kCauchy, 1.0, u, f, ScalarField::like(g)).relative <= 1e-4);
    }
    SUBCASE("alpha = 1/2, u = t^{3/2} g") {
      const auto f = manufactured(kCauchy, 0.5, grid, g);
      const auto u = solve_zero_init(kCauchy, 0.5, f);
      CHECK(residual(kCauchy, 0.5, u, f, ScalarField::like(g)).relative <= 3e-2);
    }
  }

  TEST_CASE("errors") {
    const TimeGrid grid(0.1, 10);
    const auto g = gaussian(kCauchy);
    const auto f = SpaceTimeField::zeros(grid, g);
    CHECK_THROWS(solve_zero_init(kCauchy, 1.5, f));
    auto bad = f;
    bad.slices.pop_back();
    CHECK_THROWS(solve_zero_init(kCauchy, 0.5, bad));
  }
}
