#include "afpk/fraccalc.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

#include "afpk/errors.hpp"

namespace afpk {

TimeGrid::TimeGrid(double h_, std::size_t n_) : h(h_), n(n_) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("time grid: step must be positive");
  if (n < 2) throw ParameterError("time grid: need at least 2 steps");
}

TimeSeries::TimeSeries(TimeGrid grid, std::size_t width)
    : grid_(grid), width_(width), values_((grid.n + 1) * width, 0.0) {
  if (width == 0) throw ParameterError("time series: width must be positive");
}

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> scalar_values)
    : grid_(grid), width_(1), values_(std::move(scalar_values)) {
  if (values_.size() != grid_.n + 1)
    throw ParameterError("time series: expected " + std::to_string(grid_.n + 1) + " values");
}

namespace {

// out_n += w * in_j over the row
inline void axpy(std::span<double> out, double w, std::span<const double> in) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * in[i];
}

}  // namespace

TimeSeries rl_derivative(const TimeSeries& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("rl_derivative: alpha must lie in (0,1]");
  const TimeSeries g = fractional_integral(f, 1.0 - alpha);
  const std::size_t n = f.grid().n;
  const double inv2h = 0.5 / f.grid().h;
  TimeSeries out(f.grid(), f.width());
  for (std::size_t i = 0; i < f.width(); ++i) {
    auto G = [&](std::size_t k) { return g.row(k)[i]; };
    out.row(0)[i] = (-3.0 * G(0) + 4.0 * G(1) - G(2)) * inv2h;
    for (std::size_t k = 1; k < n; ++k) out.row(k)[i] = (G(k + 1) - G(k - 1)) * inv2h;
    out.row(n)[i] = (3.0 * G(n) - 4.0 * G(n - 1) + G(n - 2)) * inv2h;
  }
  return out;
}

namespace {

// L1 weights b_m = (m+1)^{1-alpha} - m^{1-alpha}
std::vector<double> l1_weights(double alpha, std::size_t n) {
  std::vector<double> b(n);
  const double e = 1.0 - alpha;
  for (std::size_t m = 0; m < n; ++m) {
    double md = static_cast<double>(m);
    b[m] = m == 0 ? 1.0 : std::pow(md + 1.0, e) - std::pow(md, e);
  }
  return b;
}

// Plain L1 applied to samples g_k, k = 0..n, at node k (unscaled by h^{-alpha}/Gamma(2-alpha)).
double l1_at(const std::vector<double>& b, const std::vector<double>& g, std::size_t k) {
  double s = 0.0;
  for (std::size_t j = 0; j < k; ++j) s += b[k - 1 - j] * (g[j + 1] - g[j]);
  return s;
}

// Gaussian elimination with partial pivoting on a small dense system.
std::vector<double> solve_small(std::vector<double> A, std::vector<double> rhs, std::size_t s) {
  for (std::size_t c = 0; c < s; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < s; ++r)
      if (std::abs(A[r * s + c]) > std::abs(A[piv * s + c])) piv = r;
    if (A[piv * s + c] == 0.0) throw ConvergenceError("singular starting-weight system");
    if (piv != c) {
      for (std::size_t k = 0; k < s; ++k) std::swap(A[c * s + k], A[piv * s + k]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (std::size_t r = c + 1; r < s; ++r) {
      double m = A[r * s + c] / A[c * s + c];
      for (std::size_t k = c; k < s; ++k) A[r * s + k] -= m * A[c * s + k];
      rhs[r] -= m * rhs[c];
    }
  }
  std::vector<double> x(s);
  for (std::size_t c = s; c-- > 0;) {
    double v = rhs[c];
    for (std::size_t k = c + 1; k < s; ++k) v -= A[c * s + k] * x[k];
    x[c] = v / A[c * s + c];
  }
  return x;
}

}  // namespace

TimeSeries fractional_integral(const TimeSeries& f, double alpha, std::span<const double> sig) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("fractional_integral: alpha must be >= 0");
  if (alpha == 0.0) return f;
  const std::size_t n = f.grid().n;
  const std::size_t s = sig.size();
  if (s >= n) throw ParameterError("fractional_integral: too many correction terms for the grid");
  const double a1 = alpha + 1.0;
  std::vector<double> p(n + 2);  // m^{alpha+1}
  for (std::size_t m = 0; m < p.size(); ++m) p[m] = std::pow(static_cast<double>(m), a1);
  std::vector<double> c(n + 1);
  c[0] = 1.0;
  for (std::size_t m = 1; m <= n; ++m) c[m] = p[m + 1] - 2.0 * p[m] + p[m - 1];
  const double scale = std::pow(f.grid().h, alpha) / boost::math::tgamma(alpha + 2.0);

  // plain product-trapezoid value at node k for scalar samples g
  auto plain = [&](const std::vector<double>& g, std::size_t k) {
    const double kd = static_cast<double>(k);
    double v = (p[k - 1] - (kd - alpha - 1.0) * std::pow(kd, alpha)) * g[0];
    for (std::size_t j = 1; j <= k; ++j) v += c[k - j] * g[j];
    return v * scale;
  };

  std::vector<double> W(s * (n + 1), 0.0);
  if (s > 0) {
    std::vector<std::vector<double>> mono(s, std::vector<double>(n + 1));
    for (std::size_t q = 0; q < s; ++q) {
      if (!(sig[q] > 0.0)) throw ParameterError("fractional_integral: correction exponents must be positive");
      for (std::size_t k = 0; k <= n; ++k) mono[q][k] = std::pow(f.grid().node(k), sig[q]);
    }
    std::vector<double> A(s * s);
    for (std::size_t q = 0; q < s; ++q)
      for (std::size_t i = 0; i < s; ++i) A[q * s + i] = mono[q][i + 1];
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<double> rhs(s);
      for (std::size_t q = 0; q < s; ++q) {
        const double exact = boost::math::tgamma(sig[q] + 1.0) / boost::math::tgamma(sig[q] + 1.0 + alpha) *
                             std::pow(f.grid().node(k), sig[q] + alpha);
        rhs[q] = exact - plain(mono[q], k);
      }
      const auto w = solve_small(A, rhs, s);
      for (std::size_t i = 0; i < s; ++i) W[k * s + i] = w[i];
    }
  }

  TimeSeries out(f.grid(), f.width());
  for (std::size_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double a0 = p[k - 1] - (kd - alpha - 1.0) * std::pow(kd, alpha);
    auto row = out.row(k);
    axpy(row, a0, f.row(0));
    for (std::size_t j = 1; j <= k; ++j) axpy(row, c[k - j], f.row(j));
    for (double& v : row) v *= scale;
    for (std::size_t q = 0; q < s; ++q) {
      axpy(row, W[k * s + q], f.row(q + 1));
      axpy(row, -W[k * s + q], f.row(0));
    }
  }
  return out;
}

TimeSeries caputo_derivative(const TimeSeries& f, double alpha, std::span<const double> sig) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("caputo_derivative: alpha must lie in (0,1]");
  const std::size_t n = f.grid().n;
  const double h = f.grid().h;
  const std::size_t s = sig.size();
  if (s >= n) throw ParameterError("caputo_derivative: too many correction terms for the grid");
  const auto b = l1_weights(alpha, n);
  const double scale = std::pow(h, -alpha) / boost::math::tgamma(2.0 - alpha);

  // Starting weights W[k][i] acting on (f_{i+1} - f_0), already scaled.
  std::vector<double> W(s * (n + 1), 0.0);
  if (s > 0) {
    std::vector<std::vector<double>> mono(s, std::vector<double>(n + 1));
    for (std::size_t q = 0; q < s; ++q) {
      if (!(sig[q] > 0.0)) throw ParameterError("caputo_derivative: correction exponents must be positive");
      for (std::size_t k = 0; k <= n; ++k) mono[q][k] = std::pow(f.grid().node(k), sig[q]);
    }
    std::vector<double> A(s * s);
    for (std::size_t q = 0; q < s; ++q)
      for (std::size_t i = 0; i < s; ++i) A[q * s + i] = mono[q][i + 1];
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<double> rhs(s);
      const double tk = f.grid().node(k);
      for (std::size_t q = 0; q < s; ++q) {
        double exact = boost::math::tgamma(sig[q] + 1.0) / boost::math::tgamma(sig[q] + 1.0 - alpha) *
                       std::pow(tk, sig[q] - alpha);
        rhs[q] = exact - scale * l1_at(b, mono[q], k);
      }
      auto w = solve_small(A, rhs, s);
      for (std::size_t i = 0; i < s; ++i) W[k * s + i] = w[i];
    }
  }

  TimeSeries out(f.grid(), f.width());
  std::vector<double> diff(f.width());
  for (std::size_t k = 1; k <= n; ++k) {
    auto row = out.row(k);
    for (std::size_t j = 0; j < k; ++j) {
      auto a = f.row(j + 1), c = f.row(j);
      const double w = b[k - 1 - j] * scale;
      for (std::size_t i = 0; i < row.size(); ++i) row[i] += w * (a[i] - c[i]);
    }
    for (std::size_t q = 0; q < s; ++q) {
      auto a = f.row(q + 1), c = f.row(0);
      const double w = W[k * s + q];
      for (std::size_t i = 0; i < row.size(); ++i) row[i] += w * (a[i] - c[i]);
    }
  }
  return out;
}

}  // namespace afpk
