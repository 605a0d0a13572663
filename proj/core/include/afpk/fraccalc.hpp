#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace afpk {

struct TimeGrid {
  double h;
  std::size_t n;  // nodes t_k = k h, k = 0..n

  TimeGrid(double h, std::size_t n);
  double node(std::size_t k) const { return static_cast<double>(k) * h; }
  double end() const { return node(n); }
};

// n+1 rows of `width` values each; width 1 is the scalar case.
class TimeSeries {
 public:
  TimeSeries(TimeGrid grid, std::size_t width = 1);
  TimeSeries(TimeGrid grid, std::vector<double> scalar_values);

  const TimeGrid& grid() const { return grid_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return grid_.n + 1; }

  std::span<double> row(std::size_t k) { return {values_.data() + k * width_, width_}; }
  std::span<const double> row(std::size_t k) const { return {values_.data() + k * width_, width_}; }
  double& operator[](std::size_t k) { return values_[k * width_]; }
  double operator[](std::size_t k) const { return values_[k * width_]; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

 private:
  TimeGrid grid_;
  std::size_t width_;
  std::vector<double> values_;
};

// Riemann-Liouville integral by exact integration of the piecewise-linear interpolant.
// Correction exponents add starting weights on f_1..f_s - f_0 that make the rule
// exact on t^sigma; data with a t^{1/2} onset needs {0.5, 1} to stay second order.
TimeSeries fractional_integral(const TimeSeries& series, double alpha,
                               std::span<const double> correction_exponents = {});

// D^alpha = d/dt I^{1-alpha}; centered differences inside, second-order one-sided at the ends.
TimeSeries rl_derivative(const TimeSeries& series, double alpha);

// L1 scheme for D^alpha (f - f(0)). Optional correction exponents add starting
// weights that make the rule exact on t^sigma for each listed sigma.
TimeSeries caputo_derivative(const TimeSeries& series, double alpha,
                             std::span<const double> correction_exponents = {});

}  // namespace afpk
