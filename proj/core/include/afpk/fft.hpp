#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace afpk {

// Real-to-half-complex transforms on a row-major grid (FFTW r2c layout:
// last axis stores N/2+1 modes). forward is unnormalised, backward divides by N.
class RealFFT {
 public:
  explicit RealFFT(std::vector<std::size_t> sizes);

  std::size_t points() const { return points_; }
  std::size_t modes() const { return modes_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

  std::vector<std::complex<double>> forward(std::span<const double> x) const;
  std::vector<double> backward(std::span<const std::complex<double>> X) const;

  // signed integer frequency index of a mode along an axis
  void mode_index(std::size_t mode, std::span<long> k) const;
  // 1 or 2: how many full-spectrum modes a half-spectrum entry stands for
  double multiplicity(std::size_t mode) const;

 private:
  std::vector<std::size_t> sizes_;
  std::size_t points_ = 1, modes_ = 1;
};

}  // namespace afpk
