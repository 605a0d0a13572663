#include "afpk/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "afpk/errors.hpp"

namespace afpk {
namespace {

struct Plans {
  fftw_plan fwd = nullptr, bwd = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex mu;
  return mu;
}

// Plans are created once per shape and executed with the new-array interface,
// which is thread-safe. Buffers always come from fftw_malloc so alignment matches.
Plans plans_for(const std::vector<std::size_t>& sizes, std::size_t points, std::size_t modes) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  static std::map<std::vector<std::size_t>, Plans> cache;
  auto it = cache.find(sizes);
  if (it != cache.end()) return it->second;
  std::vector<int> n(sizes.begin(), sizes.end());
  double* r = fftw_alloc_real(points);
  fftw_complex* c = fftw_alloc_complex(modes);
  Plans p;
  p.fwd = fftw_plan_dft_r2c(static_cast<int>(n.size()), n.data(), r, c, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_c2r(static_cast<int>(n.size()), n.data(), c, r, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
  if (!p.fwd || !p.bwd) throw UnsupportedError("fft: plan creation failed");
  cache.emplace(sizes, p);
  return p;
}

struct RealBuf {
  double* p;
  explicit RealBuf(std::size_t n) : p(fftw_alloc_real(n)) {}
  ~RealBuf() { fftw_free(p); }
};
struct ComplexBuf {
  fftw_complex* p;
  explicit ComplexBuf(std::size_t n) : p(fftw_alloc_complex(n)) {}
  ~ComplexBuf() { fftw_free(p); }
};

}  // namespace

RealFFT::RealFFT(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw ParameterError("fft: need at least one axis");
  for (std::size_t a = 0; a < sizes_.size(); ++a) {
    points_ *= sizes_[a];
    modes_ *= (a + 1 == sizes_.size()) ? sizes_[a] / 2 + 1 : sizes_[a];
  }
}

std::vector<std::complex<double>> RealFFT::forward(std::span<const double> x) const {
  if (x.size() != points_) throw ParameterError("fft: input size mismatch");
  Plans p = plans_for(sizes_, points_, modes_);
  RealBuf in(points_);
  ComplexBuf out(modes_);
  std::memcpy(in.p, x.data(), points_ * sizeof(double));
  fftw_execute_dft_r2c(p.fwd, in.p, out.p);
  std::vector<std::complex<double>> X(modes_);
  std::memcpy(static_cast<void*>(X.data()), out.p, modes_ * sizeof(fftw_complex));
  return X;
}

std::vector<double> RealFFT::backward(std::span<const std::complex<double>> X) const {
  if (X.size() != modes_) throw ParameterError("fft: spectrum size mismatch");
  Plans p = plans_for(sizes_, points_, modes_);
  ComplexBuf in(modes_);
  RealBuf out(points_);
  std::memcpy(in.p, X.data(), modes_ * sizeof(fftw_complex));
  fftw_execute_dft_c2r(p.bwd, in.p, out.p);
  std::vector<double> x(points_);
  const double inv = 1.0 / static_cast<double>(points_);
  for (std::size_t i = 0; i < points_; ++i) x[i] = out.p[i] * inv;
  return x;
}

void RealFFT::mode_index(std::size_t mode, std::span<long> k) const {
  const std::size_t last = sizes_.size() - 1;
  const std::size_t nh = sizes_[last] / 2 + 1;
  k[last] = static_cast<long>(mode % nh);
  mode /= nh;
  for (std::size_t a = last; a-- > 0;) {
    long n = static_cast<long>(sizes_[a]);
    long i = static_cast<long>(mode % sizes_[a]);
    mode /= sizes_[a];
    k[a] = i < n / 2 ? i : i - n;
  }
}

double RealFFT::multiplicity(std::size_t mode) const {
  const std::size_t nl = sizes_.back();
  const std::size_t kl = mode % (nl / 2 + 1);
  return (kl == 0 || 2 * kl == nl) ? 1.0 : 2.0;
}

}  // namespace afpk
