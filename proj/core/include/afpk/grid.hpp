#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "afpk/bernstein.hpp"

namespace afpk {

struct Block {
  int dim;  // 1..3
  BernsteinSpec phi;
};

class OperatorSpec {
 public:
  explicit OperatorSpec(std::vector<Block> blocks);

  std::size_t ell() const { return blocks_.size(); }
  int total_dim() const { return total_dim_; }
  const Block& block(std::size_t i) const { return blocks_[i]; }
  const std::vector<Block>& blocks() const { return blocks_; }
  int offset(std::size_t i) const { return offsets_[i]; }
  // Block that owns a coordinate axis.
  std::size_t block_of_axis(int axis) const;

  // m_phi(xi) = sum_i phi_i(|xi_i|^2), xi of length total_dim
  double symbol(std::span<const double> xi) const;
  // same, given per-block |xi_i|^2
  double symbol_from_sq(std::span<const double> sq) const;
  // per-block |x_i|
  std::vector<double> block_norms(std::span<const double> x) const;

 private:
  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

// Periodic box centred at 0: x_n = (n - N/2) h on each axis, row-major, last axis fastest.
struct ScalarField {
  OperatorSpec spec;
  std::vector<std::size_t> sizes;
  std::vector<double> spacing;
  std::vector<double> values;

  static ScalarField zeros(const OperatorSpec& spec, std::vector<std::size_t> sizes,
                           std::vector<double> half_widths);
  static ScalarField like(const ScalarField& other);

  std::size_t axes() const { return sizes.size(); }
  std::size_t size() const { return values.size(); }
  double coord(std::size_t axis, std::size_t idx) const {
    return (static_cast<double>(idx) - static_cast<double>(sizes[axis] / 2)) * spacing[axis];
  }
  double half_width(std::size_t axis) const { return 0.5 * static_cast<double>(sizes[axis]) * spacing[axis]; }
  double cell_volume() const;
  // coordinates of a flat index
  void point(std::size_t flat, std::span<double> x) const;
  void check_compatible(const ScalarField& other) const;
};

bool is_power_of_two(std::size_t n);

}  // namespace afpk
