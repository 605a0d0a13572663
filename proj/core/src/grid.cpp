#include "afpk/grid.hpp"

#include <cmath>
#include <string>

#include "afpk/errors.hpp"

namespace afpk {

OperatorSpec::OperatorSpec(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ParameterError("operator: need at least one block");
  for (const auto& b : blocks_) {
    if (b.dim < 1) throw ParameterError("operator: block dimension must be positive");
    if (b.dim > 3) throw UnsupportedError("operator: block dimension " + std::to_string(b.dim) + " > 3");
    offsets_.push_back(total_dim_);
    total_dim_ += b.dim;
  }
}

std::size_t OperatorSpec::block_of_axis(int axis) const {
  for (std::size_t i = blocks_.size(); i-- > 0;)
    if (axis >= offsets_[i]) return i;
  throw ParameterError("operator: axis out of range");
}

double OperatorSpec::symbol_from_sq(std::span<const double> sq) const {
  double m = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) m += blocks_[i].phi.symbol(sq[i]);
  return m;
}

double OperatorSpec::symbol(std::span<const double> xi) const {
  double m = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < blocks_[i].dim; ++k) s += xi[offsets_[i] + k] * xi[offsets_[i] + k];
    m += blocks_[i].phi.symbol(s);
  }
  return m;
}

std::vector<double> OperatorSpec::block_norms(std::span<const double> x) const {
  std::vector<double> out(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < blocks_[i].dim; ++k) s += x[offsets_[i] + k] * x[offsets_[i] + k];
    out[i] = std::sqrt(s);
  }
  return out;
}

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

ScalarField ScalarField::zeros(const OperatorSpec& spec, std::vector<std::size_t> sizes,
                               std::vector<double> half_widths) {
  if (sizes.size() != static_cast<std::size_t>(spec.total_dim()) || half_widths.size() != sizes.size())
    throw ParameterError("field: need one size and half-width per coordinate axis");
  std::size_t total = 1;
  std::vector<double> h(sizes.size());
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    if (!is_power_of_two(sizes[a]) || sizes[a] < 2) throw ParameterError("field: sizes must be powers of two");
    if (!(half_widths[a] > 0.0)) throw ParameterError("field: half-width must be positive");
    h[a] = 2.0 * half_widths[a] / static_cast<double>(sizes[a]);
    total *= sizes[a];
  }
  return ScalarField{spec, std::move(sizes), std::move(h), std::vector<double>(total, 0.0)};
}

ScalarField ScalarField::like(const ScalarField& o) {
  return ScalarField{o.spec, o.sizes, o.spacing, std::vector<double>(o.values.size(), 0.0)};
}

double ScalarField::cell_volume() const {
  double v = 1.0;
  for (double h : spacing) v *= h;
  return v;
}

void ScalarField::point(std::size_t flat, std::span<double> x) const {
  for (std::size_t a = sizes.size(); a-- > 0;) {
    std::size_t idx = flat % sizes[a];
    flat /= sizes[a];
    x[a] = coord(a, idx);
  }
}

void ScalarField::check_compatible(const ScalarField& o) const {
  if (sizes != o.sizes || spacing != o.spacing) throw ParameterError("field: incompatible grids");
}

}  // namespace afpk
