#pragma once

#include <span>

#include "afpk/bernstein.hpp"
#include "afpk/grid.hpp"

namespace afpk {

// Radial derivative D^m p_i(t, x) of the block transition density, m in {0,1,2}.
// For dim = 1, x is the signed coordinate; for dim 2 and 3 it is |x_i| >= 0.
double component_density(const BernsteinSpec& phi, int dim, double t, double x, int m = 0);

// prod_i p_i(t, x_i); x has length total_dim.
double product_density(const OperatorSpec& spec, double t, std::span<const double> x);

}  // namespace afpk
