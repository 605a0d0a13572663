#pragma once

#include <span>

#include "afpk/bernstein.hpp"

namespace afpk::detail {

struct InverseFactor {
  const BernsteinSpec* phi;
  double exponent;
};

// int_lo^hi prod_n (phi_n^{-1}(r^{-k}))^{e_n} r^p dr; lo may be 0.
double lambda_integral(std::span<const InverseFactor> factors, int k, double p, double lo, double hi);

}  // namespace afpk::detail
