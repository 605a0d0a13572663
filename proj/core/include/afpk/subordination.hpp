#pragma once

#include <span>
#include <vector>

namespace afpk {

struct SubordinationParams {
  double alpha;  // in (0, 1)
};

// Density phi(t, r) of the inverse stable subordinator R_t.
double inverse_subordinator_density(SubordinationParams p, double t, double r);

// phi_{alpha,beta}(t, r_j) = D_t^{beta-alpha} phi(t, r_j) by grid fractional
// calculus in t with Richardson acceptance between successive refinements.
std::vector<double> fractional_kernel_weight(SubordinationParams p, double beta, double t,
                                             std::span<const double> r_grid);

// R_t = (t / Q_1)^alpha for a sample of Q_1.
double sample_inverse_subordinator(SubordinationParams p, double t, double u_stable);

// Tabulated profile M(z) with phi(t, r) = t^{-alpha} M(r t^{-alpha}).
// Spline-interpolated from the exact density; zero beyond wright_m_support.
double wright_m(double alpha, double z);
double wright_m_support(double alpha);

struct KernelWeightReport {
  std::vector<double> values;
  double relative_change;  // last Richardson difference, max-normalised
  int steps;               // time steps used at the finest accepted level
};

KernelWeightReport fractional_kernel_weight_report(SubordinationParams p, double beta, double t,
                                                   std::span<const double> r_grid);

}  // namespace afpk
