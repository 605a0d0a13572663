#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "afpk/solver.hpp"

namespace afpk {

// ||f||_{L_q(0,T; L_p)}: spatial grid sums, trapezoid in time.
double mixed_norm(const SpaceTimeField& f, double p, double q);

// phi.Delta G0 f on every time node.
SpaceTimeField generator_of_solution(const OperatorSpec& spec, double alpha, const SpaceTimeField& f,
                                     const SolveOptions& options = {});
SpaceTimeField generator_of_solution(const ZeroInitSolver& solver, const OperatorSpec& spec, const SpaceTimeField& f);

// ||phi.Delta G0 f|| / ||f|| in L_q(L_p). Throws DomainError when ||f|| = 0.
double regularity_probe(const OperatorSpec& spec, double alpha, double p, double q, const SpaceTimeField& f);
double regularity_probe(const ZeroInitSolver& solver, const OperatorSpec& spec, double p, double q,
                        const SpaceTimeField& f);

// Q_b = (t0 - b, t0 + b) x prod_i B_{kappa_i}(x0_i), kappa_i = (phi_i^{-1}(b^{-alpha}))^{-1/2}
struct CylinderSpec {
  double t0;
  std::vector<double> x0;
  double b;
  std::vector<double> kappa;  // per block
};

CylinderSpec make_cylinder(const OperatorSpec& spec, double alpha, double t0, std::vector<double> x0, double b);

struct OscillationOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  SolveOptions solve;
};

// sup over cylinders of the mean oscillation of phi.Delta G0 f, divided by ||f||_inf.
// Cylinders must lie inside (0,T) x box.
double oscillation_probe(const OperatorSpec& spec, double alpha, const SpaceTimeField& f,
                         const std::vector<CylinderSpec>& cylinders, const OscillationOptions& options = {});
// mean oscillation of an already computed field g on each cylinder (no normalization)
std::vector<double> mean_oscillations(const OperatorSpec& spec, const SpaceTimeField& g,
                                      const std::vector<CylinderSpec>& cylinders, std::size_t samples,
                                      std::uint64_t seed);

struct TraceNorms {
  double besov;     // ||u0|| in B^{phi, gamma + 2 - 1/alpha}_{2,2}
  double solution;  // ||u||_{L2(0,T; H^{phi,gamma+2})} + ||D_t^alpha u||_{L2(0,T; H^{phi,gamma})}
};

// p = q = 2; requires alpha > 1/2. u is the propagator solution, evaluated exactly per mode.
TraceNorms trace_probe(const OperatorSpec& spec, double alpha, double gamma, const ScalarField& u0, double T = 1.0);

}  // namespace afpk
