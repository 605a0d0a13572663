#pragma once

#include <span>
#include <vector>

#include "afpk/grid.hpp"

namespace afpk {

struct KernelQuery {
  double alpha;
  double beta;
  double t;
  std::vector<double> x;  // length total_dim
  std::vector<int> m;     // per-block derivative order, empty means all zero
};

// q_{alpha,beta}(t, .) = int_0^inf p(r, .) phi_{alpha,beta}(t, r) dr on fixed
// Gauss-Legendre panels: geometric towards r = 0, uniform up to the decay
// cutoff of phi_{alpha,beta}. Node weights are computed once per (alpha, beta, t).
class QuadratureKernel {
 public:
  QuadratureKernel(const OperatorSpec& spec, double alpha, double beta, double t);

  double operator()(std::span<const double> x, std::span<const int> m = {}) const;

  // D^m p_i(r_k, x_i) at every node (x_i signed for dim 1, radius otherwise)
  std::vector<double> block_table(std::size_t block, double xi, int m = 0) const;
  // sum_k w_k prod_i table_i[k]
  double combine(std::span<const std::vector<double>* const> tables) const;

  const std::vector<double>& nodes() const { return r_; }
  // quadrature weight times phi_{alpha,beta}(t, r_k)
  const std::vector<double>& weights() const { return w_; }
  const OperatorSpec& spec() const { return spec_; }
  double richardson_change() const { return richardson_; }

 private:
  OperatorSpec spec_;
  double alpha_, beta_, t_;
  std::vector<double> r_, w_;
  double richardson_ = 0.0;
};

double subordinated_kernel_quadrature(const OperatorSpec& spec, const KernelQuery& query);

struct SpectralKernel {
  ScalarField field;
  double boundary_ratio;  // max |q| on the box faces over max |q|
  bool aliasing_warning;  // boundary_ratio above 1e-8
};

// Symbol t^{alpha-beta} E_{alpha,1-beta+alpha}(-t^alpha m_phi(xi)), times (i xi)^m
// per dim-1 block, inverted on the grid of `grid` (its values are ignored).
SpectralKernel subordinated_kernel_spectral(const OperatorSpec& spec, double alpha, double beta, double t,
                                            const ScalarField& grid, std::span<const int> m = {});

// Pointwise inverse Fourier integral of the same symbol (half-line oscillatory
// quadrature). Supports one 1-d block, or two 1-d blocks.
double subordinated_kernel_fourier(const OperatorSpec& spec, const KernelQuery& query);

// Box with half-width `extent`/2 times the natural scale (phi_i^{-1}(t^{-alpha}))^{-1/2} per axis.
ScalarField default_kernel_grid(const OperatorSpec& spec, double alpha, double t, double extent = 8.0,
                                std::size_t points_1d = 1024, std::size_t points_2d = 256,
                                std::size_t points_3d = 64);

struct RegimeSplit {
  std::vector<std::size_t> near_diagonal;  // i_1..i_{l2}, descending scaled value
  std::vector<std::size_t> off_diagonal;   // j_1..j_{l1}
  std::vector<double> scaled;              // t^alpha phi_i(|x_i|^{-2}) per block
};

RegimeSplit classify_regime(const OperatorSpec& spec, double alpha, double t, std::span<const double> x);

enum class EnvelopeConvention {
  ProofConsistent,  // all off-diagonal: Lambda^2 = 2 t^alpha
  AsDisplayed       // all off-diagonal: empty product, Lambda^1 = 1
};

struct BoundEnvelope {
  double value;
  double off_diagonal_factor;
  double lambda1, lambda2, lambda3;
  RegimeSplit regime;
};

BoundEnvelope bound_envelope(const OperatorSpec& spec, const KernelQuery& query,
                             EnvelopeConvention convention = EnvelopeConvention::ProofConsistent);

struct MassReport {
  double mass;            // sum |q| h^d over the periodic box
  double tail_estimate;   // |q| mass in the outer 1/16 of the box along any axis
  double boundary_ratio;
};

MassReport kernel_mass_report(const OperatorSpec& spec, double alpha, double beta, double t,
                              const ScalarField* grid = nullptr);
double kernel_mass(const OperatorSpec& spec, double alpha, double beta, double t);

struct MarginalCheck {
  double lhs;
  double rhs;
  bool near_diagonal;
};

// lhs = int over the other blocks of |D^m_{x_i} q|, rhs = the corresponding bound.
MarginalCheck marginal_bound_check(const OperatorSpec& spec, double alpha, double beta, std::size_t block, int m,
                                   double t, double xi);

// Same check for many x_i at fixed (alpha, beta, t): the radial tables of the
// other blocks are built once.
class MarginalScanner {
 public:
  MarginalScanner(const OperatorSpec& spec, double alpha, double beta, double t, std::size_t block);
  MarginalCheck operator()(int m, double xi) const;

 private:
  QuadratureKernel kernel_;
  double alpha_, beta_, t_;
  std::size_t block_;
  std::vector<std::size_t> others_;
  std::vector<std::vector<double>> rho_, rho_w_;      // radial nodes and measure weights per other block
  std::vector<std::vector<double>> tables_;           // p_j(r_k, rho_n), n-major
};

}  // namespace afpk
