#pragma once

#include <vector>

#include "afpk/fraccalc.hpp"
#include "afpk/grid.hpp"

namespace afpk {

// u(t_k, x) for k = 0..n on a common spatial grid.
struct SpaceTimeField {
  TimeGrid grid;
  std::vector<ScalarField> slices;

  static SpaceTimeField zeros(TimeGrid grid, const ScalarField& like);
  // slices[k] = g(t_k) * profile
  static SpaceTimeField separable(TimeGrid grid, const ScalarField& profile, const std::vector<double>& g);

  std::size_t nodes() const { return slices.size(); }
  ScalarField& operator[](std::size_t k) { return slices[k]; }
  const ScalarField& operator[](std::size_t k) const { return slices[k]; }
  void check_consistent() const;
};

struct SolveOptions {
  bool half_step_check = true;
  double half_step_tolerance = 1e-3;
};

struct SolveReport {
  double half_step_change = 0.0;  // ||u_h(T) - u_2h(T)|| / ||u_h(T)||
};

// u(t) = int_0^t (t-s)^{alpha-1} E_{alpha,alpha}(-(t-s)^alpha m_phi) f(s) ds per Fourier mode,
// exact in s for piecewise-linear f. Throws ConvergenceError when the
// half-step comparison exceeds the tolerance.
SpaceTimeField solve_zero_init(const OperatorSpec& spec, double alpha, const SpaceTimeField& f,
                               const SolveOptions& options = {}, SolveReport* report = nullptr);

// Same operator with the per-mode weights computed once for a fixed
// (spec, alpha, time grid, spatial grid); reused across many forcings.
class ZeroInitSolver {
 public:
  ZeroInitSolver(const OperatorSpec& spec, double alpha, TimeGrid grid, const ScalarField& like,
                 SolveOptions options = {});
  SpaceTimeField operator()(const SpaceTimeField& f, SolveReport* report = nullptr) const;

 private:
  struct Weights {
    std::vector<double> a, b;
  };
  OperatorSpec spec_;
  double alpha_;
  TimeGrid grid_;
  ScalarField base_;
  SolveOptions options_;
  bool check_;
  std::vector<std::size_t> slot_;  // mode -> distinct symbol value
  std::vector<Weights> fine_, coarse_;
};

// E_{alpha,1}(-t^alpha m_phi) applied to u0.
ScalarField propagate_initial(const OperatorSpec& spec, double alpha, const ScalarField& u0, double t);
SpaceTimeField propagate_initial(const OperatorSpec& spec, double alpha, const ScalarField& u0, TimeGrid grid);

struct ResidualReport {
  SpaceTimeField field;             // D_t^alpha (u - u0) - phi.Delta u - f
  std::vector<double> node_norms;   // L2 norm per time node
  double relative;                  // ||r|| / (||phi.Delta u|| + ||f||) in L2(0,T; L2)
};

ResidualReport residual(const OperatorSpec& spec, double alpha, const SpaceTimeField& u, const SpaceTimeField& f,
                        const ScalarField& u0);

}  // namespace afpk
