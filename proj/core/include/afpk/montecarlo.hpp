#pragma once

#include <cstdint>
#include <vector>

#include "afpk/grid.hpp"
#include "afpk/random.hpp"

namespace afpk {

struct SamplerConfig {
  OperatorSpec spec;
  double alpha;
  double t;
  std::size_t n_paths;
  std::uint64_t seed;

  void validate() const;
};

// Positive stable variable with E exp(-lambda Q) = exp(-lambda^beta), beta in (0,1]
// (Kanter's representation; beta = 1 gives Q = 1).
double sample_stable(double beta, CounterRng& rng);

// One draw of X_{R_t}: R = (t/Q)^alpha shared by all blocks, S_i = b R + sum_j (c_j R)^{1/beta_j} Q_j,
// X_i = sqrt(2 S_i) N(0, I).
std::vector<double> sample_endpoint(const SamplerConfig& config, CounterRng& rng);

// n_paths x total_dim, row-major; path p uses the stream (seed, p).
std::vector<double> sample_endpoints(const SamplerConfig& config);

struct DistanceReport {
  std::vector<double> ks;        // per axis, on the laws conditioned to the box
  std::vector<double> chi2;      // per axis, statistic
  std::vector<double> chi2_p;    // per axis, upper-tail p-value
  std::vector<std::size_t> dof;  // per axis
  double clipped_fraction;       // samples outside the box
  double ks_max() const;
  double chi2_p_min() const;
};

// Compares samples (row-major, field.axes() columns) with the marginals of a
// density sampled on a grid. Throws DomainError below 1000 samples.
DistanceReport density_distance(const std::vector<double>& samples, const ScalarField& field,
                                std::size_t bins = 64);

// Inverse-CDF draws from one marginal of a grid density (used as a null sample).
std::vector<double> sample_marginal(const ScalarField& field, std::size_t axis, std::size_t n, std::uint64_t seed);

}  // namespace afpk
