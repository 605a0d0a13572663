#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "afpk/fft.hpp"
#include "afpk/grid.hpp"

namespace afpk {

// m_phi sampled on the half spectrum of a field's grid.
struct SymbolField {
  RealFFT fft;
  std::vector<double> xi;  // modes x axes, angular frequencies
  std::vector<double> m;   // m_phi per mode
  std::size_t axes;

  std::span<const double> xi_of(std::size_t mode) const { return {xi.data() + mode * axes, axes}; }
};

SymbolField symbol_field(const ScalarField& field);

// Generic real multiplier (even in each frequency component) applied by FFT.
ScalarField apply_multiplier(const ScalarField& field, const std::function<double(std::size_t mode)>& mult,
                             const SymbolField& sym);
// Complex multiplier, e.g. (i xi)^m for derivatives; the imaginary part of the result is dropped.
ScalarField apply_complex_multiplier(const ScalarField& field,
                                     const std::function<std::complex<double>(std::size_t mode)>& mult,
                                     const SymbolField& sym);

ScalarField apply_bessel_multiplier(const ScalarField& field, double gamma);
ScalarField apply_generator(const OperatorSpec& spec, const ScalarField& field);

// Smooth cutoff: 1 on [-1,1], 0 outside [-2,2], C-infinity.
double lp_cutoff(double lambda);
// F1[Psi](lambda) = chi(lambda) - chi(2 lambda), supported in 1/2 <= |lambda| <= 2.
double lp_window(double lambda);
// Multiplier of S0: sum over j <= 0 of the dyadic windows, equal to chi(m) (1 at m = 0).
double lp_low_multiplier(double m);

inline constexpr int kS0 = std::numeric_limits<int>::min();
// Delta_j for integer j; kS0 selects S0.
ScalarField lp_project(const ScalarField& field, int j);

// Highest j whose window meets the field's frequency support.
int lp_max_level(const ScalarField& field);

double lp_norm(const ScalarField& field, double p);
double sobolev_norm(const ScalarField& field, double gamma, double p);

enum class BesovWeight {
  HalfIndex,  // 2^{j gamma q / 2}
  Literal     // 2^{gamma q}, no j
};

double besov_norm(const ScalarField& field, double gamma, double p, double q,
                  BesovWeight weight = BesovWeight::HalfIndex);

}  // namespace afpk
