#pragma once

#include <vector>

namespace afpk {

struct StableTerm {
  double coef;  // c_j > 0
  double beta;  // exponent in (0, 1]
};

// phi(lambda) = drift * lambda + sum_j c_j lambda^beta_j
class BernsteinSpec {
 public:
  BernsteinSpec(double drift, std::vector<StableTerm> terms);

  static BernsteinSpec power(double beta, double coef = 1.0);
  static BernsteinSpec brownian(double drift = 1.0);

  double drift() const { return drift_; }
  const std::vector<StableTerm>& terms() const { return terms_; }

  // Strict evaluation, lambda > 0.
  double operator()(double lambda) const;
  // Same formula but accepts lambda = 0 (returns 0); used for symbols.
  double symbol(double lambda) const;
  double derivative(double lambda) const;
  double inverse(double y) const;

  // Smallest / largest exponent, drift counting as 1.
  double min_exponent() const;
  double max_exponent() const;
  // True when phi is a single power c*lambda^beta (or pure drift).
  bool is_pure_power() const;

 private:
  double drift_;
  std::vector<StableTerm> terms_;
};

struct ScalingCertificate {
  double c0;
  double delta0;
};

double eval(const BernsteinSpec& spec, double lambda);
double inverse(const BernsteinSpec& spec, double y);
ScalingCertificate wls_certificate(const BernsteinSpec& spec);

}  // namespace afpk
