#pragma once

#include <vector>

#include "qwigner/common.hpp"

namespace qwigner {

/// p(x) exp(a x^2 + b x + c) on the real line, with Re a < 0.
///
/// The family is closed under derivatives, conjugation, reflection, affine
/// substitution and the Fourier transform (e^{-2 pi i x xi} kernel), so every
/// quantity a pairing needs is available in closed form.
class GaussPoly1d {
 public:
  /// poly[k] is the coefficient of x^k.
  GaussPoly1d(std::vector<Complex> poly, Complex a, Complex b, Complex c);

  /// exp(-pi (x - center)^2 / width^2)
  static GaussPoly1d gaussian(double center = 0.0, double width = 1.0);
  /// gaussian(center, width) * e^{2 pi i freq x}
  static GaussPoly1d modulated(double center, double width, double freq);
  /// n-th derivative of gaussian(center, width): a Hermite polynomial times the Gaussian.
  static GaussPoly1d hermite(int n, double center = 0.0, double width = 1.0);
  /// Normalized Gaussian density with standard deviation sigma.
  static GaussPoly1d normal_density(double sigma);

  const std::vector<Complex>& poly() const { return poly_; }
  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }

  Complex operator()(double x) const;

  GaussPoly1d derivative(int k = 1) const;
  GaussPoly1d fourier() const;
  GaussPoly1d inverse_fourier() const;
  GaussPoly1d conj() const;
  /// x -> f(-x)
  GaussPoly1d reflected() const;
  /// t -> f(alpha t + beta), alpha != 0
  GaussPoly1d affine(double alpha, double beta) const;
  GaussPoly1d operator*(const GaussPoly1d& other) const;

  /// Center of the Gaussian envelope and a radius beyond which |f| < eps * max|f| (approximately).
  double center() const;
  double radius(double eps = 1e-16) const;

 private:
  std::vector<Complex> poly_;
  Complex a_, b_, c_;
};

/// Product test function phi(x) = prod_i f_i(x_i) on R^d.
class SeparableTest {
 public:
  explicit SeparableTest(std::vector<GaussPoly1d> factors);
  static SeparableTest gaussian(int d);

  int dim() const { return static_cast<int>(factors_.size()); }
  const std::vector<GaussPoly1d>& factors() const { return factors_; }

  Complex operator()(const Vector& x) const;
  SeparableTest derivative(const MultiIndex& order) const;
  SeparableTest fourier() const;
  SeparableTest inverse_fourier() const;
  SeparableTest conj() const;
  SeparableTest reflected() const;

 private:
  std::vector<GaussPoly1d> factors_;
};

/// Derivatives of a fixed function up to a total order, evaluated pointwise.
class DerivativeFamily {
 public:
  DerivativeFamily(const SeparableTest& f, int max_order);

  int dim() const { return static_cast<int>(table_.size()); }
  int max_order() const { return max_order_; }
  /// Throws ValidationError when |order| exceeds max_order.
  Complex eval(const MultiIndex& order, const Vector& at) const;

 private:
  int max_order_;
  std::vector<std::vector<GaussPoly1d>> table_;  // table_[i][k] = k-th derivative of factor i
};

/// conj(phi)^(gamma), the family a pairing formula needs on the first factor.
DerivativeFamily conj_family(const SeparableTest& phi, int max_order);
/// conj(phi-hat)^(gamma)
DerivativeFamily conj_fourier_family(const SeparableTest& phi, int max_order);

}  // namespace qwigner
