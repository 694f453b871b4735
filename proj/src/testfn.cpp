#include "qwigner/testfn.hpp"

#include <cmath>

namespace qwigner {

namespace {

void trim(std::vector<Complex>& p) {
  while (p.size() > 1 && p.back() == Complex(0.0)) p.pop_back();
  if (p.empty()) p.push_back(0.0);
}

std::vector<Complex> poly_mul(const std::vector<Complex>& p, const std::vector<Complex>& q) {
  std::vector<Complex> r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

void poly_add(std::vector<Complex>& p, const std::vector<Complex>& q, Complex scale) {
  if (p.size() < q.size()) p.resize(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) p[i] += scale * q[i];
}

}  // namespace

GaussPoly1d::GaussPoly1d(std::vector<Complex> poly, Complex a, Complex b, Complex c)
    : poly_(std::move(poly)), a_(a), b_(b), c_(c) {
  if (!(a_.real() < 0.0)) throw ValidationError("Gaussian test function needs Re a < 0");
  trim(poly_);
}

GaussPoly1d GaussPoly1d::gaussian(double center, double width) {
  if (!(width > 0.0)) throw ValidationError("Gaussian width must be positive");
  const double k = kPi / (width * width);
  return GaussPoly1d({1.0}, -k, 2.0 * k * center, -k * center * center);
}

GaussPoly1d GaussPoly1d::modulated(double center, double width, double freq) {
  GaussPoly1d g = gaussian(center, width);
  g.b_ += Complex(0.0, 2.0 * kPi * freq);
  return g;
}

GaussPoly1d GaussPoly1d::hermite(int n, double center, double width) {
  return gaussian(center, width).derivative(n);
}

GaussPoly1d GaussPoly1d::normal_density(double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("mollifier width must be positive");
  return GaussPoly1d({1.0}, -0.5 / (sigma * sigma), 0.0, -std::log(sigma * std::sqrt(2.0 * kPi)));
}

Complex GaussPoly1d::operator()(double x) const {
  Complex p = 0.0;
  for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) p = p * x + *it;
  return p * std::exp(a_ * x * x + b_ * x + c_);
}

GaussPoly1d GaussPoly1d::derivative(int k) const {
  if (k < 0) throw ValidationError("derivative order must be nonnegative");
  GaussPoly1d g = *this;
  for (int n = 0; n < k; ++n) {
    // (p' + p (2 a x + b)) e^q
    std::vector<Complex> next = poly_mul(g.poly_, {g.b_, 2.0 * g.a_});
    for (std::size_t i = 1; i < g.poly_.size(); ++i) next[i - 1] += static_cast<double>(i) * g.poly_[i];
    trim(next);
    g.poly_ = std::move(next);
  }
  return g;
}

GaussPoly1d GaussPoly1d::fourier() const {
  const Complex a2 = kPi * kPi / a_;
  const Complex b2 = Complex(0.0, kPi) * b_ / a_;
  const Complex c2 = c_ - b_ * b_ / (4.0 * a_) + std::log(std::sqrt(kPi / (-a_)));
  // F[x^k g] = (i / 2 pi)^k d^k/dxi^k F[g]
  GaussPoly1d base({1.0}, a2, b2, c2);
  std::vector<Complex> acc{0.0};
  Complex factor = 1.0;
  GaussPoly1d dk = base;
  for (std::size_t k = 0; k < poly_.size(); ++k) {
    if (k > 0) {
      dk = dk.derivative(1);
      factor *= Complex(0.0, 1.0 / (2.0 * kPi));
    }
    poly_add(acc, dk.poly_, poly_[k] * factor);
  }
  return GaussPoly1d(std::move(acc), a2, b2, c2);
}

GaussPoly1d GaussPoly1d::inverse_fourier() const { return fourier().reflected(); }

GaussPoly1d GaussPoly1d::conj() const {
  std::vector<Complex> p(poly_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::conj(poly_[i]);
  return GaussPoly1d(std::move(p), std::conj(a_), std::conj(b_), std::conj(c_));
}

GaussPoly1d GaussPoly1d::reflected() const {
  std::vector<Complex> p(poly_);
  for (std::size_t i = 1; i < p.size(); i += 2) p[i] = -p[i];
  return GaussPoly1d(std::move(p), a_, -b_, c_);
}

GaussPoly1d GaussPoly1d::affine(double alpha, double beta) const {
  if (alpha == 0.0) throw ValidationError("affine substitution needs a nonzero scale");
  // Horner in the substituted variable alpha t + beta.
  std::vector<Complex> p{0.0};
  const std::vector<Complex> lin{beta, alpha};
  for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) {
    p = poly_mul(p, lin);
    p[0] += *it;
  }
  return GaussPoly1d(std::move(p), a_ * alpha * alpha, 2.0 * a_ * alpha * beta + b_ * alpha,
                     a_ * beta * beta + b_ * beta + c_);
}

GaussPoly1d GaussPoly1d::operator*(const GaussPoly1d& other) const {
  return GaussPoly1d(poly_mul(poly_, other.poly_), a_ + other.a_, b_ + other.b_, c_ + other.c_);
}

double GaussPoly1d::center() const { return -b_.real() / (2.0 * a_.real()); }

double GaussPoly1d::radius(double eps) const {
  const double s = 1.0 / std::sqrt(-a_.real());
  return s * (std::sqrt(std::log(1.0 / eps)) + static_cast<double>(poly_.size()));
}

SeparableTest::SeparableTest(std::vector<GaussPoly1d> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ValidationError("test function needs at least one factor");
}

SeparableTest SeparableTest::gaussian(int d) {
  return SeparableTest(std::vector<GaussPoly1d>(static_cast<std::size_t>(d), GaussPoly1d::gaussian()));
}

Complex SeparableTest::operator()(const Vector& x) const {
  if (x.size() != dim()) throw ValidationError("test function dimension mismatch");
  Complex v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= factors_[i](x(i));
  return v;
}

SeparableTest SeparableTest::derivative(const MultiIndex& order) const {
  if (static_cast<int>(order.size()) != dim()) throw ValidationError("multi-index dimension mismatch");
  std::vector<GaussPoly1d> f;
  for (int i = 0; i < dim(); ++i) f.push_back(factors_[i].derivative(order[i]));
  return SeparableTest(std::move(f));
}

#define QW_MAP_FACTORS(method)                              \
  SeparableTest SeparableTest::method() const {             \
    std::vector<GaussPoly1d> f;                             \
    for (const auto& g : factors_) f.push_back(g.method()); \
    return SeparableTest(std::move(f));                     \
  }
QW_MAP_FACTORS(fourier)
QW_MAP_FACTORS(inverse_fourier)
QW_MAP_FACTORS(conj)
QW_MAP_FACTORS(reflected)
#undef QW_MAP_FACTORS

DerivativeFamily::DerivativeFamily(const SeparableTest& f, int max_order) : max_order_(max_order) {
  if (max_order < 0) throw ValidationError("derivative order must be nonnegative");
  for (const auto& g : f.factors()) {
    std::vector<GaussPoly1d> row{g};
    for (int k = 1; k <= max_order; ++k) row.push_back(row.back().derivative(1));
    table_.push_back(std::move(row));
  }
}

Complex DerivativeFamily::eval(const MultiIndex& order, const Vector& at) const {
  if (static_cast<int>(order.size()) != dim() || at.size() != dim()) {
    throw ValidationError("derivative family dimension mismatch");
  }
  int total = 0;
  for (int k : order) total += k;
  if (total > max_order_) throw ValidationError("missing derivative order " + std::to_string(total));
  Complex v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= table_[i][order[i]](at(i));
  return v;
}

DerivativeFamily conj_family(const SeparableTest& phi, int max_order) {
  return DerivativeFamily(phi.conj(), max_order);
}

DerivativeFamily conj_fourier_family(const SeparableTest& phi, int max_order) {
  return DerivativeFamily(phi.fourier().conj(), max_order);
}

}  // namespace qwigner
