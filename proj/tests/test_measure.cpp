#include <cmath>
#include <random>

#include "doctest.h"
#include "qwigner/measure.hpp"

using namespace qwigner;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

std::vector<double> positions(const AtomicMeasure& mu) {
  std::vector<double> out;
  for (const auto& a : mu.atoms()) out.push_back(a.position(0));
  return out;
}

}  // namespace

TEST_CASE("atoms with equal position and order merge") {
  AtomicMeasure mu(1, {{v1(0), {0}, 1.0}, {v1(1e-12), {0}, 2.0}, {v1(0), {1}, 3.0}, {v1(2), {0}, 0.0}});
  REQUIRE(mu.size() == 2);
  CHECK(mu.atoms()[0].coeff == Complex(3.0));
  CHECK(mu.atoms()[1].order == MultiIndex{1});
  CHECK(mu.max_order() == 1);
  CHECK_FALSE(mu.is_order_zero());
  CHECK(mu.support().size() == 1);
  CHECK_THROWS_AS(AtomicMeasure(1, {{v1(0), {-1}, 1.0}}), ValidationError);
  CHECK_THROWS_AS(AtomicMeasure(2, {{v1(0), {0}, 1.0}}), ValidationError);
}

TEST_CASE("Dirac combs") {
  CHECK(positions(dirac_comb(Matrix::Identity(1, 1), Box::cube(1, -2, 2))) == std::vector<double>{-2, -1, 0, 1, 2});
  CHECK(positions(dirac_comb(2 * Matrix::Identity(1, 1), Box::cube(1, -3, 3))) == std::vector<double>{-2, 0, 2});
  auto c2 = dirac_comb(Matrix::Identity(2, 2), Box::cube(2, -1, 1));
  CHECK(c2.size() == 9);
  for (const auto& a : c2.atoms()) CHECK(a.coeff == Complex(1.0));
  CHECK_THROWS_AS(dirac_comb(Matrix::Identity(2, 2), Box::cube(2, -1000, 1000), 1000), ValidationError);
  CHECK_THROWS_AS(dirac_comb(Matrix::Zero(1, 1), Box::cube(1, -1, 1)), ValidationError);
}

TEST_CASE("comb atoms lie on the lattice") {
  Matrix b(2, 2);
  b << 1.0, 0.5, 0.0, 1.5;
  auto mu = dirac_comb(b, Box::cube(2, -4, 4));
  const Matrix inv = b.inverse();
  for (const auto& a : mu.atoms()) {
    const Vector k = inv * a.position;
    CHECK((k - k.array().round().matrix()).norm() < 1e-12);
  }
}

TEST_CASE("quasicrystal generator") {
  SUBCASE("single shift with P = 1 is a comb") {
    QuasicrystalSpec spec{Matrix::Identity(1, 1), {v1(0)}, {TrigPolynomial::constant(1, 1.0)}, Box::cube(1, -2, 2)};
    CHECK(positions(generate_quasicrystal(spec)) == positions(dirac_comb(Matrix::Identity(1, 1), spec.box)));
  }
  SUBCASE("two shifts give the half-integers") {
    QuasicrystalSpec spec{Matrix::Identity(1, 1),
                          {v1(0), v1(0.5)},
                          {TrigPolynomial::constant(1, 1.0), TrigPolynomial::constant(1, 1.0)},
                          Box::cube(1, -2, 2)};
    auto mu = generate_quasicrystal(spec);
    CHECK(positions(mu) == std::vector<double>{-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2});
    for (const auto& a : mu.atoms()) CHECK(a.coeff == Complex(1.0));
  }
  SUBCASE("modulated coefficients cycle through cube roots of unity") {
    TrigPolynomial p(1, {{v1(1.0 / 3.0), 1.0}});
    QuasicrystalSpec spec{Matrix::Identity(1, 1), {v1(0)}, {p}, Box::cube(1, -3, 3)};
    auto mu = generate_quasicrystal(spec);
    REQUIRE(mu.size() == 7);
    for (const auto& a : mu.atoms()) {
      const double k = a.position(0);
      CHECK(std::abs(a.coeff - std::polar(1.0, 2 * kPi * k / 3)) < 1e-14);
      CHECK(std::abs(std::pow(a.coeff, 3) - 1.0) < 1e-13);
    }
  }
  SUBCASE("coincident positions across shifts add") {
    QuasicrystalSpec spec{Matrix::Identity(1, 1),
                          {v1(0), v1(1)},
                          {TrigPolynomial::constant(1, 1.0), TrigPolynomial::constant(1, 2.0)},
                          Box::cube(1, -1, 1)};
    auto mu = generate_quasicrystal(spec);
    for (const auto& a : mu.atoms()) CHECK(a.coeff == Complex(3.0));
  }
  QuasicrystalSpec bad{Matrix::Identity(1, 1), {v1(0)}, {}, Box::cube(1, -1, 1)};
  CHECK_THROWS_AS(generate_quasicrystal(bad), ValidationError);
}

TEST_CASE("Fourier evaluation") {
  const AtomicMeasure delta(1, {{v1(0), {0}, 1.0}});
  CHECK(std::abs(fourier_eval(delta, v1(0.37)) - 1.0) < 1e-15);
  const AtomicMeasure two(1, {{v1(0), {0}, 1.0}, {v1(1), {0}, 1.0}});
  CHECK(std::abs(fourier_eval(two, v1(0.5))) < 1e-15);
  SUBCASE("Dirichlet kernel") {
    for (int n : {1, 3, 10}) {
      auto comb = dirac_comb(Matrix::Identity(1, 1), Box::cube(1, -n, n));
      for (double xi : {0.1, 0.23, 0.377}) {
        const double ref = std::sin(kPi * (2 * n + 1) * xi) / std::sin(kPi * xi);
        CHECK(std::abs(fourier_eval(comb, v1(xi)) - ref) < 1e-12);
      }
    }
  }
  SUBCASE("derivative atom: (2 pi i xi) e^{-2 pi i r xi}") {
    const AtomicMeasure d1(1, {{v1(0.25), {1}, 1.0}});
    const double xi = 0.7;
    CHECK(std::abs(fourier_eval(d1, v1(xi)) - Complex(0, 2 * kPi * xi) * std::polar(1.0, -2 * kPi * 0.25 * xi)) < 1e-14);
  }
  SUBCASE("real coefficients on a symmetric box give conjugate symmetry") {
    TrigPolynomial p(2, {{Vector::Zero(2), 1.0}});
    Matrix b(2, 2);
    b << 1.0, 0.3, 0.0, 1.0;
    QuasicrystalSpec spec{b, {Vector::Zero(2)}, {p}, Box::cube(2, -3, 3)};
    auto mu = generate_quasicrystal(spec);
    Vector xi(2);
    xi << 0.31, -0.77;
    CHECK(std::abs(fourier_eval(mu, -xi) - std::conj(fourier_eval(mu, xi))) < 1e-12);
  }
  SUBCASE("linearity in the coefficients") {
    const Complex c(0.3, -1.2);
    CHECK(std::abs(fourier_eval(two.scaled(c), v1(0.2)) - c * fourier_eval(two, v1(0.2))) < 1e-14);
  }
}
