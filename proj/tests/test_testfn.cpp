#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qwigner/testfn.hpp"

using namespace qwigner;

TEST_CASE("the unit Gaussian is its own Fourier transform") {
  const auto g = GaussPoly1d::gaussian();
  const auto gh = g.fourier();
  for (double x : {-1.3, 0.0, 0.4, 2.0}) CHECK(std::abs(gh(x) - g(x)) < 1e-15);
}

TEST_CASE("closed-form transforms agree with quadrature") {
  const std::vector<GaussPoly1d> family{
      GaussPoly1d::gaussian(0.3, 0.8), GaussPoly1d::modulated(-0.2, 1.1, 0.7), GaussPoly1d::hermite(2, 0.1, 0.9),
      GaussPoly1d::hermite(3), GaussPoly1d::normal_density(0.4).derivative(1)};
  for (const auto& f : family) {
    const auto fh = f.fourier();
    const auto fi = f.inverse_fourier();
    for (double xi : {-1.1, -0.3, 0.0, 0.45, 1.7}) {
      const auto ref = oracle::fourier([&](double x) { return f(x); }, xi);
      CHECK(std::abs(fh(xi) - ref) < 1e-10);
      CHECK(std::abs(fi(-xi) - ref) < 1e-10);
    }
  }
}

TEST_CASE("derivatives against central differences") {
  const auto f = GaussPoly1d::modulated(0.2, 0.9, -0.4) * GaussPoly1d::hermite(1);
  const double h = 1e-4;
  for (double x : {-0.7, 0.0, 0.3}) {
    const Complex fd = (f(x + h) - f(x - h)) / (2 * h);
    CHECK(std::abs(f.derivative(1)(x) - fd) < 1e-6);
    const Complex fd2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    CHECK(std::abs(f.derivative(2)(x) - fd2) < 1e-4);
  }
}

TEST_CASE("conjugation, reflection and affine substitution") {
  const auto f = GaussPoly1d::modulated(0.5, 1.3, 0.8).derivative(2);
  for (double x : {-0.9, 0.2, 1.4}) {
    CHECK(std::abs(f.conj()(x) - std::conj(f(x))) < 1e-14);
    CHECK(std::abs(f.reflected()(x) - f(-x)) < 1e-14);
    CHECK(std::abs(f.affine(-1.7, 0.3)(x) - f(-1.7 * x + 0.3)) < 1e-13);
  }
  CHECK(GaussPoly1d::gaussian(1.5, 0.5).center() == doctest::Approx(1.5));
  CHECK_THROWS_AS(GaussPoly1d({1.0}, 1.0, 0.0, 0.0), ValidationError);
}

TEST_CASE("separable tests and derivative families") {
  SeparableTest phi({GaussPoly1d::gaussian(0.2), GaussPoly1d::modulated(0, 1, 0.5)});
  Vector x(2);
  x << 0.3, -0.6;
  CHECK(std::abs(phi(x) - GaussPoly1d::gaussian(0.2)(0.3) * GaussPoly1d::modulated(0, 1, 0.5)(-0.6)) < 1e-15);
  DerivativeFamily fam = conj_family(phi, 2);
  CHECK(std::abs(fam.eval({1, 1}, x) - std::conj(phi.derivative({1, 1})(x))) < 1e-14);
  CHECK_THROWS_AS(fam.eval({2, 1}, x), ValidationError);
  DerivativeFamily hat = conj_fourier_family(phi, 0);
  CHECK(std::abs(hat.eval({0, 0}, x) - std::conj(phi.fourier()(x))) < 1e-15);
}
