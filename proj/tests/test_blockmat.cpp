#include <random>

#include "doctest.h"
#include "qwigner/blockmat.hpp"

using namespace qwigner;

namespace {

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }

Matrix random_matrix(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  }
  return m;
}

// Random 2d x 2d with condition number below 1e3.
BlockMatrix2d random_invertible(std::mt19937& rng, int d) {
  while (true) {
    auto t = BlockMatrix2d::from_full(random_matrix(rng, 2 * d));
    if (t.det_info().cond < 1e3) return t;
  }
}

}  // namespace

TEST_CASE("assemble the classical Wigner matrix from 1x1 blocks") {
  auto t = BlockMatrix2d::assemble(m1(1), m1(0.5), m1(1), m1(-0.5));
  CHECK(approx_equal(t, BlockMatrix2d::wigner(1)));
  CHECK(t.det() == doctest::Approx(-1.0));
  CHECK(t.invertible());
}

TEST_CASE("four identity blocks are singular") {
  const Matrix id = Matrix::Identity(2, 2);
  auto t = BlockMatrix2d::assemble(id, id, id, id);
  CHECK_FALSE(t.invertible());
  CHECK(t.det_info().verdict == Singularity::singular);
  CHECK_THROWS_AS(invert_blocks(t), SingularMatrixError);
}

TEST_CASE("block dimension mismatch is rejected") {
  CHECK_THROWS_AS(BlockMatrix2d::assemble(Matrix::Identity(2, 2), m1(1), m1(1), m1(1)), ValidationError);
}

TEST_CASE("inverse of the Wigner and ambiguity matrices") {
  for (int d : {1, 2, 3}) {
    const Matrix id = Matrix::Identity(d, d);
    auto w = invert_blocks(BlockMatrix2d::wigner(d));
    CHECK(approx_equal(w, BlockMatrix2d::assemble(0.5 * id, 0.5 * id, id, -id)));
    auto a = invert_blocks(BlockMatrix2d::ambiguity(d));
    CHECK(approx_equal(a, BlockMatrix2d::assemble(id, -id, 0.5 * id, 0.5 * id)));
    CHECK(approx_equal(BlockMatrix2d::ambiguity(d) * a, BlockMatrix2d::identity(d)));
    CHECK(approx_equal(invert_blocks(BlockMatrix2d::identity(d)), BlockMatrix2d::identity(d)));
  }
}

TEST_CASE("double inversion returns the matrix") {
  std::mt19937 rng(11);
  for (int k = 0; k < 100; ++k) {
    auto t = random_invertible(rng, 1 + k % 3);
    CHECK(approx_equal(invert_blocks(invert_blocks(t)), t));
  }
}

TEST_CASE("Schur report on the identity") {
  auto r = schur_report(BlockMatrix2d::identity(2));
  CHECK(r.y.nonzero());
  CHECK(r.h.nonzero());
  CHECK_FALSE(r.u.nonzero());
  CHECK_FALSE(r.f.nonzero());
  CHECK(r.all_hold());
}

TEST_CASE("Schur equivalences on random well-conditioned matrices") {
  std::mt19937 rng(5);
  for (int k = 0; k < 100; ++k) {
    auto z = random_invertible(rng, 1 + k % 3);
    SchurReport r;
    CHECK_NOTHROW(r = schur_report(z));
    CHECK(r.all_hold());
    // direct determinants agree with the report
    const Matrix zi = z.full().inverse();
    const int d = z.dim();
    CHECK(r.h.det == doctest::Approx(zi.bottomRightCorner(d, d).determinant()).epsilon(1e-8));
  }
}

TEST_CASE("equal right blocks give U = -Y on the inverse side") {
  std::mt19937 rng(9);
  for (int d : {1, 2, 3}) {
    Matrix a0 = random_matrix(rng, d), c0 = random_matrix(rng, d), b0 = random_matrix(rng, d);
    a0 += 3.0 * Matrix::Identity(d, d);
    b0 += 3.0 * Matrix::Identity(d, d);
    auto t = BlockMatrix2d::equal_right_blocks(a0, b0, c0);
    auto ti = invert_blocks(t);
    CHECK(approx_equal(ti.upper_right(), -ti.upper_left()));
    auto r = schur_report(ti);
    REQUIRE(r.u_is_minus_y.has_value());
    CHECK(*r.u_is_minus_y);
    CHECK(*r.f_is_h);
  }
}

TEST_CASE("Cohen form detection") {
  auto w = cohen_form(BlockMatrix2d::wigner(2));
  REQUIRE(w.has_value());
  CHECK(w->e.norm() < 1e-15);
  CHECK_FALSE(cohen_form(BlockMatrix2d::ambiguity(2)).has_value());

  std::mt19937 rng(3);
  for (int d : {1, 2, 3}) {
    const Matrix e = random_matrix(rng, d);
    auto form = cohen_form(BlockMatrix2d::cohen(e));
    REQUIRE(form.has_value());
    CHECK(approx_equal(form->e, e));
    CHECK(approx_equal(form->inverse.upper_left(), 0.5 * Matrix::Identity(d, d) - e));
    CHECK(approx_equal(invert_blocks(BlockMatrix2d::cohen(e)), form->inverse));
    CHECK(std::abs(form->b0_minus_d0.det) == doctest::Approx(1.0));
    CHECK(form->a_plus_b.det == doctest::Approx(1.0));
  }
}

TEST_CASE("dual matrix") {
  SUBCASE("classical Wigner is self-dual") {
    for (int d : {1, 2}) CHECK(approx_equal(dual_matrix(BlockMatrix2d::wigner(d)).l, BlockMatrix2d::wigner(d)));
  }
  SUBCASE("equal right blocks map to (C^t A^t ; -D^t A^t)") {
    std::mt19937 rng(21);
    const int d = 2;
    Matrix a0 = random_matrix(rng, d) + 3.0 * Matrix::Identity(d, d);
    Matrix b0 = random_matrix(rng, d) + 3.0 * Matrix::Identity(d, d);
    auto t = BlockMatrix2d::equal_right_blocks(a0, b0, random_matrix(rng, d));
    auto ti = invert_blocks(t);
    auto l = dual_matrix(t).l;
    CHECK(approx_equal(l.upper_left(), ti.lower_left().transpose()));
    CHECK(approx_equal(l.upper_right(), ti.upper_left().transpose()));
    CHECK(approx_equal(l.lower_left(), -ti.lower_right().transpose()));
    CHECK(approx_equal(l.lower_right(), ti.upper_left().transpose()));
  }
  SUBCASE("Cohen maps to Cohen with E' = -E^t") {
    std::mt19937 rng(8);
    const Matrix e = random_matrix(rng, 2);
    auto form = cohen_form(dual_matrix(BlockMatrix2d::cohen(e)).l);
    REQUIRE(form.has_value());
    CHECK(approx_equal(form->e, -e.transpose()));
  }
  SUBCASE("applying the dual map twice returns T") {
    std::mt19937 rng(17);
    for (int k = 0; k < 100; ++k) {
      auto t = random_invertible(rng, 1 + k % 3);
      auto dd = dual_matrix(dual_matrix(t).l).l;
      CHECK(approx_equal(dd, t, 1e-8));
      CHECK(approx_equal(dual_matrix(t).l * dual_matrix(t).l_inverse, BlockMatrix2d::identity(t.dim()), 1e-8));
    }
  }
  CHECK_THROWS_AS(dual_matrix(BlockMatrix2d::from_full(Matrix::Zero(2, 2))), SingularMatrixError);
}

TEST_CASE("marginal determinants are labeled") {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = 1e-9;
  auto info = classify_det(m, 1.0);
  CHECK(info.verdict == Singularity::marginal);
  CHECK(info.nonzero());
  m(1, 1) = 1e-13;
  CHECK(classify_det(m, 1.0).verdict == Singularity::singular);
}
