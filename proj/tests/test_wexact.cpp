#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qwigner/wexact.hpp"

using namespace qwigner;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

AtomicMeasure two_point() { return AtomicMeasure(1, {{v1(0), {0}, 1.0}, {v1(1), {0}, 1.0}}); }

AtomicMeasure random_measure(std::mt19937& rng, int d, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i) {
    Vector r(d);
    for (int k = 0; k < d; ++k) r(k) = std::round(8 * u(rng)) / 8;
    atoms.push_back({r, MultiIndex(d, 0), Complex(u(rng), u(rng))});
  }
  return AtomicMeasure(d, atoms);
}

const ChirpAtom* atom_at(const ChirpAtomSum& w, double x) {
  for (const auto& a : w.atoms()) {
    if (std::abs(a.x(0) - x) < 1e-12) return &a;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("single Dirac mass") {
  std::mt19937 rng(2);
  for (const auto& t : {BlockMatrix2d::wigner(1), BlockMatrix2d::ambiguity(1),
                        BlockMatrix2d::cohen(Matrix::Constant(1, 1, 0.7))}) {
    auto w = wigner_t_exact(t, AtomicMeasure(1, {{v1(0), {0}, 1.0}}));
    REQUIRE(w.size() == 1);
    REQUIRE(w.atoms()[0].chirps.size() == 1);
    CHECK(std::abs(w.atoms()[0].chirps[0].weight - 1.0 / std::abs(t.det())) < 1e-15);
    CHECK(w.atoms()[0].chirps[0].freq(0) == 0.0);
    auto slice = eval_slice(w, v1(0.3));
    CHECK(std::abs(slice[0].second - 1.0 / std::abs(t.det())) < 1e-15);
  }
}

TEST_CASE("two-point measure under the Wigner matrix") {
  const auto w = wigner_t_exact(BlockMatrix2d::wigner(1), two_point());
  CHECK(support_x(w) == PointSet(1, {0.0, 0.5, 1.0}));
  const ChirpAtom* mid = atom_at(w, 0.5);
  REQUIRE(mid != nullptr);
  REQUIRE(mid->chirps.size() == 2);
  CHECK(mid->chirps[0].freq(0) == -1.0);
  CHECK(mid->chirps[1].freq(0) == 1.0);
  for (const auto& c : mid->chirps) CHECK(std::abs(c.weight - 1.0) < 1e-15);

  auto value_at = [&](double omega) {
    for (const auto& [x, v] : eval_slice(w, v1(omega))) {
      if (std::abs(x(0) - 0.5) < 1e-12) return v;
    }
    return Complex(NAN);
  };
  CHECK(std::abs(value_at(0.0) - 2.0) < 1e-15);
  CHECK(std::abs(value_at(0.25)) < 1e-15);

  SUBCASE("quadrature of the defining integral with mollified masses") {
    // f = psi_w + psi_w(. - 1); at x = 1/2 the cross terms are 2 cos(2 pi omega) times
    // the mollifier factor exp(-4 pi^2 w^2 omega^2) / (w sqrt(pi)).
    const double wd = 1e-2;
    auto f = [&](double u) { return Complex(oracle::density(u, wd) + oracle::density(u - 1, wd)); };
    for (double omega : {0.0, 0.1, 0.3, 0.6}) {
      const Complex num = oracle::wigner_point(f, 0.5, omega, 1.3, 13000);
      const double factor = std::exp(-4 * kPi * kPi * wd * wd * omega * omega) / (wd * std::sqrt(kPi));
      CHECK(std::abs(num / factor - value_at(omega)) < 1e-6);
    }
  }
}

TEST_CASE("ambiguity of two points is supported on the difference set") {
  auto w = wigner_t_exact(BlockMatrix2d::ambiguity(1), two_point());
  CHECK(support_x(w) == PointSet(1, {-1.0, 0.0, 1.0}));
  auto comb = dirac_comb(Matrix::Identity(1, 1), Box::cube(1, -3, 3));
  auto wc = wigner_t_exact(BlockMatrix2d::ambiguity(1), comb);
  CHECK(support_x(wc) == dirac_comb(Matrix::Identity(1, 1), Box::cube(1, -6, 6)).support());
}

TEST_CASE("support identity against mixed sums") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 2;
    Matrix e(d, d), a0(d, d), c0(d, d), b0(d, d);
    for (int i = 0; i < d * d; ++i) {
      e(i) = u(rng);
      a0(i) = u(rng);
      c0(i) = u(rng);
      b0(i) = u(rng);
    }
    a0 += 3 * Matrix::Identity(d, d);
    b0 += 3 * Matrix::Identity(d, d);
    const std::vector<BlockMatrix2d> ts{BlockMatrix2d::wigner(d), BlockMatrix2d::ambiguity(d), BlockMatrix2d::cohen(e),
                                        BlockMatrix2d::equal_right_blocks(a0, b0, c0)};
    const auto mu = random_measure(rng, d, 10);
    for (const auto& t : ts) {
      const auto ti = invert_blocks(t);
      CHECK(support_x(wigner_t_exact(t, mu)) == mixed_sum(ti.upper_left(), ti.upper_right(), mu.support()));
    }
    // equal right blocks: support is (A0 - C0)^{-1} (supp - supp)
    const auto w = wigner_t_exact(ts[3], mu);
    CHECK(same_points(support_x(w), linear_image((a0 - c0).inverse(), diff_set(mu.support())), 1e-9));
  }
}

TEST_CASE("Hermitian symmetry, sesquilinearity and total mass") {
  std::mt19937 rng(13);
  const auto mu = random_measure(rng, 1, 8);
  const auto t = BlockMatrix2d::wigner(1);
  const auto w = wigner_t_exact(t, mu);
  for (double omega : {-0.8, 0.0, 0.37}) {
    double vmax = 0.0, imax = 0.0;
    for (const auto& [x, v] : eval_slice(w, v1(omega))) {
      vmax = std::max(vmax, std::abs(v));
      imax = std::max(imax, std::abs(v.imag()));
    }
    CHECK(imax <= 1e-13 * vmax);
  }
  Complex s = 0.0;
  for (const auto& a : mu.atoms()) s += a.coeff;
  CHECK(std::abs(total_mass(w) - std::norm(s) / std::abs(t.det())) < 1e-12);

  const Complex c(0.4, 1.1);
  const auto t2 = BlockMatrix2d::ambiguity(1);
  const auto ws = wigner_t_exact(t2, mu.scaled(c));
  const auto w0 = wigner_t_exact(t2, mu);
  CHECK(std::abs(total_mass(ws) - std::norm(c) * total_mass(w0)) < 1e-12);
  const auto wn = wigner_t_exact(t2, mu.scaled(c), mu);
  CHECK(std::abs(total_mass(wn) - c * total_mass(w0)) < 1e-12);
}

TEST_CASE("exact transform rejects derivative atoms and singular matrices") {
  AtomicMeasure d1(1, {{v1(0), {1}, 1.0}});
  CHECK_THROWS_AS(wigner_t_exact(BlockMatrix2d::wigner(1), d1), ValidationError);
  CHECK_THROWS_AS(wigner_t_exact(BlockMatrix2d::from_full(Matrix::Ones(2, 2)), two_point()), SingularMatrixError);
}

TEST_CASE("multi-index sets") {
  using P = std::pair<MultiIndex, MultiIndex>;
  CHECK(f_gamma_set({2}, 1) == std::vector<P>{{{1}, {1}}});
  CHECK(f_gamma_set({1, 1}, 1) == std::vector<P>{{{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}});
  CHECK(f_gamma_set({2, 0}, 1) == std::vector<P>{{{1, 0}, {1, 0}}});
  CHECK_THROWS_AS(f_gamma_set({1}, 1), ValidationError);
  // summing over all |gamma| = 2N counts the pairs with |alpha| = |beta| = N
  for (int d : {1, 2, 3}) {
    for (int n : {1, 2}) {
      std::size_t total = 0, all = 0;
      MultiIndex g(d, 0);
      std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == d - 1) {
          g[i] = left;
          total += f_gamma_set(g, n).size();
          return;
        }
        for (int k = 0; k <= left; ++k) {
          g[i] = k;
          rec(i + 1, left - k);
        }
      };
      rec(0, 2 * n);
      // compositions of N into d parts, squared
      std::size_t comp = 1;
      for (int k = 1; k < d; ++k) comp = comp * (n + k) / k;
      all = comp * comp;
      CHECK(total == all);
    }
  }
}

TEST_CASE("pairing formula") {
  const auto g = SeparableTest::gaussian(1);
  SUBCASE("single Dirac mass with Gaussians gives 1") {
    CHECK(std::abs(pair_wigner_formula(AtomicMeasure(1, {{v1(0), {0}, 1.0}}), g, g) - 1.0) < 1e-15);
  }
  SUBCASE("order zero reduces to the chirp-sum pairing") {
    std::mt19937 rng(31);
    const auto mu = random_measure(rng, 1, 6);
    const SeparableTest p1({GaussPoly1d::modulated(0.2, 1.3, 0.4)});
    const SeparableTest p2({GaussPoly1d::modulated(-0.1, 0.8, -0.3)});
    const Complex a = pair_wigner_formula(mu, p1, p2);
    const Complex b = pair_chirp_sum(wigner_t_exact(BlockMatrix2d::wigner(1), mu), p1, p2);
    CHECK(std::abs(a - b) < 1e-13 * std::max(1.0, std::abs(a)));
    CHECK(std::abs(pair_wigner_formula(mu, p1, p2, LambdaSign::as_printed) - a) < 1e-15);
  }
  SUBCASE("derivative of a Dirac mass against mollified quadrature") {
    const auto f1 = GaussPoly1d::modulated(0.2, 1.0, 0.3);
    const auto f2 = GaussPoly1d::modulated(0.4, 1.0 / std::sqrt(1.3), 0.7);
    const Complex coeff(1.0, 0.0);
    const AtomicMeasure mu(1, {{v1(0), {1}, coeff}});
    auto oracle_at = [&](double w) {
      return oracle::mollified_dirac_derivative_pairing(coeff, w, [&](double x) { return f1(x); },
                                                        [&](double x) { return f2(x); });
    };
    const Complex ref = oracle::richardson(oracle_at, 0.02);
    const SeparableTest p1({f1}), p2({f2});
    const Complex derived = pair_wigner_formula(mu, p1, p2, LambdaSign::derived);
    const Complex printed = pair_wigner_formula(mu, p1, p2, LambdaSign::as_printed);
    CHECK(std::abs(derived - ref) < 1e-4 * std::abs(ref));
    CHECK(std::abs(printed - ref) > 1e-2 * std::abs(ref));
  }
  SUBCASE("missing derivative orders are reported") {
    const AtomicMeasure mu(1, {{v1(0), {1}, 1.0}});
    CHECK_THROWS_AS(pair_wigner_formula(mu, conj_family(g, 1), conj_fourier_family(g, 2)), ValidationError);
  }
}

TEST_CASE("relation between W and W_T") {
  const SeparableTest p1({GaussPoly1d::modulated(0.1, 1.2, 0.25)});
  const SeparableTest p2({GaussPoly1d::modulated(-0.3, 0.9, -0.15)});
  const auto mu = two_point();
  auto r0 = relation_w_wt(BlockMatrix2d::wigner(1), mu, p1, p2);
  CHECK(r0.discrepancy < 1e-10);
  auto ra = relation_w_wt(BlockMatrix2d::ambiguity(1), mu, p1, p2, RelationMode::quadrature);
  CHECK(ra.discrepancy < 1e-6);
  auto rc = relation_w_wt(BlockMatrix2d::ambiguity(1), mu, p1, p2);
  CHECK(rc.discrepancy < 1e-12);
  SUBCASE("a single Dirac mass, any matrix") {
    const AtomicMeasure delta(1, {{v1(0), {0}, 1.0}});
    const Complex expect = std::conj(p1(v1(0)) * p2.fourier()(v1(0)));
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 10; ++k) {
      Matrix m(2, 2);
      m << u(rng) + 2, u(rng), u(rng), u(rng) + 2;
      const auto t = BlockMatrix2d::from_full(m);
      auto r = relation_w_wt(t, delta, p1, p2);
      CHECK(std::abs(r.lhs - expect) < 1e-14);
      CHECK(r.discrepancy < 1e-12);
      CHECK(relation_w_wt(t, delta, p1, p2, RelationMode::quadrature).discrepancy < 1e-6);
    }
  }
  SUBCASE("d = 2 closed form") {
    std::mt19937 rng(43);
    const auto mu2 = random_measure(rng, 2, 5);
    const auto g2 = SeparableTest::gaussian(2);
    CHECK(relation_w_wt(BlockMatrix2d::ambiguity(2), mu2, g2, g2).discrepancy < 1e-10);
    CHECK_THROWS_AS(relation_w_wt(BlockMatrix2d::ambiguity(2), mu2, g2, g2, RelationMode::quadrature), ValidationError);
  }
}
