#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qwigner/blockmat.hpp"
#include "qwigner/measure.hpp"
#include "qwigner/pointset.hpp"
#include "qwigner/testfn.hpp"

namespace qwigner {

struct Chirp {
  Complex weight;
  Vector freq;
};

struct ChirpAtom {
  Vector x;
  std::vector<Chirp> chirps;
};

/// sum_atoms delta_{x}(x) (x) sum_chirps weight e^{-2 pi i freq . omega}
///
/// Atoms are sorted by x (lexicographic) and chirps within an atom by
/// frequency. x positions and frequencies closer than merge_tol are merged.
class ChirpAtomSum {
 public:
  struct Triple {
    Vector x;
    Complex weight;
    Vector freq;
  };

  ChirpAtomSum() = default;
  ChirpAtomSum(int dim, const std::vector<Triple>& terms, double merge_tol = kDefaultMergeTol);

  int dim() const { return d_; }
  double merge_tol() const { return tol_; }
  const std::vector<ChirpAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  std::size_t chirp_count() const;

  // The (T, mu, nu) that produced the sum, when it came from wigner_t_exact.
  std::optional<BlockMatrix2d> matrix;
  std::optional<AtomicMeasure> mu;
  std::optional<AtomicMeasure> nu;

 private:
  int d_ = 0;
  double tol_ = kDefaultMergeTol;
  std::vector<ChirpAtom> atoms_;
};

/// W_T(mu, nu) of order-zero atomic measures (nu defaults to mu).
///
/// With T^{-1} = (A B ; C D), the pair (r, a_r), (s, b_s) contributes the
/// chirp (|det T|^{-1} a_r conj(b_s), C r + D s) at x = A r + B s.
ChirpAtomSum wigner_t_exact(const BlockMatrix2d& t, const AtomicMeasure& mu,
                            const std::optional<AtomicMeasure>& nu = std::nullopt);

PointSet support_x(const ChirpAtomSum& w);

/// Per atom, sum weight e^{-2 pi i freq . omega}.
std::vector<std::pair<Vector, Complex>> eval_slice(const ChirpAtomSum& w, const Vector& omega);

Complex total_mass(const ChirpAtomSum& w);

/// <W, phi1 (x) phi2> with the conjugate-linear pairing <F, Phi> = int F conj(Phi):
/// sum weight conj(phi1(x)) conj(phi2-hat(-freq)).
Complex pair_chirp_sum(const ChirpAtomSum& w, const SeparableTest& phi1, const SeparableTest& phi2);

/// Sign convention of the pairing coefficients lambda.
///
/// derived:    C(a,a1) C(b,b1) (-1)^{|a|+|b|+|b-b1|} (1/2)^{|a1|+|b1|}
/// as_printed: the same with the extra factor (-1)^{|a-a1|}
///
/// Only `derived` agrees with direct quadrature of the pairing for
/// derivative atoms; both coincide when the measure has order zero.
enum class LambdaSign { derived, as_printed };

double lambda_coefficient(const MultiIndex& alpha, const MultiIndex& alpha1, const MultiIndex& beta,
                          const MultiIndex& beta1, LambdaSign sign = LambdaSign::derived);

/// <W(mu), phi1 (x) phi2> for the classical Wigner transform of an atomic
/// measure of any order, via the finite quadruple sum. p1 supplies
/// conj(phi1)^(gamma) and p2 supplies conj(phi2-hat)^(gamma), both up to order 2N.
Complex pair_wigner_formula(const AtomicMeasure& mu, const DerivativeFamily& p1,
                            const DerivativeFamily& p2, LambdaSign sign = LambdaSign::derived);
Complex pair_wigner_formula(const AtomicMeasure& mu, const SeparableTest& phi1,
                            const SeparableTest& phi2, LambdaSign sign = LambdaSign::derived);

/// {(alpha, beta) : |alpha| = |beta| = N, alpha + beta = gamma}, in lexicographic order of alpha.
std::vector<std::pair<MultiIndex, MultiIndex>> f_gamma_set(const MultiIndex& gamma, int n);

enum class RelationMode { closed_form, quadrature };

struct RelationResult {
  Complex lhs;
  Complex rhs;
  double discrepancy;
};

/// Both sides of <W(mu), Phi> = |det T| <W_T(mu), F2 P_{T0^{-1} T} F2^{-1} Phi>
/// for Phi = phi1 (x) phi2. The left side uses pair_wigner_formula. The right
/// side pairs the exact chirp sum of W_T(mu) against the transformed test
/// function, either in closed form or (d = 1 only) by trapezoidal quadrature
/// of the partial Fourier transform in t and of the pairing in omega.
RelationResult relation_w_wt(const BlockMatrix2d& t, const AtomicMeasure& mu,
                             const SeparableTest& phi1, const SeparableTest& phi2,
                             RelationMode mode = RelationMode::closed_form);

}  // namespace qwigner
