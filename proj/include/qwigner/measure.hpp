#pragma once

#include <vector>

#include "qwigner/common.hpp"
#include "qwigner/pointset.hpp"

namespace qwigner {

/// Axis-aligned box [lo_i, hi_i]; membership is closed with a relative slack
/// of 1e-12 so lattice points on the faces are kept.
struct Box {
  Vector lo;
  Vector hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vector& p) const;
  void validate() const;
  static Box cube(int d, double lo, double hi);
};

/// coeff * delta_position^(order)
struct Atom {
  Vector position;
  MultiIndex order;
  Complex coeff;
};

/// A finite sum of weighted Dirac masses and their derivatives.
///
/// Atoms sharing (position, order) are merged by summing coefficients;
/// positions are identified under the merge tolerance. Atoms whose merged
/// coefficient is below 1e-12 of the largest one are dropped. The atom list is
/// kept sorted by position, then order.
///
/// Pairing convention: delta_r^(alpha) acts by phi -> (-1)^|alpha| phi^(alpha)(r)
/// (with the conjugate on phi for conjugate-linear pairings), so the Fourier
/// transform of delta_r^(alpha) is (2 pi i xi)^alpha e^{-2 pi i r.xi}.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  AtomicMeasure(int dim, std::vector<Atom> atoms, double merge_tol = kDefaultMergeTol);

  int dim() const { return d_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  /// Largest |alpha|; 0 for a pure measure (and for the zero measure).
  int max_order() const { return max_order_; }
  bool is_order_zero() const { return max_order_ == 0; }
  double merge_tol() const { return tol_; }

  PointSet support() const;
  AtomicMeasure scaled(Complex c) const;

 private:
  int d_ = 0;
  double tol_ = kDefaultMergeTol;
  int max_order_ = 0;
  std::vector<Atom> atoms_;
};

struct TrigTerm {
  Vector freq;
  Complex coeff;
};

/// sum_k c_k e^{2 pi i f_k . x}; terms with equal frequencies are merged.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(int dim, std::vector<TrigTerm> terms);

  static TrigPolynomial constant(int dim, Complex c);

  int dim() const { return d_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  Complex operator()(const Vector& x) const;

 private:
  int d_ = 0;
  std::vector<TrigTerm> terms_;
};

/// sum_j P_j sum_{lambda in L + theta_j} delta_lambda, truncated to a box.
struct QuasicrystalSpec {
  Matrix lattice_basis;  // columns generate L
  std::vector<Vector> shifts;
  std::vector<TrigPolynomial> polys;
  Box box;

  int dim() const { return static_cast<int>(lattice_basis.rows()); }
  void validate() const;
};

/// Unit order-0 atoms at basis * k (k integer) inside the box.
AtomicMeasure dirac_comb(const Matrix& basis, const Box& box, std::size_t atom_cap = kDefaultAtomCap);

AtomicMeasure generate_quasicrystal(const QuasicrystalSpec& spec,
                                    std::size_t atom_cap = kDefaultAtomCap);

/// The Fourier transform sum a (2 pi i xi)^alpha e^{-2 pi i r.xi} at xi.
Complex fourier_eval(const AtomicMeasure& mu, const Vector& xi);

}  // namespace qwigner
