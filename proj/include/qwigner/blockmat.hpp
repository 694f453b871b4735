#pragma once

#include <optional>
#include <string>

#include "qwigner/common.hpp"

namespace qwigner {

enum class Singularity { nonsingular, marginal, singular };

const char* to_string(Singularity s);

// Determinant of a square matrix together with the numbers that decided
// whether it counts as nonzero.
struct DetInfo {
  double det = 0.0;
  double cond = 0.0;       // sigma_max / sigma_min, +inf when sigma_min == 0
  double tolerance = 0.0;  // kDetTolFactor * scale^n
  Singularity verdict = Singularity::singular;

  bool nonzero() const { return verdict != Singularity::singular; }
};

// |det| > tolerance and cond < kSingularCond; marginal when cond >= kMarginalCond.
// `scale` is the entry scale of the matrix the block was taken from.
DetInfo classify_det(const Matrix& m, double scale);

// ||a - b||_F <= tol * max(1, ||a||_F, ||b||_F)
bool approx_equal(const Matrix& a, const Matrix& b, double tol = kMatrixTol);

/// A 2d x 2d real matrix kept as four d x d blocks
///
///     ( upper_left  upper_right )
///     ( lower_left  lower_right )
///
/// For a matrix-Wigner matrix T these are A0, B0, C0, D0; for T^{-1} they are
/// A, B, C, D. The assembled determinant is computed once at construction.
class BlockMatrix2d {
 public:
  /// Throws ValidationError unless all four blocks are square with equal size.
  static BlockMatrix2d assemble(Matrix upper_left, Matrix upper_right, Matrix lower_left,
                                Matrix lower_right);
  static BlockMatrix2d from_full(const Matrix& m);

  static BlockMatrix2d identity(int d);
  /// (Id, Id/2 ; Id, -Id/2), the classical Wigner transform.
  static BlockMatrix2d wigner(int d);
  /// (Id/2, Id ; -Id/2, Id), the ambiguity function.
  static BlockMatrix2d ambiguity(int d);
  /// (Id, E + Id/2 ; Id, E - Id/2), the Cohen-class matrices.
  static BlockMatrix2d cohen(const Matrix& e);
  /// (A0, B0 ; C0, B0), the shape with equal right-hand blocks.
  static BlockMatrix2d equal_right_blocks(const Matrix& a0, const Matrix& b0, const Matrix& c0);

  int dim() const { return d_; }
  const Matrix& upper_left() const { return ul_; }
  const Matrix& upper_right() const { return ur_; }
  const Matrix& lower_left() const { return ll_; }
  const Matrix& lower_right() const { return lr_; }

  Matrix full() const;
  double det() const { return det_.det; }
  const DetInfo& det_info() const { return det_; }
  /// Largest absolute entry.
  double scale() const { return scale_; }
  bool invertible() const { return det_.nonzero(); }

  BlockMatrix2d transposed() const;

 private:
  BlockMatrix2d(int d, Matrix ul, Matrix ur, Matrix ll, Matrix lr);

  int d_;
  Matrix ul_, ur_, ll_, lr_;
  double scale_;
  DetInfo det_;
};

BlockMatrix2d operator*(const BlockMatrix2d& a, const BlockMatrix2d& b);
bool approx_equal(const BlockMatrix2d& a, const BlockMatrix2d& b, double tol = kMatrixTol);

/// Throws SingularMatrixError when the determinant classifies as zero.
BlockMatrix2d invert_blocks(const BlockMatrix2d& t);

/// Determinant facts about Z = (Y U ; V W) and Z^{-1} = (E F ; G H).
///
/// Holds the eight block determinants and checks the four equivalences
/// detY!=0 <=> detH!=0, detW!=0 <=> detE!=0, detU!=0 <=> detF!=0,
/// detV!=0 <=> detG!=0, and, when det Y != 0, U = -Y <=> F = H.
struct SchurReport {
  DetInfo y, u, v, w;  // blocks of Z
  DetInfo e, f, g, h;  // blocks of Z^{-1}
  bool y_h = true, w_e = true, u_f = true, v_g = true;  // biimplication holds
  std::optional<bool> u_is_minus_y;  // set only when det Y != 0
  std::optional<bool> f_is_h;
  bool all_hold() const;
};

/// Throws SingularMatrixError for singular Z and PropertyViolation when one
/// side of an equivalence is clearly nonzero and the other clearly zero.
SchurReport schur_report(const BlockMatrix2d& z);

struct CohenForm {
  Matrix e;
  /// ( Id/2 - E, Id/2 + E ; Id, -Id ), built from E.
  BlockMatrix2d inverse;
  DetInfo b0_minus_d0;
  DetInfo a_plus_b;
};

/// E when T = (Id, E + Id/2 ; Id, E - Id/2) within kMatrixTol, nullopt otherwise.
std::optional<CohenForm> cohen_form(const BlockMatrix2d& t);

struct DualMatrix {
  BlockMatrix2d l;
  BlockMatrix2d l_inverse;
};

/// L = (Id 0 ; 0 -Id) (T^{-1})^t (0 Id ; Id 0), the matrix of the Fourier
/// dual transform. Also checks L^{-1} = (B0^t, -D0^t ; A0^t, -C0^t).
DualMatrix dual_matrix(const BlockMatrix2d& t);

}  // namespace qwigner
