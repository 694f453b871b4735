#include "qwigner/blockmat.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qwigner {

const char* to_string(Singularity s) {
  switch (s) {
    case Singularity::nonsingular: return "nonsingular";
    case Singularity::marginal: return "marginal";
    case Singularity::singular: return "singular";
  }
  return "?";
}

DetInfo classify_det(const Matrix& m, double scale) {
  DetInfo info;
  const auto n = m.rows();
  info.det = m.determinant();
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  info.cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  info.tolerance = kDetTolFactor * std::pow(scale, static_cast<double>(n));
  if (std::abs(info.det) <= info.tolerance || info.cond >= kSingularCond) {
    info.verdict = Singularity::singular;
  } else if (info.cond >= kMarginalCond) {
    info.verdict = Singularity::marginal;
  } else {
    info.verdict = Singularity::nonsingular;
  }
  return info;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double ref = std::max({1.0, a.norm(), b.norm()});
  return (a - b).norm() <= tol * ref;
}

BlockMatrix2d::BlockMatrix2d(int d, Matrix ul, Matrix ur, Matrix ll, Matrix lr)
    : d_(d), ul_(std::move(ul)), ur_(std::move(ur)), ll_(std::move(ll)), lr_(std::move(lr)) {
  const Matrix f = full();
  scale_ = f.cwiseAbs().maxCoeff();
  det_ = classify_det(f, scale_);
}

BlockMatrix2d BlockMatrix2d::assemble(Matrix upper_left, Matrix upper_right, Matrix lower_left,
                                      Matrix lower_right) {
  const auto d = upper_left.rows();
  auto ok = [d](const Matrix& m) { return m.rows() == d && m.cols() == d; };
  if (d < 1 || !ok(upper_left) || !ok(upper_right) || !ok(lower_left) || !ok(lower_right)) {
    std::ostringstream msg;
    msg << "block dimension mismatch: " << upper_left.rows() << "x" << upper_left.cols() << ", "
        << upper_right.rows() << "x" << upper_right.cols() << ", " << lower_left.rows() << "x"
        << lower_left.cols() << ", " << lower_right.rows() << "x" << lower_right.cols();
    throw ValidationError(msg.str());
  }
  for (const Matrix* m : {&upper_left, &upper_right, &lower_left, &lower_right}) {
    if (!m->allFinite()) throw ValidationError("matrix entries must be finite");
  }
  return BlockMatrix2d(static_cast<int>(d), std::move(upper_left), std::move(upper_right),
                       std::move(lower_left), std::move(lower_right));
}

BlockMatrix2d BlockMatrix2d::from_full(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw ValidationError("full matrix must be 2d x 2d");
  }
  const auto d = m.rows() / 2;
  return assemble(m.topLeftCorner(d, d), m.topRightCorner(d, d), m.bottomLeftCorner(d, d),
                  m.bottomRightCorner(d, d));
}

BlockMatrix2d BlockMatrix2d::identity(int d) {
  const Matrix id = Matrix::Identity(d, d);
  return assemble(id, Matrix::Zero(d, d), Matrix::Zero(d, d), id);
}

BlockMatrix2d BlockMatrix2d::wigner(int d) {
  const Matrix id = Matrix::Identity(d, d);
  return assemble(id, 0.5 * id, id, -0.5 * id);
}

BlockMatrix2d BlockMatrix2d::ambiguity(int d) {
  const Matrix id = Matrix::Identity(d, d);
  return assemble(0.5 * id, id, -0.5 * id, id);
}

BlockMatrix2d BlockMatrix2d::cohen(const Matrix& e) {
  const auto d = e.rows();
  if (e.cols() != d) throw ValidationError("Cohen kernel matrix E must be square");
  const Matrix id = Matrix::Identity(d, d);
  return assemble(id, e + 0.5 * id, id, e - 0.5 * id);
}

BlockMatrix2d BlockMatrix2d::equal_right_blocks(const Matrix& a0, const Matrix& b0,
                                                const Matrix& c0) {
  return assemble(a0, b0, c0, b0);
}

Matrix BlockMatrix2d::full() const {
  Matrix m(2 * d_, 2 * d_);
  m << ul_, ur_, ll_, lr_;
  return m;
}

BlockMatrix2d BlockMatrix2d::transposed() const {
  return assemble(ul_.transpose(), ll_.transpose(), ur_.transpose(), lr_.transpose());
}

BlockMatrix2d operator*(const BlockMatrix2d& a, const BlockMatrix2d& b) {
  if (a.dim() != b.dim()) throw ValidationError("block dimension mismatch in product");
  return BlockMatrix2d::from_full(a.full() * b.full());
}

bool approx_equal(const BlockMatrix2d& a, const BlockMatrix2d& b, double tol) {
  return a.dim() == b.dim() && approx_equal(a.full(), b.full(), tol);
}

BlockMatrix2d invert_blocks(const BlockMatrix2d& t) {
  if (!t.invertible()) {
    std::ostringstream msg;
    msg << "singular matrix: |det| = " << std::abs(t.det()) << ", tolerance "
        << t.det_info().tolerance << ", cond " << t.det_info().cond;
    throw SingularMatrixError(msg.str());
  }
  return BlockMatrix2d::from_full(t.full().partialPivLu().inverse());
}

bool SchurReport::all_hold() const {
  const bool b = !u_is_minus_y.has_value() || *u_is_minus_y == f_is_h.value_or(false);
  return y_h && w_e && u_f && v_g && b;
}

namespace {

// Violated only when one side is clearly nonzero and the other clearly zero;
// marginal determinants never count as a violation.
bool equivalent(const DetInfo& a, const DetInfo& b) {
  const bool a_marg = a.verdict == Singularity::marginal;
  const bool b_marg = b.verdict == Singularity::marginal;
  if (a_marg || b_marg) return true;
  return a.nonzero() == b.nonzero();
}

}  // namespace

SchurReport schur_report(const BlockMatrix2d& z) {
  const BlockMatrix2d zi = invert_blocks(z);
  const double sz = z.scale();
  const double si = zi.scale();
  SchurReport r;
  r.y = classify_det(z.upper_left(), sz);
  r.u = classify_det(z.upper_right(), sz);
  r.v = classify_det(z.lower_left(), sz);
  r.w = classify_det(z.lower_right(), sz);
  r.e = classify_det(zi.upper_left(), si);
  r.f = classify_det(zi.upper_right(), si);
  r.g = classify_det(zi.lower_left(), si);
  r.h = classify_det(zi.lower_right(), si);
  r.y_h = equivalent(r.y, r.h);
  r.w_e = equivalent(r.w, r.e);
  r.u_f = equivalent(r.u, r.f);
  r.v_g = equivalent(r.v, r.g);
  if (r.y.nonzero()) {
    r.u_is_minus_y = approx_equal(z.upper_right(), -z.upper_left());
    r.f_is_h = approx_equal(zi.upper_right(), zi.lower_right());
  }
  if (!r.all_hold()) {
    std::ostringstream msg;
    msg << "block determinant equivalence violated (cond Z = " << z.det_info().cond
        << ", cond Y = " << r.y.cond << ", cond H = " << r.h.cond << ", cond U = " << r.u.cond
        << ", cond F = " << r.f.cond << ")";
    throw PropertyViolation(msg.str());
  }
  return r;
}

std::optional<CohenForm> cohen_form(const BlockMatrix2d& t) {
  const int d = t.dim();
  const Matrix id = Matrix::Identity(d, d);
  if (!approx_equal(t.upper_left(), id) || !approx_equal(t.lower_left(), id)) return std::nullopt;
  const Matrix e = 0.5 * (t.upper_right() + t.lower_right());
  if (!approx_equal(t.upper_right(), e + 0.5 * id) || !approx_equal(t.lower_right(), e - 0.5 * id)) {
    return std::nullopt;
  }
  CohenForm form{e, BlockMatrix2d::assemble(0.5 * id - e, 0.5 * id + e, id, -id), {}, {}};
  if (!approx_equal(t * form.inverse, BlockMatrix2d::identity(d))) {
    throw PropertyViolation("closed-form Cohen inverse does not invert T");
  }
  form.b0_minus_d0 = classify_det(t.upper_right() - t.lower_right(), t.scale());
  form.a_plus_b = classify_det(form.inverse.upper_left() + form.inverse.upper_right(),
                               form.inverse.scale());
  if (!form.b0_minus_d0.nonzero() || !form.a_plus_b.nonzero()) {
    throw PropertyViolation("Cohen-shaped matrix with det(B0 - D0) = 0 or det(A + B) = 0");
  }
  return form;
}

DualMatrix dual_matrix(const BlockMatrix2d& t) {
  const BlockMatrix2d ti = invert_blocks(t);
  // (Id 0; 0 -Id)(A^t C^t; B^t D^t)(0 Id; Id 0) = (C^t A^t; -D^t -B^t)
  const BlockMatrix2d l =
      BlockMatrix2d::assemble(ti.lower_left().transpose(), ti.upper_left().transpose(),
                              -ti.lower_right().transpose(), -ti.upper_right().transpose());
  const BlockMatrix2d l_inv =
      BlockMatrix2d::assemble(t.upper_right().transpose(), -t.lower_right().transpose(),
                              t.upper_left().transpose(), -t.lower_left().transpose());
  if (!approx_equal(l * l_inv, BlockMatrix2d::identity(t.dim()), 1e-9 * std::max(1.0, t.det_info().cond))) {
    throw PropertyViolation("closed-form inverse of the dual matrix does not invert L");
  }
  return {l, l_inv};
}

}  // namespace qwigner
