#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qwigner/common.hpp"

namespace qwigner {

/// Finite point set in R^d, stored flat (point i occupies coords[i*d, i*d+d)).
///
/// Construction normalizes: points within merge_tol of an earlier point (in
/// lexicographic order) are dropped, and the survivors are kept sorted
/// lexicographically, so equal inputs always produce identical sets.
class PointSet {
 public:
  PointSet() = default;
  PointSet(int dim, std::vector<double> coords, double merge_tol = kDefaultMergeTol);

  static PointSet from_vectors(int dim, const std::vector<Vector>& points,
                               double merge_tol = kDefaultMergeTol);

  int dim() const { return d_; }
  std::size_t size() const { return d_ ? coords_.size() / static_cast<std::size_t>(d_) : 0; }
  bool empty() const { return coords_.empty(); }
  double merge_tol() const { return tol_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  Vector vec(std::size_t i) const;
  const std::vector<double>& coords() const { return coords_; }

  /// Points with Euclidean norm <= radius.
  PointSet within_radius(double radius) const;

 private:
  int d_ = 0;
  double tol_ = kDefaultMergeTol;
  std::vector<double> coords_;
};

bool operator==(const PointSet& a, const PointSet& b);

/// Exact minimal pairwise Euclidean distance. Throws ValidationError for
/// fewer than two points. Uses a sweep over the first coordinate above 5000
/// points, brute force otherwise.
double min_gap(const PointSet& s);
double min_gap_brute_force(const PointSet& s);

/// {M p : p in S}, re-normalized under the merge tolerance of S.
PointSet linear_image(const Matrix& m, const PointSet& s);

/// {A r + B s : r, s in S}.
PointSet mixed_sum(const Matrix& a, const Matrix& b, const PointSet& s);

/// S - S.
PointSet diff_set(const PointSet& s);

/// Minimal gaps of a point set restricted to growing windows.
struct WindowedGapProfile {
  std::vector<double> radii;
  std::vector<double> min_gaps;
  bool accumulation_suspected = false;
};

/// Accumulation heuristic: the last gap is below eps and the last three gaps
/// strictly decrease. Evidence only; a finite window proves nothing.
bool accumulation_rule(std::span<const double> min_gaps, double eps = kAccumulationEps);

/// Radii must be strictly increasing; a window holding fewer than two points
/// throws ValidationError.
WindowedGapProfile windowed_gap_profile(const PointSet& s, std::span<const double> radii,
                                        double eps = kAccumulationEps);

struct Containment {
  bool contained = true;
  std::optional<Vector> witness;  // first point of s1 with no partner in s2
};

/// Every point of s1 lies within tol of some point of s2.
Containment contained_in(const PointSet& s1, const PointSet& s2, double tol);

/// For each query point (flat coords, same dimension), the index of the
/// closest point of reps within tol. Throws NumericalError when none is.
std::vector<std::size_t> match_points(const PointSet& reps, const std::vector<double>& coords,
                                      double tol);

/// Mutual containment within tol.
bool same_points(const PointSet& a, const PointSet& b, double tol);

}  // namespace qwigner
