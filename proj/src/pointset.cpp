#include "qwigner/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace qwigner {

namespace {

// Uniform-cell hash of points; two points within `cell` of each other always
// land in neighbouring cells. Hash collisions only add candidates.
class CellIndex {
 public:
  CellIndex(int d, double cell) : d_(d), cell_(cell), base_(static_cast<std::size_t>(d)) {}

  void insert(std::span<const double> p, std::size_t id) {
    locate(p);
    buckets_[hash(base_.data())].push_back(id);
  }

  template <class F>
  void for_neighbors(std::span<const double> p, F&& visit) {
    locate(p);
    std::vector<std::int64_t> cur(base_);
    std::vector<int> off(static_cast<std::size_t>(d_), -1);
    while (true) {
      for (int i = 0; i < d_; ++i) cur[i] = base_[i] + off[i];
      if (auto it = buckets_.find(hash(cur.data())); it != buckets_.end()) {
        for (std::size_t id : it->second) visit(id);
      }
      int k = 0;
      while (k < d_ && off[k] == 1) off[k++] = -1;
      if (k == d_) break;
      ++off[k];
    }
  }

 private:
  void locate(std::span<const double> p) {
    for (int i = 0; i < d_; ++i) base_[i] = static_cast<std::int64_t>(std::floor(p[i] / cell_));
  }

  std::uint64_t hash(const std::int64_t* c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < d_; ++i) {
      h ^= static_cast<std::uint64_t>(c[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

  int d_;
  double cell_;
  std::vector<std::int64_t> base_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

double cell_size(const std::vector<double>& coords, double tol) {
  double maxabs = 0.0;
  for (double c : coords) maxabs = std::max(maxabs, std::abs(c));
  // keep cell indices well inside int64
  return std::max({tol, maxabs * 1e-15, std::numeric_limits<double>::min()});
}

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

void check_dims(int dim, std::size_t ncoords) {
  if (dim < 1) throw ValidationError("point dimension must be positive");
  if (ncoords % static_cast<std::size_t>(dim) != 0) {
    throw ValidationError("coordinate count is not a multiple of the dimension");
  }
}

}  // namespace

PointSet::PointSet(int dim, std::vector<double> coords, double merge_tol) : d_(dim), tol_(merge_tol) {
  check_dims(dim, coords.size());
  if (!(merge_tol >= 0.0)) throw ValidationError("merge tolerance must be nonnegative");
  for (double c : coords) {
    if (!std::isfinite(c)) throw ValidationError("point coordinates must be finite");
  }
  const std::size_t n = coords.size() / static_cast<std::size_t>(dim);
  const auto du = static_cast<std::size_t>(dim);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto pt = [&](std::size_t i) { return std::span<const double>(coords.data() + i * du, du); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto pa = pt(a), pb = pt(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });

  CellIndex index(dim, cell_size(coords, merge_tol));
  const double tol2 = merge_tol * merge_tol;
  coords_.reserve(coords.size());
  std::size_t kept = 0;
  for (std::size_t i : order) {
    const auto p = pt(i);
    bool duplicate = false;
    index.for_neighbors(p, [&](std::size_t k) {
      if (!duplicate && dist2(p, point(k)) <= tol2) duplicate = true;
    });
    if (duplicate) continue;
    coords_.insert(coords_.end(), p.begin(), p.end());
    index.insert(p, kept++);
  }
}

PointSet PointSet::from_vectors(int dim, const std::vector<Vector>& points, double merge_tol) {
  std::vector<double> coords;
  coords.reserve(points.size() * static_cast<std::size_t>(dim));
  for (const auto& p : points) {
    if (p.size() != dim) throw ValidationError("point dimension mismatch");
    coords.insert(coords.end(), p.data(), p.data() + dim);
  }
  return PointSet(dim, std::move(coords), merge_tol);
}

Vector PointSet::vec(std::size_t i) const {
  const auto p = point(i);
  return Eigen::Map<const Vector>(p.data(), d_);
}

PointSet PointSet::within_radius(double radius) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = point(i);
    double n2 = 0.0;
    for (double c : p) n2 += c * c;
    if (std::sqrt(n2) <= radius) out.insert(out.end(), p.begin(), p.end());
  }
  return PointSet(d_, std::move(out), tol_);
}

bool operator==(const PointSet& a, const PointSet& b) {
  return a.dim() == b.dim() && a.coords() == b.coords();
}

double min_gap_brute_force(const PointSet& s) {
  if (s.size() < 2) throw ValidationError("min_gap needs at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) best = std::min(best, dist2(s.point(i), s.point(j)));
  }
  return std::sqrt(best);
}

double min_gap(const PointSet& s) {
  if (s.size() <= 5000) return min_gap_brute_force(s);
  // Points are sorted lexicographically, hence by first coordinate.
  double best2 = std::numeric_limits<double>::infinity();
  double best = best2;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const auto q = s.point(j);
      if (q[0] - p[0] >= best) break;
      const double d2 = dist2(p, q);
      if (d2 < best2) {
        best2 = d2;
        best = std::sqrt(d2);
      }
    }
  }
  return best;
}

PointSet linear_image(const Matrix& m, const PointSet& s) {
  const int d = s.dim();
  if (m.rows() != d || m.cols() != d) throw ValidationError("matrix/point dimension mismatch");
  std::vector<double> out(s.coords().size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    Eigen::Map<Vector>(out.data() + i * d, d) = m * s.vec(i);
  }
  return PointSet(d, std::move(out), s.merge_tol());
}

PointSet mixed_sum(const Matrix& a, const Matrix& b, const PointSet& s) {
  const int d = s.dim();
  if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d) {
    throw ValidationError("matrix/point dimension mismatch");
  }
  const std::size_t n = s.size();
  std::vector<Vector> ar(n), bs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ar[i] = a * s.vec(i);
    bs[i] = b * s.vec(i);
  }
  std::vector<double> out;
  out.reserve(n * n * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int k = 0; k < d; ++k) out.push_back(ar[i](k) + bs[j](k));
    }
  }
  return PointSet(d, std::move(out), s.merge_tol());
}

PointSet diff_set(const PointSet& s) {
  const Matrix id = Matrix::Identity(s.dim(), s.dim());
  return mixed_sum(id, -id, s);
}

bool accumulation_rule(std::span<const double> min_gaps, double eps) {
  const std::size_t n = min_gaps.size();
  if (n < 3) return false;
  const double g1 = min_gaps[n - 3], g2 = min_gaps[n - 2], g3 = min_gaps[n - 1];
  return g3 < eps && g3 < g2 && g2 < g1;
}

WindowedGapProfile windowed_gap_profile(const PointSet& s, std::span<const double> radii,
                                        double eps) {
  WindowedGapProfile profile;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (k > 0 && !(radii[k] > radii[k - 1])) throw ValidationError("window radii must increase");
    const PointSet window = s.within_radius(radii[k]);
    if (window.size() < 2) throw ValidationError("window holds fewer than two points");
    profile.radii.push_back(radii[k]);
    profile.min_gaps.push_back(min_gap(window));
  }
  profile.accumulation_suspected = accumulation_rule(profile.min_gaps, eps);
  return profile;
}

Containment contained_in(const PointSet& s1, const PointSet& s2, double tol) {
  if (s1.dim() != s2.dim()) throw ValidationError("point set dimension mismatch");
  Containment result;
  if (s1.empty()) return result;
  if (s2.empty()) {
    result.contained = false;
    result.witness = s1.vec(0);
    return result;
  }
  CellIndex index(s2.dim(), std::max(cell_size(s1.coords(), tol), cell_size(s2.coords(), tol)));
  for (std::size_t k = 0; k < s2.size(); ++k) index.insert(s2.point(k), k);
  const double tol2 = tol * tol;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    const auto p = s1.point(i);
    bool found = false;
    index.for_neighbors(p, [&](std::size_t k) {
      if (!found && dist2(p, s2.point(k)) <= tol2) found = true;
    });
    if (!found) {
      result.contained = false;
      result.witness = s1.vec(i);
      return result;
    }
  }
  return result;
}

std::vector<std::size_t> match_points(const PointSet& reps, const std::vector<double>& coords,
                                      double tol) {
  const int d = reps.dim();
  check_dims(d, coords.size());
  const auto du = static_cast<std::size_t>(d);
  const std::size_t n = coords.size() / du;
  std::vector<std::size_t> out(n);
  if (n == 0) return out;
  CellIndex index(d, std::max(cell_size(coords, tol), cell_size(reps.coords(), tol)));
  for (std::size_t k = 0; k < reps.size(); ++k) index.insert(reps.point(k), k);
  const double tol2 = tol * tol;
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> p(coords.data() + i * du, du);
    std::size_t best = reps.size();
    double best2 = std::numeric_limits<double>::infinity();
    index.for_neighbors(p, [&](std::size_t k) {
      const double d2 = dist2(p, reps.point(k));
      if (d2 <= tol2 && (d2 < best2 || (d2 == best2 && k < best))) {
        best2 = d2;
        best = k;
      }
    });
    if (best == reps.size()) throw NumericalError("point has no representative within tolerance");
    out[i] = best;
  }
  return out;
}

bool same_points(const PointSet& a, const PointSet& b, double tol) {
  return contained_in(a, b, tol).contained && contained_in(b, a, tol).contained;
}

}  // namespace qwigner
