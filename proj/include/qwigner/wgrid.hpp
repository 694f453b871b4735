#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qwigner/blockmat.hpp"
#include "qwigner/measure.hpp"
#include "qwigner/pointset.hpp"

namespace qwigner {

struct Axis {
  std::string name;
  double origin = 0.0;
  double step = 1.0;
  std::size_t count = 2;

  double at(std::size_t i) const { return origin + step * static_cast<double>(i); }
  double last() const { return at(count - 1); }
  /// count points from lo to hi inclusive.
  static Axis span(std::string name, double lo, double hi, std::size_t count);
  void validate() const;
};

/// Complex samples on a uniform rectangular grid, row-major (last axis fastest).
///
/// `fixed` records coordinates that were held constant when the field was cut
/// from a larger one (name, value).
class GridField {
 public:
  GridField() = default;
  GridField(std::vector<Axis> axes, std::vector<Complex> values,
            std::vector<std::pair<std::string, double>> fixed = {});
  static GridField zeros(std::vector<Axis> axes);

  std::size_t rank() const { return axes_.size(); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t i) const { return axes_[i]; }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  const std::vector<std::pair<std::string, double>>& fixed() const { return fixed_; }
  std::size_t size() const { return values_.size(); }

  std::size_t stride(std::size_t axis) const;
  std::size_t flat(const std::vector<std::size_t>& index) const;
  std::vector<std::size_t> unflat(std::size_t flat) const;
  Vector coords(std::size_t flat) const;

  /// Multilinear interpolation; zero outside the sampled box.
  Complex interpolate(const Vector& p) const;
  double max_abs() const;

 private:
  std::vector<Axis> axes_;
  std::vector<Complex> values_;
  std::vector<std::pair<std::string, double>> fixed_;
};

/// exp(-pi |x - center|^2 / width^2)
struct GaussianSignal {
  Vector center;
  double width = 1.0;
};

/// GaussianSignal times e^{2 pi i freq . x}
struct ModulatedGaussianSignal {
  Vector center;
  double width = 1.0;
  Vector freq;
};

/// sum a_r^alpha psi_w^(alpha)(x - r), psi_w the normalized Gaussian with
/// standard deviation w in each coordinate.
struct MollifiedMeasureSignal {
  AtomicMeasure mu;
  double width = 0.05;
};

struct SignalSpec {
  std::variant<GaussianSignal, ModulatedGaussianSignal, MollifiedMeasureSignal> variant;
  Box box;
  std::vector<std::size_t> samples;  // per axis, >= 2

  int dim() const { return box.dim(); }
};

/// Throws ValidationError for malformed specs (box not covering the atoms
/// plus five mollifier widths) and NumericalError when the mollifier is
/// narrower than two grid steps.
GridField sample(const SignalSpec& spec);

/// One output coordinate of a W_T grid: sampled along an axis or held fixed.
using OutputCoord = std::variant<Axis, double>;

struct WignerGridSpec {
  std::vector<OutputCoord> x;      // d entries
  std::vector<OutputCoord> omega;  // d entries
  /// t-step; 0 picks (smallest input step) / max(row sums of |B0|, |D0|),
  /// which keeps A0 x + B0 t on the input grid for the standard matrices.
  double t_step = 0.0;
  /// Worker threads; 0 reads QWIGNER_THREADS, else hardware concurrency.
  unsigned threads = 0;
};

/// Largest number of output samples wigner_t_grid materializes.
inline constexpr std::size_t kMaxGridEntries = 64ull * 64ull * 64ull * 64ull;

/// W_T(f)(x, omega) = int e^{-2 pi i t . omega} f(A0 x + B0 t) conj f(C0 x + D0 t) dt
/// on the requested grid (free x axes first, then free omega axes). d <= 2.
GridField wigner_t_grid(const BlockMatrix2d& t, const GridField& f, const WignerGridSpec& out);

/// Continuous-normalized DFT over axes [first_axis, rank):
/// G(x, omega) = int F(x, t) e^{-2 pi i omega . t} dt. Each transformed axis of
/// n points with step h becomes omega_k = (k - floor(n/2)) / (n h).
GridField partial_fft(const GridField& f, std::size_t first_axis);
/// Inverse of partial_fft; t_origins gives the origin of each restored axis.
GridField inverse_partial_fft(const GridField& g, std::size_t first_axis, const std::vector<double>& t_origins,
                              const std::vector<std::string>& names = {});

struct DualityReport {
  double max_abs = 0.0;
  double max_rel = 0.0;  // max |lhs - rhs| / max |lhs|
  GridField lhs;
  GridField rhs;
};

struct DualitySpec {
  double half_width = 2.0;  // shared grid [-a, a]^2
  std::size_t count = 129;  // points per axis
  double pad_half = 32.0;   // zero-padding box for the Fourier transform of f
};

/// Compares W_T(f)(x, omega) with |det T|^{-1} W_L(f-hat)(omega, -x), d = 1.
GridField fourier_transform_1d(const GridField& f, double pad_half);
DualityReport check_duality(const BlockMatrix2d& t, const GridField& f, const DualitySpec& spec = {});

struct Peak {
  Vector position;
  double magnitude;
};

/// Local maxima of |F| above rel_threshold * max|F|, merged greedily (largest
/// first) within cluster_radius, returned in lexicographic position order.
std::vector<Peak> find_peaks(const GridField& f, double rel_threshold, double cluster_radius);
PointSet peak_points(const std::vector<Peak>& peaks, double merge_tol = kDefaultMergeTol);

/// max of |F| over all axes not listed in keep (kept axes stay in order).
GridField project_max(const GridField& f, const std::vector<std::size_t>& keep);

/// Number of workers honoring QWIGNER_THREADS.
unsigned worker_count(unsigned requested = 0);

}  // namespace qwigner
