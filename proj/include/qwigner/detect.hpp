#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwigner/blockmat.hpp"
#include "qwigner/measure.hpp"
#include "qwigner/pointset.hpp"

namespace qwigner {

/// W_T(mu) = sum c_{r,s} delta_{(r,s)} over R x S, as finite data.
/// Coefficient keys are (index into R, index into S).
struct SupportData {
  PointSet r;
  PointSet s;
  std::map<std::pair<std::size_t, std::size_t>, Complex> coeffs;
  /// The caller asserts R and S are complete, not truncations.
  bool complete = false;

  void validate() const;
};

enum class Verdict { pass, fail, marginal, inconclusive };
const char* to_string(Verdict v);

struct Condition {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  std::map<std::string, double> evidence;
  std::string note;
};

struct Conclusion {
  std::string claim;
  std::optional<Matrix> map;
  /// Set when the claim was checked against known data.
  std::optional<bool> verified;
};

enum class Route { theorem1, theorem2, neither };
const char* to_string(Route r);

struct DetectionReport {
  int theorem = 0;  // 0 when neither theorem applies
  std::vector<Condition> conditions;
  std::vector<Conclusion> conclusions;
  std::vector<std::string> caveats;
  Route route = Route::neither;

  bool all_pass() const;
  const Condition* find(const std::string& name) const;
};

std::string render_text(const DetectionReport& rep);

/// Theorem-2 shape (B0 = D0 within kMatrixTol) wins; otherwise Theorem 1 when
/// det(B0 - D0) and det(A + B) are nonzero; otherwise neither.
Route suggest_route(const BlockMatrix2d& t);

/// Throws SingularMatrixError for singular T.
DetectionReport check_theorem1(const BlockMatrix2d& t, const SupportData& data);
/// Throws ValidationError when B0 != D0 (use Theorem 1) and
/// SingularMatrixError for singular T.
DetectionReport check_theorem2(const BlockMatrix2d& t, const SupportData& data);

/// M = A^{-1} and N = (B0^t)^{-1} for a Theorem-2 matrix.
std::pair<Matrix, Matrix> theorem2_maps(const BlockMatrix2d& t);

enum class Finiteness { measure_zero, inconclusive };
struct FinitenessVerdict {
  Finiteness verdict = Finiteness::inconclusive;
  std::string reason;
};
FinitenessVerdict finiteness_rule(const SupportData& data);

struct DifferDiscreteReport {
  bool contained = false;
  std::optional<Vector> witness;  // point of Sigma - Sigma missing from S
  double delta = 0.0;             // min |u| over nonzero u in S
  double min_gap = 0.0;           // of Sigma; +inf below two points
  bool bound_holds = false;       // min_gap >= delta, meaningful when contained
};

/// Throws PropertyViolation if the containment holds but the gap bound fails.
DifferDiscreteReport verify_differ_discrete(const PointSet& sigma, const PointSet& s,
                                            double tol = kDefaultMergeTol);

struct RationalityResult {
  std::string label;
  double value = 0.0;
  bool rational = false;
  long long p = 0;
  long long q = 1;
  double error = 0.0;  // |value - p/q| of the best convergent found
};

inline constexpr long long kRationalDenominatorBound = 1000000;

/// Some continued-fraction convergent p/q with q <= max_q lies within
/// 64 eps max(1, |x|) of x.
RationalityResult rational_test(double x, long long max_q = kRationalDenominatorBound, std::string label = "");

struct CounterexampleReport {
  double a = 0.0;
  double c = 0.0;
  int m_max = 0;
  /// radii hold the orbit lengths n; min_gaps the gap of {m (a,c) mod 1 : m <= n}.
  WindowedGapProfile profile;
  std::size_t orbit_size = 0;
  std::optional<int> period;
  std::vector<RationalityResult> rationality;  // a, c, sqrt2 a, sqrt2 c
  bool accumulation = false;
  std::string conclusion;
};

/// Fractional parts of m (a, c), 0 <= m <= m_max. Requires m_max >= 10.
CounterexampleReport counterexample_scan(double a, double c, int m_max);

struct EndToEndOptions {
  double mollifier_width = 0.05;
  double omega_half_width = 1.0;
  double peak_threshold = 0.5;
  double tol = kDefaultMergeTol;
};

/// W = wigner_t_exact(T, mu); R = support_x(W); S from omega-peaks of a grid
/// transform of a mollified mu (d = 1 only); then the matching theorem check
/// with its containment claims tested against supp mu.
DetectionReport end_to_end_detect(const BlockMatrix2d& t, const AtomicMeasure& mu, const EndToEndOptions& opt = {});

}  // namespace qwigner
