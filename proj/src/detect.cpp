#include "qwigner/detect.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

#include "qwigner/wexact.hpp"
#include "qwigner/wgrid.hpp"

namespace qwigner {

namespace {

constexpr double kGrowthLimit = 0.10;

Verdict from_det(const DetInfo& info) {
  switch (info.verdict) {
    case Singularity::nonsingular: return Verdict::pass;
    case Singularity::marginal: return Verdict::marginal;
    case Singularity::singular: return Verdict::fail;
  }
  return Verdict::inconclusive;
}

Condition det_condition(std::string name, const Matrix& m, double scale) {
  const DetInfo info = classify_det(m, scale);
  Condition c{std::move(name), from_det(info), {}, ""};
  c.evidence["det"] = info.det;
  c.evidence["abs_det"] = std::abs(info.det);
  c.evidence["cond"] = info.cond;
  c.evidence["tolerance"] = info.tolerance;
  return c;
}

Vector centroid(const PointSet& s) {
  Vector c = Vector::Zero(s.dim());
  for (std::size_t i = 0; i < s.size(); ++i) c += s.vec(i);
  return s.empty() ? c : Vector(c / static_cast<double>(s.size()));
}

PointSet shifted(const PointSet& s, const Vector& by) {
  std::vector<double> coords = s.coords();
  const auto d = static_cast<std::size_t>(s.dim());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= by(static_cast<Eigen::Index>(i % d));
  return PointSet(s.dim(), std::move(coords), s.merge_tol());
}

// Gap profile over windows of radius rho_max/4, rho_max/2, rho_max about the centroid.
Condition ud_condition(const std::string& name, const PointSet& s) {
  Condition c{name, Verdict::pass, {}, ""};
  c.evidence["points"] = static_cast<double>(s.size());
  if (s.size() < 2) {
    c.note = "fewer than two points";
    return c;
  }
  const PointSet centered = shifted(s, centroid(s));
  double rho = 0.0;
  for (std::size_t i = 0; i < centered.size(); ++i) rho = std::max(rho, centered.vec(i).norm());
  std::vector<double> radii;
  for (double f : {0.25, 0.5, 1.0}) {
    if (centered.within_radius(f * rho).size() >= 2) radii.push_back(f * rho);
  }
  const WindowedGapProfile prof = windowed_gap_profile(centered, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    c.evidence["gap_window_" + std::to_string(i + 1)] = prof.min_gaps[i];
  }
  c.evidence["min_gap"] = prof.min_gaps.back();
  if (prof.accumulation_suspected) {
    c.verdict = Verdict::fail;
    c.note = "gap profile suggests accumulation";
  } else {
    c.note = "finite-window evidence";
  }
  return c;
}

Condition coefficient_condition(const SupportData& data) {
  Condition c{"(i) coefficient sups", Verdict::pass, {}, ""};
  if (data.coeffs.empty()) {
    c.note = "no coefficients";
    return c;
  }
  std::vector<double> row(data.r.size(), 0.0), col(data.s.size(), 0.0);
  for (const auto& [key, v] : data.coeffs) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      c.verdict = Verdict::fail;
      c.note = "non-finite coefficient";
      return c;
    }
    row[key.first] = std::max(row[key.first], std::abs(v));
    col[key.second] = std::max(col[key.second], std::abs(v));
  }
  c.evidence["max_r_sup_s"] = *std::max_element(row.begin(), row.end());
  c.evidence["max_s_sup_r"] = *std::max_element(col.begin(), col.end());

  const Vector cr = centroid(data.r), cs = centroid(data.s);
  double rho = 0.0;
  std::vector<std::pair<double, double>> radius_mag;
  for (const auto& [key, v] : data.coeffs) {
    const double dist = std::max((data.r.vec(key.first) - cr).norm(), (data.s.vec(key.second) - cs).norm());
    rho = std::max(rho, dist);
    radius_mag.emplace_back(dist, std::abs(v));
  }
  auto g = [&](double radius) {
    double m = 0.0;
    for (const auto& [dist, mag] : radius_mag) {
      if (dist <= radius * (1 + 1e-12)) m = std::max(m, mag);
    }
    return m;
  };
  const double g1 = g(0.25 * rho), g2 = g(0.5 * rho), g3 = g(rho);
  c.evidence["sup_window_1"] = g1;
  c.evidence["sup_window_2"] = g2;
  c.evidence["sup_window_3"] = g3;
  if (rho == 0.0) {
    c.note = "single coefficient";
    return c;
  }
  if (g1 == 0.0) {
    c.verdict = Verdict::inconclusive;
    c.note = "innermost window holds no nonzero coefficient";
    return c;
  }
  const double inc1 = g2 / g1 - 1.0, inc2 = g3 / g2 - 1.0;
  c.evidence["growth_1"] = inc1;
  c.evidence["growth_2"] = inc2;
  if (inc1 <= kGrowthLimit && inc2 <= kGrowthLimit) {
    c.note = "bounded growth across nested windows";
  } else {
    c.verdict = Verdict::fail;
    c.note = "sup grows across nested windows";
  }
  return c;
}

const char* kTruncationCaveat = "conditions are evaluated on finite data; sups and gaps of a truncation are always finite";

void add_data_caveats(DetectionReport& rep, const SupportData& data) {
  rep.caveats.emplace_back(kTruncationCaveat);
  if (!data.complete) rep.caveats.emplace_back("R and S are flagged as truncations");
}

}  // namespace

void SupportData::validate() const {
  if (r.dim() != s.dim() && !r.empty() && !s.empty()) throw ValidationError("R and S must have the same dimension");
  for (const auto& [key, v] : coeffs) {
    if (key.first >= r.size() || key.second >= s.size()) {
      throw ValidationError("coefficient key does not pair a point of R with a point of S");
    }
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::marginal: return "marginal";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(Route r) {
  switch (r) {
    case Route::theorem1: return "theorem1";
    case Route::theorem2: return "theorem2";
    case Route::neither: return "neither";
  }
  return "?";
}

bool DetectionReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.verdict == Verdict::pass; });
}

const Condition* DetectionReport::find(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string render_text(const DetectionReport& rep) {
  std::ostringstream out;
  out << "theorem: " << (rep.theorem ? std::to_string(rep.theorem) : std::string("none")) << "\n";
  out << "route: " << to_string(rep.route) << "\n";
  out << "conditions:\n";
  for (const auto& c : rep.conditions) {
    out << "  [" << to_string(c.verdict) << "] " << c.name;
    if (!c.note.empty()) out << " (" << c.note << ")";
    out << "\n";
    for (const auto& [k, v] : c.evidence) out << "      " << k << " = " << v << "\n";
  }
  out << "conclusions:\n";
  if (rep.conclusions.empty()) out << "  (none)\n";
  for (const auto& c : rep.conclusions) {
    out << "  - " << c.claim;
    if (c.verified) out << (*c.verified ? "  [verified]" : "  [VIOLATED]");
    out << "\n";
    if (c.map) {
      for (Eigen::Index i = 0; i < c.map->rows(); ++i) {
        out << "      [";
        for (Eigen::Index j = 0; j < c.map->cols(); ++j) out << (j ? " " : "") << (*c.map)(i, j);
        out << "]\n";
      }
    }
  }
  for (const auto& c : rep.caveats) out << "caveat: " << c << "\n";
  return out.str();
}

Route suggest_route(const BlockMatrix2d& t) {
  if (approx_equal(t.upper_right(), t.lower_right())) return Route::theorem2;
  const BlockMatrix2d inv = invert_blocks(t);
  const bool ii = classify_det(t.upper_right() - t.lower_right(), t.scale()).nonzero();
  const bool iii = classify_det(inv.upper_left() + inv.upper_right(), inv.scale()).nonzero();
  return ii && iii ? Route::theorem1 : Route::neither;
}

DetectionReport check_theorem1(const BlockMatrix2d& t, const SupportData& data) {
  data.validate();
  const BlockMatrix2d inv = invert_blocks(t);
  DetectionReport rep;
  rep.theorem = 1;
  rep.route = suggest_route(t);
  rep.conditions.push_back(ud_condition("R uniformly discrete", data.r));
  rep.conditions.push_back(ud_condition("S uniformly discrete", data.s));
  rep.conditions.push_back(coefficient_condition(data));
  rep.conditions.push_back(det_condition("(ii) det(B0 - D0) != 0", t.upper_right() - t.lower_right(), t.scale()));
  rep.conditions.push_back(det_condition("(iii) det(A + B) != 0", inv.upper_left() + inv.upper_right(), inv.scale()));
  add_data_caveats(rep, data);
  if (rep.route == Route::theorem2) rep.caveats.emplace_back("B0 = D0: this matrix has the Theorem-2 shape");
  if (!rep.all_pass()) return rep;

  rep.conclusions.push_back({"mu and mu-hat are measures with uniformly discrete supports", std::nullopt, std::nullopt});
  if (cohen_form(t)) {
    rep.conclusions.push_back({"supp mu is contained in R", std::nullopt, std::nullopt});
    rep.conclusions.push_back({"supp mu-hat is contained in S", std::nullopt, std::nullopt});
  }
  return rep;
}

std::pair<Matrix, Matrix> theorem2_maps(const BlockMatrix2d& t) {
  const BlockMatrix2d inv = invert_blocks(t);
  const DetInfo a = classify_det(inv.upper_left(), inv.scale());
  const DetInfo b0 = classify_det(t.upper_right(), t.scale());
  if (!a.nonzero() || !b0.nonzero()) throw SingularMatrixError("Theorem-2 maps need invertible A and B0");
  return {inv.upper_left().inverse(), t.upper_right().transpose().inverse()};
}

DetectionReport check_theorem2(const BlockMatrix2d& t, const SupportData& data) {
  data.validate();
  if (!t.invertible()) throw SingularMatrixError("matrix is singular");
  if (!approx_equal(t.upper_right(), t.lower_right())) {
    throw ValidationError("not a Theorem-2 matrix (B0 != D0); check Theorem 1 instead");
  }
  const BlockMatrix2d inv = invert_blocks(t);
  DetectionReport rep;
  rep.theorem = 2;
  rep.route = Route::theorem2;

  Condition shape{"shape B0 = D0", Verdict::pass, {}, ""};
  shape.evidence["frobenius_diff"] = (t.upper_right() - t.lower_right()).norm();
  rep.conditions.push_back(shape);

  // (A B ; C D) = T^{-1} must read (A, -A ; C, D) with det A != 0.
  const SchurReport sr = schur_report(inv);
  if (sr.u_is_minus_y && sr.f_is_h && *sr.u_is_minus_y != *sr.f_is_h) {
    throw PropertyViolation("U = -Y and F = H disagree on the inverse");
  }
  Condition ishape = det_condition("inverse shape (A, -A ; C, D), det A != 0", inv.upper_left(), inv.scale());
  ishape.evidence["frobenius_a_plus_b"] = (inv.upper_left() + inv.upper_right()).norm();
  if (!approx_equal(inv.upper_right(), -inv.upper_left())) ishape.verdict = Verdict::fail;
  rep.conditions.push_back(ishape);

  // Theorem 2 only needs R and S discrete, which finite sets are; the gap profile is kept as evidence.
  Condition rud = ud_condition("R discrete", data.r);
  Condition sud = ud_condition("S discrete", data.s);
  const bool r_ud = rud.verdict == Verdict::pass && data.r.size() >= 2;
  const bool s_ud = sud.verdict == Verdict::pass && data.s.size() >= 2;
  rud.evidence["ud_profile_pass"] = r_ud;
  sud.evidence["ud_profile_pass"] = s_ud;
  rud.verdict = sud.verdict = Verdict::pass;
  rud.note = sud.note = "finite data";
  rep.conditions.push_back(rud);
  rep.conditions.push_back(sud);
  add_data_caveats(rep, data);
  if (!rep.all_pass()) return rep;

  const auto [m, n] = theorem2_maps(t);
  rep.conclusions.push_back({"mu and mu-hat are measures with uniformly discrete supports", std::nullopt, std::nullopt});
  rep.conclusions.push_back({"Lambda - Lambda is contained in M(R)", m, std::nullopt});
  rep.conclusions.push_back({"Sigma - Sigma is contained in N(S)", n, std::nullopt});
  if (r_ud || s_ud) {
    rep.conclusions.push_back(
        {"mu = sum_j P_j sum_{lambda in L + theta_j} delta_lambda with L a lattice and P_j trigonometric polynomials",
         std::nullopt, std::nullopt});
  }
  return rep;
}

FinitenessVerdict finiteness_rule(const SupportData& data) {
  if (!data.complete) return {Finiteness::inconclusive, "inconclusive: truncated data"};
  if (data.r.empty() || data.s.empty()) return {Finiteness::measure_zero, "mu = 0: empty support"};
  return {Finiteness::measure_zero, "mu = 0: R and S are finite"};
}

DifferDiscreteReport verify_differ_discrete(const PointSet& sigma, const PointSet& s, double tol) {
  DifferDiscreteReport rep;
  const PointSet diff = sigma.empty() ? PointSet() : diff_set(sigma);
  const Containment cont = contained_in(diff, s, tol);
  rep.contained = cont.contained;
  rep.witness = cont.witness;
  rep.delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double n = s.vec(i).norm();
    if (n > tol) rep.delta = std::min(rep.delta, n);
  }
  rep.min_gap = sigma.size() < 2 ? std::numeric_limits<double>::infinity() : min_gap(sigma);
  rep.bound_holds = rep.min_gap >= rep.delta - tol;
  if (rep.contained && !rep.bound_holds) {
    throw PropertyViolation("Sigma - Sigma lies in S but min_gap(Sigma) < delta");
  }
  return rep;
}

RationalityResult rational_test(double x, long long max_q, std::string label) {
  if (!std::isfinite(x)) throw ValidationError("rationality test needs a finite number");
  if (max_q < 1) throw ValidationError("denominator bound must be positive");
  RationalityResult res;
  res.label = std::move(label);
  res.value = x;
  const long double lx = x;
  const long double tol = 64.0L * DBL_EPSILON * std::max(1.0L, std::fabs(lx));
  long long h2 = 0, h1 = 1, k2 = 1, k1 = 0;
  long double y = lx;
  res.error = INFINITY;
  for (int it = 0; it < 64; ++it) {
    const long double a = std::floor(y);
    if (std::fabs(a) > 1e18L) break;
    const auto ai = static_cast<long long>(a);
    const long long h = ai * h1 + h2, k = ai * k1 + k2;
    if (k > max_q) break;
    const long double err = std::fabs(lx - static_cast<long double>(h) / static_cast<long double>(k));
    res.p = h;
    res.q = k;
    res.error = static_cast<double>(err);
    if (err <= tol) {
      res.rational = true;
      break;
    }
    const long double frac = y - a;
    if (frac == 0.0L) break;
    y = 1.0L / frac;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
  }
  return res;
}

CounterexampleReport counterexample_scan(double a, double c, int m_max) {
  if (m_max < 10) throw ValidationError("m_max must be at least 10");
  if (!std::isfinite(a) || !std::isfinite(c)) throw ValidationError("a and c must be finite");
  CounterexampleReport rep;
  rep.a = a;
  rep.c = c;
  rep.m_max = m_max;

  auto frac = [](long double v) {
    long double f = v - std::floor(v);
    if (f > 1.0L - 1e-9L) f = 0.0L;
    return static_cast<double>(f);
  };
  std::vector<double> coords;
  coords.reserve(2 * static_cast<std::size_t>(m_max + 1));
  for (int m = 0; m <= m_max; ++m) {
    const double u = frac(static_cast<long double>(m) * a), v = frac(static_cast<long double>(m) * c);
    coords.push_back(u);
    coords.push_back(v);
    if (m > 0 && !rep.period && std::min(u, 1.0 - u) < 1e-9 && std::min(v, 1.0 - v) < 1e-9) rep.period = m;
  }

  std::vector<int> lengths;
  for (long long scale = 1; scale <= m_max; scale *= 10) {
    for (int f : {10, 20, 50}) {
      if (f * scale <= m_max) lengths.push_back(static_cast<int>(f * scale));
    }
  }
  if (lengths.empty() || lengths.back() != m_max) lengths.push_back(m_max);
  for (int n : lengths) {
    const PointSet prefix(2, std::vector<double>(coords.begin(), coords.begin() + 2 * (n + 1)));
    rep.profile.radii.push_back(n);
    rep.profile.min_gaps.push_back(prefix.size() < 2 ? INFINITY : min_gap(prefix));
    if (n == m_max) rep.orbit_size = prefix.size();
  }
  rep.profile.accumulation_suspected = accumulation_rule(rep.profile.min_gaps);

  rep.rationality.push_back(rational_test(a, kRationalDenominatorBound, "a"));
  rep.rationality.push_back(rational_test(c, kRationalDenominatorBound, "c"));
  rep.rationality.push_back(rational_test(std::sqrt(2.0) * a, kRationalDenominatorBound, "sqrt2*a"));
  rep.rationality.push_back(rational_test(std::sqrt(2.0) * c, kRationalDenominatorBound, "sqrt2*c"));
  const bool irrational = !rep.rationality[0].rational || !rep.rationality[1].rational;
  rep.accumulation = rep.profile.accumulation_suspected || (!rep.period && irrational);

  std::ostringstream msg;
  if (rep.accumulation) {
    msg << "fractional parts of m(a, c) accumulate: (a, c) is not a pair of rationals with small denominator, "
           "and sums like Z^2 + M(Lambda) built from it are not uniformly discrete";
  } else if (rep.period) {
    msg << "finite orbit of " << rep.orbit_size << " points (period " << *rep.period << "): no accumulation";
  } else {
    msg << "no accumulation observed up to m = " << m_max;
  }
  rep.conclusion = msg.str();
  return rep;
}

DetectionReport end_to_end_detect(const BlockMatrix2d& t, const AtomicMeasure& mu, const EndToEndOptions& opt) {
  const int d = t.dim();
  if (mu.dim() != d) throw ValidationError("measure dimension does not match the matrix");
  if (mu.size() == 0) throw ValidationError("measure has no atoms");
  const ChirpAtomSum w = wigner_t_exact(t, mu);
  SupportData data;
  data.r = support_x(w);
  data.s = PointSet(d, {}, opt.tol);
  std::vector<std::string> extra;

  if (d == 1) {
    const double width = opt.mollifier_width;
    const double h = width / 4.0;
    const PointSet supp = mu.support();
    const double lo = supp.coords().front() - 6.0 * width, hi = supp.coords().back() + 6.0 * width;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
    const GridField f =
        sample({MollifiedMeasureSignal{mu, width}, Box{Vector::Constant(1, lo), Vector::Constant(1, lo + h * (n - 1))}, {n}});
    const double x_lo = data.r.coords().front() - 2 * h, x_hi = data.r.coords().back() + 2 * h;
    const auto nx = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / h)) + 1;
    const auto nw = static_cast<std::size_t>(std::llround(2 * opt.omega_half_width * 64)) + 1;
    const Axis xa{"x", x_lo, h, nx};
    const Axis wa = Axis::span("omega", -opt.omega_half_width, opt.omega_half_width, nw);
    const GridField grid = wigner_t_grid(t, f, {{xa}, {wa}});
    if (grid.max_abs() > 0.0) {
      const auto peaks = find_peaks(project_max(grid, {1}), opt.peak_threshold, 3.0 * wa.step);
      data.s = peak_points(peaks, opt.tol);
    }
    // c_{r,s}: the exact chirp profile at x = r evaluated at omega = s.
    for (std::size_t j = 0; j < data.s.size(); ++j) {
      const auto slice = eval_slice(w, data.s.vec(j));
      if (slice.size() != data.r.size()) throw NumericalError("support and atom lists disagree");
      for (std::size_t i = 0; i < slice.size(); ++i) {
        if (std::abs(slice[i].second) > 1e-12) data.coeffs[{i, j}] = slice[i].second;
      }
    }
    extra.emplace_back("S is the omega-peak set of a mollified grid realization; chirp sums are almost periodic, "
                       "so S is approximate");
  } else {
    extra.emplace_back("omega-support extraction runs for d = 1 only; S is empty");
  }

  const Route route = suggest_route(t);
  DetectionReport rep = route == Route::theorem2 ? check_theorem2(t, data) : check_theorem1(t, data);
  if (route == Route::neither) {
    rep.theorem = 0;
    rep.caveats.emplace_back("neither hypothesis set is satisfied");
  }
  for (auto& e : extra) rep.caveats.push_back(std::move(e));

  const PointSet supp = mu.support();
  for (auto& c : rep.conclusions) {
    if (c.claim == "supp mu is contained in R") {
      c.verified = contained_in(supp, data.r, opt.tol).contained;
    } else if (c.claim == "Lambda - Lambda is contained in M(R)") {
      const PointSet diff = supp.size() ? diff_set(supp) : supp;
      c.verified = contained_in(diff, linear_image(*c.map, data.r), opt.tol).contained;
    }
  }
  return rep;
}

}  // namespace qwigner
