#include "qwigner/wexact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <tuple>

namespace qwigner {

namespace {

std::vector<double> flatten(const std::vector<Vector>& pts, int d) {
  std::vector<double> out;
  out.reserve(pts.size() * static_cast<std::size_t>(d));
  for (const auto& p : pts) out.insert(out.end(), p.data(), p.data() + d);
  return out;
}

int total(const MultiIndex& m) { return std::accumulate(m.begin(), m.end(), 0); }

// Visits every multi-index k with 0 <= k <= bound componentwise.
template <class F>
void for_each_below(const MultiIndex& bound, F&& visit) {
  MultiIndex k(bound.size(), 0);
  while (true) {
    visit(k);
    std::size_t i = 0;
    while (i < k.size() && k[i] == bound[i]) k[i++] = 0;
    if (i == k.size()) return;
    ++k[i];
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

ChirpAtomSum::ChirpAtomSum(int dim, const std::vector<Triple>& terms, double merge_tol)
    : d_(dim), tol_(merge_tol) {
  if (dim < 1) throw ValidationError("chirp sum dimension must be positive");
  std::vector<Vector> xs;
  xs.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.x.size() != dim || t.freq.size() != dim) throw ValidationError("chirp term dimension mismatch");
    xs.push_back(t.x);
  }
  const std::vector<double> xcoords = flatten(xs, dim);
  const PointSet reps(dim, xcoords, merge_tol);
  const std::vector<std::size_t> owner = match_points(reps, xcoords, merge_tol);

  std::vector<std::vector<std::size_t>> members(reps.size());
  for (std::size_t i = 0; i < terms.size(); ++i) members[owner[i]].push_back(i);
  for (std::size_t k = 0; k < reps.size(); ++k) {
    std::vector<Vector> fs;
    for (std::size_t i : members[k]) fs.push_back(terms[i].freq);
    const std::vector<double> fcoords = flatten(fs, dim);
    const PointSet freqs(dim, fcoords, merge_tol);
    const std::vector<std::size_t> slot = match_points(freqs, fcoords, merge_tol);
    std::vector<Complex> sums(freqs.size(), 0.0);
    for (std::size_t j = 0; j < members[k].size(); ++j) sums[slot[j]] += terms[members[k][j]].weight;
    ChirpAtom atom{reps.vec(k), {}};
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      if (sums[j] != Complex(0.0)) atom.chirps.push_back({sums[j], freqs.vec(j)});
    }
    if (!atom.chirps.empty()) atoms_.push_back(std::move(atom));
  }
}

std::size_t ChirpAtomSum::chirp_count() const {
  std::size_t n = 0;
  for (const auto& a : atoms_) n += a.chirps.size();
  return n;
}

ChirpAtomSum wigner_t_exact(const BlockMatrix2d& t, const AtomicMeasure& mu,
                            const std::optional<AtomicMeasure>& nu) {
  const int d = t.dim();
  const AtomicMeasure& other = nu ? *nu : mu;
  if (mu.dim() != d || other.dim() != d) throw ValidationError("measure/matrix dimension mismatch");
  if (!mu.is_order_zero() || !other.is_order_zero()) {
    throw ValidationError("exact transform needs order-zero atoms (no derivatives of Dirac masses)");
  }
  const BlockMatrix2d ti = invert_blocks(t);
  const double jac = 1.0 / std::abs(t.det());

  std::vector<Vector> ar, cr, bs, ds;
  for (const auto& a : mu.atoms()) {
    ar.push_back(ti.upper_left() * a.position);
    cr.push_back(ti.lower_left() * a.position);
  }
  for (const auto& b : other.atoms()) {
    bs.push_back(ti.upper_right() * b.position);
    ds.push_back(ti.lower_right() * b.position);
  }
  std::vector<ChirpAtomSum::Triple> terms;
  terms.reserve(ar.size() * bs.size());
  Vector x(d), f(d);
  for (std::size_t i = 0; i < ar.size(); ++i) {
    for (std::size_t j = 0; j < bs.size(); ++j) {
      // same floating-point sum as mixed_sum, so the supports agree bit for bit
      for (int k = 0; k < d; ++k) {
        x(k) = ar[i](k) + bs[j](k);
        f(k) = cr[i](k) + ds[j](k);
      }
      terms.push_back({x, jac * mu.atoms()[i].coeff * std::conj(other.atoms()[j].coeff), f});
    }
  }
  ChirpAtomSum w(d, terms, mu.merge_tol());
  w.matrix = t;
  w.mu = mu;
  if (nu) w.nu = *nu;
  return w;
}

PointSet support_x(const ChirpAtomSum& w) {
  std::vector<double> coords;
  for (const auto& a : w.atoms()) coords.insert(coords.end(), a.x.data(), a.x.data() + w.dim());
  return PointSet(w.dim(), std::move(coords), w.merge_tol());
}

std::vector<std::pair<Vector, Complex>> eval_slice(const ChirpAtomSum& w, const Vector& omega) {
  if (omega.size() != w.dim()) throw ValidationError("frequency dimension mismatch");
  std::vector<std::pair<Vector, Complex>> out;
  out.reserve(w.size());
  for (const auto& a : w.atoms()) {
    Complex v = 0.0;
    for (const auto& c : a.chirps) v += c.weight * std::polar(1.0, -2.0 * kPi * c.freq.dot(omega));
    out.emplace_back(a.x, v);
  }
  return out;
}

Complex total_mass(const ChirpAtomSum& w) {
  Complex s = 0.0;
  for (const auto& a : w.atoms()) {
    for (const auto& c : a.chirps) s += c.weight;
  }
  return s;
}

Complex pair_chirp_sum(const ChirpAtomSum& w, const SeparableTest& phi1, const SeparableTest& phi2) {
  if (phi1.dim() != w.dim() || phi2.dim() != w.dim()) throw ValidationError("test function dimension mismatch");
  const SeparableTest phi2_hat = phi2.fourier();
  Complex s = 0.0;
  for (const auto& a : w.atoms()) {
    const Complex p1 = std::conj(phi1(a.x));
    for (const auto& c : a.chirps) s += c.weight * p1 * std::conj(phi2_hat(-c.freq));
  }
  return s;
}

double lambda_coefficient(const MultiIndex& alpha, const MultiIndex& alpha1, const MultiIndex& beta,
                          const MultiIndex& beta1, LambdaSign sign) {
  const std::size_t d = alpha.size();
  if (alpha1.size() != d || beta.size() != d || beta1.size() != d) {
    throw ValidationError("multi-index dimension mismatch");
  }
  double c = 1.0;
  int exponent = total(alpha) + total(beta);
  int halves = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (alpha1[i] < 0 || alpha1[i] > alpha[i] || beta1[i] < 0 || beta1[i] > beta[i]) {
      throw ValidationError("lambda needs alpha1 <= alpha and beta1 <= beta");
    }
    c *= binom(alpha[i], alpha1[i]) * binom(beta[i], beta1[i]);
    exponent += beta[i] - beta1[i];
    if (sign == LambdaSign::as_printed) exponent += alpha[i] - alpha1[i];
    halves += alpha1[i] + beta1[i];
  }
  return (exponent % 2 ? -c : c) * std::ldexp(1.0, -halves);
}

Complex pair_wigner_formula(const AtomicMeasure& mu, const DerivativeFamily& p1,
                            const DerivativeFamily& p2, LambdaSign sign) {
  const int d = mu.dim();
  if (p1.dim() != d || p2.dim() != d) throw ValidationError("test function dimension mismatch");
  const int need = 2 * mu.max_order();
  if (p1.max_order() < need || p2.max_order() < need) {
    throw ValidationError("missing derivative order: the pairing needs derivatives up to order " +
                          std::to_string(need));
  }
  Complex sum = 0.0;
  MultiIndex g1(static_cast<std::size_t>(d)), g2(static_cast<std::size_t>(d));
  for (const auto& ar : mu.atoms()) {      // a_r^beta
    for (const auto& as : mu.atoms()) {    // a_s^alpha
      const Vector mid = 0.5 * (ar.position + as.position);
      const Vector diff = as.position - ar.position;
      const Complex coeff = ar.coeff * std::conj(as.coeff);
      const MultiIndex& alpha = as.order;
      const MultiIndex& beta = ar.order;
      for_each_below(alpha, [&](const MultiIndex& alpha1) {
        for_each_below(beta, [&](const MultiIndex& beta1) {
          for (int i = 0; i < d; ++i) {
            g1[i] = alpha1[i] + beta1[i];
            g2[i] = alpha[i] - alpha1[i] + beta[i] - beta1[i];
          }
          sum += lambda_coefficient(alpha, alpha1, beta, beta1, sign) * coeff * p1.eval(g1, mid) *
                 p2.eval(g2, diff);
        });
      });
    }
  }
  return sum;
}

Complex pair_wigner_formula(const AtomicMeasure& mu, const SeparableTest& phi1,
                            const SeparableTest& phi2, LambdaSign sign) {
  const int n = 2 * mu.max_order();
  return pair_wigner_formula(mu, conj_family(phi1, n), conj_fourier_family(phi2, n), sign);
}

std::vector<std::pair<MultiIndex, MultiIndex>> f_gamma_set(const MultiIndex& gamma, int n) {
  for (int g : gamma) {
    if (g < 0) throw ValidationError("multi-index entries must be nonnegative");
  }
  if (gamma.empty() || total(gamma) != 2 * n) throw ValidationError("|gamma| must equal 2N");
  std::vector<std::pair<MultiIndex, MultiIndex>> out;
  for_each_below(gamma, [&](const MultiIndex& alpha) {
    if (total(alpha) != n) return;
    MultiIndex beta(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) beta[i] = gamma[i] - alpha[i];
    out.emplace_back(alpha, beta);
  });
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Right-hand side pairing for one chirp in closed form.
Complex rhs_closed(const Matrix& m, const Vector& x, const Vector& f, const SeparableTest& phi1,
                   const SeparableTest& phi2_check) {
  const int d = static_cast<int>(x.size());
  const Vector u = m.topLeftCorner(d, d) * x + m.topRightCorner(d, d) * f;
  const Vector v = m.bottomLeftCorner(d, d) * x + m.bottomRightCorner(d, d) * f;
  return std::conj(phi1(u) * phi2_check(v));
}

// Trapezoid nodes c + k h covering [lo, hi].
std::vector<double> nodes(double lo, double hi, double h) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + static_cast<double>(k) * h;
  return out;
}

// d = 1: Psi(omega) = int g(t) e^{-2 pi i omega t} dt with g(t) = phi1(m11 x + m12 t) phi2check(m21 x + m22 t),
// then sum over chirps of weight * int e^{-2 pi i f omega} conj(Psi(omega)) d omega.
Complex rhs_quadrature_atom(const Matrix& m, const ChirpAtom& atom, const GaussPoly1d& phi1,
                            const GaussPoly1d& phi2_check) {
  const double x = atom.x(0);
  const double m11 = m(0, 0), m12 = m(0, 1), m21 = m(1, 0), m22 = m(1, 1);
  // Envelope of g in t, used only to place the quadrature windows.
  std::optional<GaussPoly1d> env;
  for (auto [slope, shift, g] : {std::tuple{m12, m11 * x, &phi1}, std::tuple{m22, m21 * x, &phi2_check}}) {
    if (slope == 0.0) continue;
    const GaussPoly1d part = g->affine(slope, shift);
    env = env ? *env * part : part;
  }
  if (!env) throw NumericalError("degenerate change of variables in the test-function transform");
  const GaussPoly1d env_hat = env->fourier();
  const double tc = env->center(), tr = env->radius(1e-18);
  const double wc = env_hat.center(), wr = env_hat.radius(1e-18);
  double fmax = 0.0;
  for (const auto& c : atom.chirps) fmax = std::max(fmax, std::abs(c.freq(0)));

  const double ht = 1.0 / (4.0 * (std::abs(wc) + wr));
  const double hw = 1.0 / (4.0 * (fmax + std::abs(tc) + tr));
  const std::vector<double> ts = nodes(tc - tr, tc + tr, ht);
  const std::vector<double> ws = nodes(wc - wr, wc + wr, hw);
  std::vector<Complex> g(ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) {
    g[j] = phi1(m11 * x + m12 * ts[j]) * phi2_check(m21 * x + m22 * ts[j]);
  }
  std::vector<Complex> psi(ws.size());
  for (std::size_t k = 0; k < ws.size(); ++k) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j) s += g[j] * std::polar(1.0, -2.0 * kPi * ws[k] * ts[j]);
    psi[k] = ht * s;
  }
  Complex total_value = 0.0;
  for (const auto& c : atom.chirps) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < ws.size(); ++k) {
      s += std::polar(1.0, -2.0 * kPi * c.freq(0) * ws[k]) * std::conj(psi[k]);
    }
    total_value += c.weight * hw * s;
  }
  return total_value;
}

}  // namespace

RelationResult relation_w_wt(const BlockMatrix2d& t, const AtomicMeasure& mu,
                             const SeparableTest& phi1, const SeparableTest& phi2, RelationMode mode) {
  const int d = t.dim();
  if (phi1.dim() != d || phi2.dim() != d || mu.dim() != d) throw ValidationError("dimension mismatch");
  if (mode == RelationMode::quadrature && d != 1) {
    throw ValidationError("quadrature mode of the W/W_T relation supports d = 1 only");
  }
  RelationResult r{};
  r.lhs = pair_wigner_formula(mu, phi1, phi2);
  const Matrix m = invert_blocks(BlockMatrix2d::wigner(d)).full() * t.full();
  const SeparableTest phi2_check = phi2.inverse_fourier();
  const ChirpAtomSum w = wigner_t_exact(t, mu);
  Complex s = 0.0;
  for (const auto& atom : w.atoms()) {
    if (mode == RelationMode::closed_form) {
      for (const auto& c : atom.chirps) s += c.weight * rhs_closed(m, atom.x, c.freq, phi1, phi2_check);
    } else {
      s += rhs_quadrature_atom(m, atom, phi1.factors()[0], phi2_check.factors()[0]);
    }
  }
  r.rhs = std::abs(t.det()) * s;
  r.discrepancy = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace qwigner
