#include "qwigner/wgrid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "qwigner/testfn.hpp"

namespace qwigner {

Axis Axis::span(std::string name, double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw ValidationError("axis needs count >= 2 and lo < hi");
  return Axis{std::move(name), lo, (hi - lo) / static_cast<double>(count - 1), count};
}

void Axis::validate() const {
  if (count < 2) throw ValidationError("axis '" + name + "' needs at least two samples");
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(origin)) {
    throw ValidationError("axis '" + name + "' needs a finite positive step");
  }
}

GridField::GridField(std::vector<Axis> axes, std::vector<Complex> values,
                     std::vector<std::pair<std::string, double>> fixed)
    : axes_(std::move(axes)), values_(std::move(values)), fixed_(std::move(fixed)) {
  std::size_t n = 1;
  for (const auto& a : axes_) {
    a.validate();
    n *= a.count;
  }
  if (axes_.empty()) throw ValidationError("grid needs at least one axis");
  if (values_.size() != n) throw ValidationError("grid value count does not match the axes");
}

GridField GridField::zeros(std::vector<Axis> axes) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.count;
  return GridField(std::move(axes), std::vector<Complex>(n, 0.0));
}

std::size_t GridField::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t i = axis + 1; i < axes_.size(); ++i) s *= axes_[i].count;
  return s;
}

std::size_t GridField::flat(const std::vector<std::size_t>& index) const {
  std::size_t f = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) f = f * axes_[i].count + index[i];
  return f;
}

std::vector<std::size_t> GridField::unflat(std::size_t flat) const {
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t i = axes_.size(); i-- > 0;) {
    idx[i] = flat % axes_[i].count;
    flat /= axes_[i].count;
  }
  return idx;
}

Vector GridField::coords(std::size_t flat) const {
  const auto idx = unflat(flat);
  Vector p(static_cast<Eigen::Index>(rank()));
  for (std::size_t i = 0; i < rank(); ++i) p(static_cast<Eigen::Index>(i)) = axes_[i].at(idx[i]);
  return p;
}

Complex GridField::interpolate(const Vector& p) const {
  const std::size_t r = rank();
  if (static_cast<std::size_t>(p.size()) != r) throw ValidationError("interpolation point dimension mismatch");
  std::size_t base = 0;
  double frac[8];
  std::size_t strides[8];
  if (r > 8) throw ValidationError("interpolation supports at most 8 axes");
  for (std::size_t i = 0; i < r; ++i) {
    const Axis& a = axes_[i];
    double u = (p(static_cast<Eigen::Index>(i)) - a.origin) / a.step;
    const double top = static_cast<double>(a.count - 1);
    const double snap = std::round(u);
    if (std::abs(u - snap) < 1e-9) u = snap;
    if (u < 0.0 || u > top) return 0.0;
    auto i0 = static_cast<std::size_t>(std::floor(u));
    if (i0 >= a.count - 1) i0 = a.count - 2;
    frac[i] = u - static_cast<double>(i0);
    strides[i] = stride(i);
    base += i0 * strides[i];
  }
  Complex acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << r); ++corner) {
    double w = 1.0;
    std::size_t off = base;
    for (std::size_t i = 0; i < r; ++i) {
      if (corner >> i & 1) {
        w *= frac[i];
        off += strides[i];
      } else {
        w *= 1.0 - frac[i];
      }
    }
    if (w != 0.0) acc += w * values_[off];
  }
  return acc;
}

double GridField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

unsigned worker_count(unsigned requested) {
  if (const char* env = std::getenv("QWIGNER_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return requested ? std::min<unsigned>(requested, static_cast<unsigned>(n)) : static_cast<unsigned>(n);
  }
  if (requested) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::vector<Axis> signal_axes(const SignalSpec& spec) {
  const int d = spec.dim();
  if (static_cast<int>(spec.samples.size()) != d) throw ValidationError("samples per axis must match the box dimension");
  std::vector<Axis> axes;
  for (int i = 0; i < d; ++i) {
    const std::string name = d == 1 ? "x" : "x" + std::to_string(i + 1);
    if (spec.samples[i] < 2) throw ValidationError("need at least two samples per axis");
    axes.push_back(Axis::span(name, spec.box.lo(i), spec.box.hi(i), spec.samples[i]));
  }
  return axes;
}

}  // namespace

GridField sample(const SignalSpec& spec) {
  spec.box.validate();
  const int d = spec.dim();
  std::vector<Axis> axes = signal_axes(spec);
  GridField out = GridField::zeros(axes);
  auto& vals = out.values();

  if (const auto* g = std::get_if<GaussianSignal>(&spec.variant)) {
    if (g->center.size() != d || !(g->width > 0.0)) throw ValidationError("bad Gaussian signal parameters");
    for (std::size_t k = 0; k < vals.size(); ++k) {
      vals[k] = std::exp(-kPi * (out.coords(k) - g->center).squaredNorm() / (g->width * g->width));
    }
  } else if (const auto* m = std::get_if<ModulatedGaussianSignal>(&spec.variant)) {
    if (m->center.size() != d || m->freq.size() != d || !(m->width > 0.0)) {
      throw ValidationError("bad modulated Gaussian parameters");
    }
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const Vector x = out.coords(k);
      vals[k] = std::exp(-kPi * (x - m->center).squaredNorm() / (m->width * m->width)) *
                std::polar(1.0, 2.0 * kPi * m->freq.dot(x));
    }
  } else {
    const auto& mm = std::get<MollifiedMeasureSignal>(spec.variant);
    if (mm.mu.dim() != d) throw ValidationError("measure/box dimension mismatch");
    if (!(mm.width > 0.0)) throw ValidationError("mollifier width must be positive");
    for (const auto& a : axes) {
      if (mm.width < 2.0 * a.step * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "mollifier width " << mm.width << " is below two grid steps (" << 2.0 * a.step << ")";
        throw NumericalError(msg.str());
      }
    }
    for (const auto& atom : mm.mu.atoms()) {
      for (int i = 0; i < d; ++i) {
        if (atom.position(i) - 5.0 * mm.width < spec.box.lo(i) - 1e-12 ||
            atom.position(i) + 5.0 * mm.width > spec.box.hi(i) + 1e-12) {
          throw ValidationError("signal box must cover every atom plus five mollifier widths");
        }
      }
    }
    const GaussPoly1d psi = GaussPoly1d::normal_density(mm.width);
    int max_order = 0;
    for (const auto& atom : mm.mu.atoms()) {
      for (int k : atom.order) max_order = std::max(max_order, k);
    }
    std::vector<GaussPoly1d> dpsi{psi};
    for (int k = 1; k <= max_order; ++k) dpsi.push_back(dpsi.back().derivative(1));
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const Vector x = out.coords(k);
      Complex s = 0.0;
      for (const auto& atom : mm.mu.atoms()) {
        Complex v = atom.coeff;
        for (int i = 0; i < d; ++i) v *= dpsi[atom.order[i]](x(i) - atom.position(i));
        s += v;
      }
      vals[k] = s;
    }
  }
  return out;
}

namespace {

struct ResolvedCoord {
  std::vector<double> values;
  std::optional<Axis> axis;
  std::string name;
  double fixed = 0.0;
};

ResolvedCoord resolve(const OutputCoord& c, const std::string& default_name) {
  ResolvedCoord r;
  if (const auto* a = std::get_if<Axis>(&c)) {
    a->validate();
    r.axis = *a;
    if (r.axis->name.empty()) r.axis->name = default_name;
    r.name = r.axis->name;
    for (std::size_t i = 0; i < a->count; ++i) r.values.push_back(a->at(i));
  } else {
    r.fixed = std::get<double>(c);
    r.name = default_name;
    r.values.push_back(r.fixed);
  }
  return r;
}

double row_norm(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Bounding box of the samples with |f| above a negligible fraction of the peak.
bool support_box(const GridField& f, Vector& lo, Vector& hi) {
  const double cut = 1e-16 * f.max_abs();
  const auto r = static_cast<Eigen::Index>(f.rank());
  lo = Vector::Constant(r, INFINITY);
  hi = Vector::Constant(r, -INFINITY);
  bool any = false;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (std::abs(f.values()[k]) <= cut) continue;
    const Vector p = f.coords(k);
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
    any = true;
  }
  if (any) {
    // one extra step on each side keeps the interpolation ramps
    for (Eigen::Index i = 0; i < r; ++i) {
      lo(i) -= f.axis(static_cast<std::size_t>(i)).step;
      hi(i) += f.axis(static_cast<std::size_t>(i)).step;
    }
  }
  return any;
}

// t-box such that M t + shift can land in [lo, hi]: exact for d = 1, a bounding box otherwise.
bool t_box(const Matrix& m, const Vector& shift, const Vector& lo, const Vector& hi, Vector& tlo, Vector& thi) {
  const Matrix inv = m.inverse();
  const Vector c = inv * (0.5 * (lo + hi) - shift);
  const Vector r = inv.cwiseAbs() * (0.5 * (hi - lo));
  tlo = c - r;
  thi = c + r;
  return true;
}

// e^{-2 pi i omega t_j} for t_j = j h, j = j0 .. j0 + n - 1, by recurrence with periodic resync.
void phases(double omega, double h, long j0, std::size_t n, std::vector<Complex>& out) {
  out.resize(n);
  const Complex step = std::polar(1.0, -2.0 * kPi * omega * h);
  Complex z;
  for (std::size_t j = 0; j < n; ++j) {
    if (j % 128 == 0) {
      z = std::polar(1.0, -2.0 * kPi * omega * h * static_cast<double>(j0 + static_cast<long>(j)));
    }
    out[j] = z;
    z *= step;
  }
}

}  // namespace

GridField wigner_t_grid(const BlockMatrix2d& t, const GridField& f, const WignerGridSpec& out) {
  const int d = t.dim();
  if (d > 2) throw ValidationError("grid transforms support d <= 2");
  if (static_cast<int>(f.rank()) != d) throw ValidationError("signal rank must equal the matrix block size");
  if (static_cast<int>(out.x.size()) != d || static_cast<int>(out.omega.size()) != d) {
    throw ValidationError("output spec needs d x-coordinates and d omega-coordinates");
  }
  if (!t.invertible()) throw SingularMatrixError("matrix is singular");
  const Matrix& a0 = t.upper_left();
  const Matrix& b0 = t.upper_right();
  const Matrix& c0 = t.lower_left();
  const Matrix& d0 = t.lower_right();
  if (b0.cwiseAbs().maxCoeff() == 0.0) throw ValidationError("B0 = 0 makes the t-integral degenerate");
  const double scale = t.scale();
  const bool b_inv = classify_det(b0, scale).nonzero();
  const bool d_inv = d0.cwiseAbs().maxCoeff() > 0.0 && classify_det(d0, scale).nonzero();
  if (!b_inv && !d_inv) throw NumericalError("t-range unresolvable: neither B0 nor D0 is invertible");

  std::vector<ResolvedCoord> xs, ws;
  for (int i = 0; i < d; ++i) {
    xs.push_back(resolve(out.x[i], d == 1 ? "x" : "x" + std::to_string(i + 1)));
    ws.push_back(resolve(out.omega[i], d == 1 ? "omega" : "omega" + std::to_string(i + 1)));
  }
  std::vector<Axis> axes;
  std::vector<std::pair<std::string, double>> fixed;
  for (const auto* group : {&xs, &ws}) {
    for (const auto& c : *group) {
      if (c.axis) axes.push_back(*c.axis);
      else fixed.emplace_back(c.name, c.fixed);
    }
  }
  if (axes.empty()) throw ValidationError("output needs at least one free axis");
  std::size_t nx = 1, nw = 1;
  for (const auto& c : xs) nx *= c.values.size();
  for (const auto& c : ws) nw *= c.values.size();
  if (nx * nw > kMaxGridEntries) throw ValidationError("output grid exceeds 64^4 entries; fix more coordinates");
  GridField result(axes, std::vector<Complex>(nx * nw, 0.0), fixed);

  Vector lo, hi;
  if (!support_box(f, lo, hi)) return result;

  double hf = INFINITY;
  for (const auto& a : f.axes()) hf = std::min(hf, a.step);
  const double ht = out.t_step > 0.0 ? out.t_step : hf / std::max(row_norm(b0), row_norm(d0));
  const double jac = std::pow(ht, d);

  auto compute_row = [&](std::size_t ix) {
    Vector x(d);
    {
      std::size_t rem = ix;
      for (int i = d - 1; i >= 0; --i) {
        x(i) = xs[i].values[rem % xs[i].values.size()];
        rem /= xs[i].values.size();
      }
    }
    Vector tlo = Vector::Constant(d, -INFINITY), thi = Vector::Constant(d, INFINITY);
    for (auto [m, shift, ok] : {std::tuple{&b0, Vector(a0 * x), b_inv}, std::tuple{&d0, Vector(c0 * x), d_inv}}) {
      if (!ok) continue;
      Vector l, h;
      t_box(*m, shift, lo, hi, l, h);
      tlo = tlo.cwiseMax(l);
      thi = thi.cwiseMin(h);
    }
    std::vector<long> j0(d), n(d);
    for (int i = 0; i < d; ++i) {
      if (!(tlo(i) <= thi(i))) return;
      j0[i] = static_cast<long>(std::floor(tlo(i) / ht)) - 1;
      n[i] = static_cast<long>(std::ceil(thi(i) / ht)) + 1 - j0[i] + 1;
    }
    Complex* dst = result.values().data() + ix * nw;
    std::vector<Complex> ph;
    if (d == 1) {
      std::vector<Complex> g(static_cast<std::size_t>(n[0]));
      Vector tv(1), u(1), v(1);
      for (long j = 0; j < n[0]; ++j) {
        tv(0) = static_cast<double>(j0[0] + j) * ht;
        u.noalias() = a0 * x + b0 * tv;
        v.noalias() = c0 * x + d0 * tv;
        g[j] = f.interpolate(u) * std::conj(f.interpolate(v));
      }
      for (std::size_t k = 0; k < ws[0].values.size(); ++k) {
        phases(ws[0].values[k], ht, j0[0], g.size(), ph);
        Complex s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) s += g[j] * ph[j];
        dst[k] = jac * s;
      }
      return;
    }
    // d = 2: sum over t2 for every omega2, then over t1.
    const auto n1 = static_cast<std::size_t>(n[0]), n2 = static_cast<std::size_t>(n[1]);
    std::vector<Complex> g(n1 * n2);
    Vector tv(2), u(2), v(2);
    for (std::size_t j1 = 0; j1 < n1; ++j1) {
      for (std::size_t j2 = 0; j2 < n2; ++j2) {
        tv << static_cast<double>(j0[0] + static_cast<long>(j1)) * ht,
            static_cast<double>(j0[1] + static_cast<long>(j2)) * ht;
        u.noalias() = a0 * x + b0 * tv;
        v.noalias() = c0 * x + d0 * tv;
        g[j1 * n2 + j2] = f.interpolate(u) * std::conj(f.interpolate(v));
      }
    }
    const auto& w1 = ws[0].values;
    const auto& w2 = ws[1].values;
    std::vector<Complex> partial(n1 * w2.size());
    for (std::size_t k2 = 0; k2 < w2.size(); ++k2) {
      phases(w2[k2], ht, j0[1], n2, ph);
      for (std::size_t j1 = 0; j1 < n1; ++j1) {
        Complex s = 0.0;
        for (std::size_t j2 = 0; j2 < n2; ++j2) s += g[j1 * n2 + j2] * ph[j2];
        partial[j1 * w2.size() + k2] = s;
      }
    }
    for (std::size_t k1 = 0; k1 < w1.size(); ++k1) {
      phases(w1[k1], ht, j0[0], n1, ph);
      for (std::size_t k2 = 0; k2 < w2.size(); ++k2) {
        Complex s = 0.0;
        for (std::size_t j1 = 0; j1 < n1; ++j1) s += partial[j1 * w2.size() + k2] * ph[j1];
        dst[k1 * w2.size() + k2] = jac * s;
      }
    }
  };

  const unsigned workers = std::min<std::size_t>(worker_count(out.threads), nx);
  if (workers <= 1) {
    for (std::size_t ix = 0; ix < nx; ++ix) compute_row(ix);
    return result;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t ix = w; ix < nx; ix += workers) compute_row(ix);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place 1D DFTs of every line along `axis`, with per-sample pre/post factors.
template <class Pre, class Post>
void transform_axis(std::vector<Complex>& values, const GridField& shape, std::size_t axis, int sign, Pre&& pre,
                    Post&& post) {
  const std::size_t n = shape.axis(axis).count;
  const std::size_t stride = shape.stride(axis);
  const std::size_t outer = values.size() / (n * stride);
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
  }
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * n * stride + s;
      for (std::size_t j = 0; j < n; ++j) {
        const Complex v = values[base + j * stride] * pre(j);
        in[j][0] = v.real();
        in[j][1] = v.imag();
      }
      fftw_execute_dft(plan, in, out);
      for (std::size_t k = 0; k < n; ++k) values[base + k * stride] = Complex(out[k][0], out[k][1]) * post(k);
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
}

}  // namespace

GridField partial_fft(const GridField& f, std::size_t first_axis) {
  if (first_axis >= f.rank()) throw ValidationError("partial transform needs at least one transformed axis");
  std::vector<Axis> axes = f.axes();
  std::vector<Complex> values = f.values();
  for (std::size_t a = first_axis; a < f.rank(); ++a) {
    const Axis& ta = f.axis(a);
    const std::size_t n = ta.count;
    const double h = ta.step, t0 = ta.origin;
    const double hw = 1.0 / (static_cast<double>(n) * h);
    const double w0 = -static_cast<double>(n / 2) * hw;
    transform_axis(
        values, f, a, FFTW_FORWARD,
        [&](std::size_t j) { return std::polar(1.0, -2.0 * kPi * w0 * h * static_cast<double>(j)); },
        [&](std::size_t k) { return h * std::polar(1.0, -2.0 * kPi * (w0 + hw * static_cast<double>(k)) * t0); });
    std::string name = ta.name;
    if (name.rfind("t", 0) == 0) name = "omega" + name.substr(1);
    else if (name.rfind("x", 0) == 0) name = "xi" + name.substr(1);
    else name = "freq_" + name;
    axes[a] = Axis{name, w0, hw, n};
  }
  return GridField(std::move(axes), std::move(values), f.fixed());
}

GridField inverse_partial_fft(const GridField& g, std::size_t first_axis, const std::vector<double>& t_origins,
                              const std::vector<std::string>& names) {
  if (first_axis >= g.rank()) throw ValidationError("inverse transform needs at least one transformed axis");
  if (t_origins.size() != g.rank() - first_axis) throw ValidationError("one origin per restored axis is required");
  std::vector<Axis> axes = g.axes();
  std::vector<Complex> values = g.values();
  for (std::size_t a = first_axis; a < g.rank(); ++a) {
    const Axis& wa = g.axis(a);
    const std::size_t n = wa.count;
    const double hw = wa.step, w0 = wa.origin;
    const double h = 1.0 / (static_cast<double>(n) * hw);
    const double t0 = t_origins[a - first_axis];
    transform_axis(
        values, g, a, FFTW_BACKWARD,
        [&](std::size_t k) { return std::polar(1.0, 2.0 * kPi * hw * static_cast<double>(k) * t0); },
        [&](std::size_t j) { return hw * std::polar(1.0, 2.0 * kPi * w0 * (t0 + h * static_cast<double>(j))); });
    const std::string name = a - first_axis < names.size() ? names[a - first_axis] : "t" + std::to_string(a - first_axis + 1);
    axes[a] = Axis{name, t0, h, n};
  }
  return GridField(std::move(axes), std::move(values), g.fixed());
}

GridField fourier_transform_1d(const GridField& f, double pad_half) {
  if (f.rank() != 1) throw ValidationError("grid incompatibility: the duality check needs a 1D signal");
  const Axis& a = f.axis(0);
  const double h = a.step;
  auto n = static_cast<std::size_t>(std::llround(2.0 * pad_half / h));
  n += n % 2;
  const long shift = std::lround((a.origin + pad_half) / h);  // samples of padding before f
  if (shift < 0 || static_cast<std::size_t>(shift) + a.count > n) {
    throw ValidationError("grid incompatibility: the padding box must contain the signal grid");
  }
  std::vector<Complex> padded(n, 0.0);
  std::copy(f.values().begin(), f.values().end(), padded.begin() + shift);
  GridField big({Axis{"x", a.origin - static_cast<double>(shift) * h, h, n}}, std::move(padded));
  return partial_fft(big, 0);
}

DualityReport check_duality(const BlockMatrix2d& t, const GridField& f, const DualitySpec& spec) {
  if (t.dim() != 1 || f.rank() != 1) throw ValidationError("grid incompatibility: the duality check supports d = 1");
  if (spec.count < 2 || !(spec.half_width > 0.0)) throw ValidationError("bad duality grid");
  const Axis xa = Axis::span("x", -spec.half_width, spec.half_width, spec.count);
  const Axis wa = Axis::span("omega", -spec.half_width, spec.half_width, spec.count);

  DualityReport rep;
  rep.lhs = wigner_t_grid(t, f, {{xa}, {wa}});
  const GridField fhat = fourier_transform_1d(f, spec.pad_half);
  const BlockMatrix2d l = dual_matrix(t).l;
  // R(w, x') = W_L(f-hat)(w, x'); the right side at (x, omega) is R(omega, -x) / |det T|.
  const GridField r = wigner_t_grid(l, fhat, {{Axis{"omega", wa.origin, wa.step, wa.count}}, {Axis{"x", xa.origin, xa.step, xa.count}}});
  std::vector<Complex> rhs(rep.lhs.size());
  const double inv_det = 1.0 / std::abs(t.det());
  const std::size_t n = spec.count;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = inv_det * r.values()[j * n + (n - 1 - i)];
  }
  rep.rhs = GridField(rep.lhs.axes(), std::move(rhs));
  const double peak = rep.lhs.max_abs();
  for (std::size_t k = 0; k < rhs.size() || k < rep.lhs.size(); ++k) {
    rep.max_abs = std::max(rep.max_abs, std::abs(rep.lhs.values()[k] - rep.rhs.values()[k]));
  }
  rep.max_rel = peak > 0.0 ? rep.max_abs / peak : (rep.max_abs > 0.0 ? INFINITY : 0.0);
  return rep;
}

std::vector<Peak> find_peaks(const GridField& f, double rel_threshold, double cluster_radius) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) throw ValidationError("peak threshold must lie in (0, 1)");
  const double top = f.max_abs();
  if (top == 0.0) throw ValidationError("cannot find peaks of an all-zero field");
  const std::size_t r = f.rank();
  std::size_t neighbours = 1;
  for (std::size_t i = 0; i < r; ++i) neighbours *= 3;

  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double m = std::abs(f.values()[k]);
    if (m < rel_threshold * top) continue;
    const auto idx = f.unflat(k);
    bool is_max = true;
    for (std::size_t code = 0; code < neighbours && is_max; ++code) {
      std::size_t c = code, off = k;
      bool inside = true, self = true;
      for (std::size_t i = r; i-- > 0;) {
        const int delta = static_cast<int>(c % 3) - 1;
        c /= 3;
        if (delta == 0) continue;
        self = false;
        if ((delta < 0 && idx[i] == 0) || (delta > 0 && idx[i] + 1 == f.axis(i).count)) {
          inside = false;
          break;
        }
        off = delta < 0 ? off - f.stride(i) : off + f.stride(i);
      }
      if (self || !inside) continue;
      if (std::abs(f.values()[off]) > m) is_max = false;
    }
    if (is_max) cand.emplace_back(m, k);
  }
  std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<Peak> kept;
  for (const auto& [m, k] : cand) {
    const Vector p = f.coords(k);
    bool close = false;
    for (const auto& q : kept) {
      if ((q.position - p).norm() <= cluster_radius) {
        close = true;
        break;
      }
    }
    if (!close) kept.push_back({p, m});
  }
  std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) {
    return std::lexicographical_compare(a.position.data(), a.position.data() + a.position.size(), b.position.data(),
                                        b.position.data() + b.position.size());
  });
  return kept;
}

PointSet peak_points(const std::vector<Peak>& peaks, double merge_tol) {
  if (peaks.empty()) return PointSet();
  std::vector<Vector> pts;
  for (const auto& p : peaks) pts.push_back(p.position);
  return PointSet::from_vectors(static_cast<int>(pts[0].size()), pts, merge_tol);
}

GridField project_max(const GridField& f, const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw ValidationError("projection must keep at least one axis");
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= f.rank() || (i > 0 && keep[i] <= keep[i - 1])) {
      throw ValidationError("kept axes must be increasing valid indices");
    }
    axes.push_back(f.axis(keep[i]));
  }
  GridField out = GridField::zeros(axes);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto idx = f.unflat(k);
    std::vector<std::size_t> sub;
    for (std::size_t a : keep) sub.push_back(idx[a]);
    Complex& slot = out.values()[out.flat(sub)];
    slot = std::max(slot.real(), std::abs(f.values()[k]));
  }
  return out;
}

}  // namespace qwigner
