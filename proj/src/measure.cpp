#include "qwigner/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qwigner/blockmat.hpp"

namespace qwigner {

bool Box::contains(const Vector& p) const {
  for (int i = 0; i < dim(); ++i) {
    const double slack = 1e-12 * std::max({1.0, std::abs(lo(i)), std::abs(hi(i))});
    if (p(i) < lo(i) - slack || p(i) > hi(i) + slack) return false;
  }
  return true;
}

void Box::validate() const {
  if (lo.size() == 0 || lo.size() != hi.size()) throw ValidationError("box bounds dimension mismatch");
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(lo(i)) || !std::isfinite(hi(i)) || !(lo(i) <= hi(i))) {
      throw ValidationError("box must be bounded with lo <= hi");
    }
  }
}

Box Box::cube(int d, double lo, double hi) {
  return Box{Vector::Constant(d, lo), Vector::Constant(d, hi)};
}

AtomicMeasure::AtomicMeasure(int dim, std::vector<Atom> atoms, double merge_tol)
    : d_(dim), tol_(merge_tol) {
  if (dim < 1) throw ValidationError("measure dimension must be positive");
  std::vector<double> coords;
  coords.reserve(atoms.size() * static_cast<std::size_t>(dim));
  for (const auto& a : atoms) {
    if (a.position.size() != dim) throw ValidationError("atom position dimension mismatch");
    if (static_cast<int>(a.order.size()) != dim) throw ValidationError("atom order dimension mismatch");
    for (int k : a.order) {
      if (k < 0) throw ValidationError("atom order entries must be nonnegative");
    }
    if (!std::isfinite(a.coeff.real()) || !std::isfinite(a.coeff.imag())) {
      throw ValidationError("atom coefficient must be finite");
    }
    coords.insert(coords.end(), a.position.data(), a.position.data() + dim);
  }
  const PointSet reps(dim, coords, merge_tol);

  const std::vector<std::size_t> rep = match_points(reps, coords, merge_tol);
  std::map<std::pair<std::size_t, MultiIndex>, Complex> merged;
  for (std::size_t i = 0; i < atoms.size(); ++i) merged[{rep[i], atoms[i].order}] += atoms[i].coeff;
  double cmax = 0.0;
  for (const auto& [key, c] : merged) cmax = std::max(cmax, std::abs(c));
  for (const auto& [key, c] : merged) {
    if (std::abs(c) <= 1e-12 * cmax || c == Complex(0.0)) continue;
    atoms_.push_back(Atom{reps.vec(key.first), key.second, c});
    int total = 0;
    for (int k : key.second) total += k;
    max_order_ = std::max(max_order_, total);
  }
}

PointSet AtomicMeasure::support() const {
  std::vector<double> coords;
  for (const auto& a : atoms_) coords.insert(coords.end(), a.position.data(), a.position.data() + d_);
  return PointSet(d_, std::move(coords), tol_);
}

AtomicMeasure AtomicMeasure::scaled(Complex c) const {
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.coeff *= c;
  return AtomicMeasure(d_, std::move(atoms), tol_);
}

TrigPolynomial::TrigPolynomial(int dim, std::vector<TrigTerm> terms) : d_(dim) {
  if (dim < 1) throw ValidationError("polynomial dimension must be positive");
  std::vector<double> coords;
  for (const auto& t : terms) {
    if (t.freq.size() != dim) throw ValidationError("frequency dimension mismatch");
    coords.insert(coords.end(), t.freq.data(), t.freq.data() + dim);
  }
  const PointSet freqs(dim, coords, kDefaultMergeTol);
  const std::vector<std::size_t> rep = match_points(freqs, coords, kDefaultMergeTol);
  std::vector<Complex> sums(freqs.size());
  for (std::size_t i = 0; i < terms.size(); ++i) sums[rep[i]] += terms[i].coeff;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (sums[k] != Complex(0.0)) terms_.push_back({freqs.vec(k), sums[k]});
  }
}

TrigPolynomial TrigPolynomial::constant(int dim, Complex c) {
  return TrigPolynomial(dim, {TrigTerm{Vector::Zero(dim), c}});
}

Complex TrigPolynomial::operator()(const Vector& x) const {
  Complex s = 0.0;
  for (const auto& t : terms_) s += t.coeff * std::polar(1.0, 2.0 * kPi * t.freq.dot(x));
  return s;
}

void QuasicrystalSpec::validate() const {
  const auto d = lattice_basis.rows();
  if (d < 1 || lattice_basis.cols() != d) throw ValidationError("lattice basis must be square");
  if (!classify_det(lattice_basis, lattice_basis.cwiseAbs().maxCoeff()).nonzero()) {
    throw ValidationError("lattice basis is singular");
  }
  if (shifts.size() != polys.size()) throw ValidationError("shifts and polynomials differ in count");
  if (shifts.empty()) throw ValidationError("at least one shift is required");
  for (const auto& s : shifts) {
    if (s.size() != d) throw ValidationError("shift dimension mismatch");
  }
  for (const auto& p : polys) {
    if (p.dim() != d) throw ValidationError("polynomial dimension mismatch");
  }
  box.validate();
  if (box.dim() != d) throw ValidationError("box dimension mismatch");
}

namespace {

// Lattice points basis*k + shift inside the box, in odometer order of k.
template <class F>
void for_lattice_points(const Matrix& basis, const Vector& shift, const Box& box,
                        std::size_t atom_cap, F&& emit) {
  const auto d = basis.rows();
  const Matrix inv = basis.inverse();
  const Vector center = 0.5 * (box.lo + box.hi) - shift;
  const Vector half = 0.5 * (box.hi - box.lo);
  const Vector kc = inv * center;
  const Vector kr = inv.cwiseAbs() * half;
  std::vector<long long> lo(d), hi(d);
  double candidates = 1.0;
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<long long>(std::floor(kc(i) - kr(i) - 1e-9));
    hi[i] = static_cast<long long>(std::ceil(kc(i) + kr(i) + 1e-9));
    candidates *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  if (candidates > 64.0 * static_cast<double>(atom_cap)) {
    std::ostringstream msg;
    msg << "box too large: about " << candidates << " lattice candidates (atom cap " << atom_cap << ")";
    throw ValidationError(msg.str());
  }
  std::vector<long long> k(lo);
  Vector kv(d);
  while (true) {
    for (int i = 0; i < d; ++i) kv(i) = static_cast<double>(k[i]);
    const Vector p = basis * kv + shift;
    if (box.contains(p)) emit(p);
    int i = 0;
    while (i < d && k[i] == hi[i]) {
      k[i] = lo[i];
      ++i;
    }
    if (i == d) break;
    ++k[i];
  }
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    std::ostringstream msg;
    msg << "atom cap exceeded: more than " << cap << " atoms in the box";
    throw ValidationError(msg.str());
  }
}

}  // namespace

AtomicMeasure dirac_comb(const Matrix& basis, const Box& box, std::size_t atom_cap) {
  box.validate();
  const auto d = static_cast<int>(basis.rows());
  if (basis.cols() != d || box.dim() != d) throw ValidationError("basis/box dimension mismatch");
  if (!classify_det(basis, basis.cwiseAbs().maxCoeff()).nonzero()) {
    throw ValidationError("lattice basis is singular");
  }
  std::vector<Atom> atoms;
  const MultiIndex zero(static_cast<std::size_t>(d), 0);
  for_lattice_points(basis, Vector::Zero(d), box, atom_cap, [&](const Vector& p) {
    atoms.push_back({p, zero, 1.0});
    check_cap(atoms.size(), atom_cap);
  });
  return AtomicMeasure(d, std::move(atoms));
}

AtomicMeasure generate_quasicrystal(const QuasicrystalSpec& spec, std::size_t atom_cap) {
  spec.validate();
  const int d = spec.dim();
  const MultiIndex zero(static_cast<std::size_t>(d), 0);
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < spec.shifts.size(); ++j) {
    for_lattice_points(spec.lattice_basis, spec.shifts[j], spec.box, atom_cap, [&](const Vector& p) {
      atoms.push_back({p, zero, spec.polys[j](p)});
      check_cap(atoms.size(), atom_cap);
    });
  }
  return AtomicMeasure(d, std::move(atoms));
}

Complex fourier_eval(const AtomicMeasure& mu, const Vector& xi) {
  if (xi.size() != mu.dim()) throw ValidationError("frequency dimension mismatch");
  Complex s = 0.0;
  for (const auto& a : mu.atoms()) {
    Complex mono = 1.0;
    for (int i = 0; i < mu.dim(); ++i) {
      for (int k = 0; k < a.order[i]; ++k) mono *= Complex(0.0, 2.0 * kPi * xi(i));
    }
    s += a.coeff * mono * std::polar(1.0, -2.0 * kPi * a.position.dot(xi));
  }
  return s;
}

}  // namespace qwigner
