#include "qwigner/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qwigner::io {

namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double dflt) {
  return j.contains(key) ? number(j.at(key), key) : dflt;
}

Complex complex_of(const json& j) {
  return {number(need(j, "re"), "re"), j.contains("im") ? number(j.at("im"), "im") : 0.0};
}

// Points given as [[..], ..] or, for d = 1, as plain numbers.
std::vector<Vector> points_of(const json& j, int& d) {
  if (!j.is_array()) throw ValidationError("point list must be an array");
  std::vector<Vector> out;
  for (const auto& p : j) {
    Vector v = p.is_number() ? Vector::Constant(1, p.get<double>()) : vector_from_json(p);
    if (d == 0) d = static_cast<int>(v.size());
    if (v.size() != d) throw ValidationError("points have inconsistent dimensions");
    out.push_back(std::move(v));
  }
  return out;
}

json complex_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

void check_dim(const json& j, int d) {
  if (j.contains("d") && j.at("d").get<int>() != d) throw ValidationError("field 'd' disagrees with the data");
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

Matrix matrix_from_json(const json& j) {
  if (j.is_number()) return Matrix::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw ValidationError("matrix rows must be arrays");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<Eigen::Index>(row.size()) != cols || cols == 0) throw ValidationError("ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = number(row[static_cast<std::size_t>(k)], "matrix entry");
  }
  if (!m.allFinite()) throw ValidationError("matrix entries must be finite");
  return m;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

Vector vector_from_json(const json& j) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ValidationError("vector must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], "vector entry");
  if (!v.allFinite()) throw ValidationError("vector entries must be finite");
  return v;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

BlockMatrix2d block_matrix_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("matrix file must hold a JSON object");
  if (j.contains("preset")) {
    const auto name = j.at("preset").get<std::string>();
    if (name == "cohen") return BlockMatrix2d::cohen(matrix_from_json(need(j, "E")));
    const int d = j.value("d", 1);
    if (d < 1) throw ValidationError("d must be positive");
    if (name == "wigner") return BlockMatrix2d::wigner(d);
    if (name == "ambiguity") return BlockMatrix2d::ambiguity(d);
    if (name == "identity") return BlockMatrix2d::identity(d);
    throw ValidationError("unknown matrix preset '" + name + "'");
  }
  BlockMatrix2d t = j.contains("full") ? BlockMatrix2d::from_full(matrix_from_json(j.at("full")))
                                       : BlockMatrix2d::assemble(matrix_from_json(need(j, "A0")), matrix_from_json(need(j, "B0")),
                                                                 matrix_from_json(need(j, "C0")), matrix_from_json(need(j, "D0")));
  check_dim(j, t.dim());
  return t;
}

json to_json(const BlockMatrix2d& t) {
  return {{"d", t.dim()},
          {"A0", to_json(t.upper_left())},
          {"B0", to_json(t.upper_right())},
          {"C0", to_json(t.lower_left())},
          {"D0", to_json(t.lower_right())}};
}

Box box_from_json(const json& j) {
  Box b{vector_from_json(need(j, "lo")), vector_from_json(need(j, "hi"))};
  if (b.lo.size() != b.hi.size()) throw ValidationError("box corners differ in dimension");
  b.validate();
  return b;
}

json to_json(const Box& b) { return {{"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}}; }

QuasicrystalSpec quasicrystal_from_json(const json& j) {
  QuasicrystalSpec spec;
  spec.lattice_basis = matrix_from_json(need(j, "lattice"));
  const int d = static_cast<int>(spec.lattice_basis.rows());
  check_dim(j, d);
  int sd = d;
  spec.shifts = points_of(need(j, "shifts"), sd);
  const json& polys = need(j, "polys");
  if (!polys.is_array()) throw ValidationError("polys must be an array");
  for (const auto& p : polys) {
    if (p.is_number()) {
      spec.polys.push_back(TrigPolynomial::constant(d, p.get<double>()));
      continue;
    }
    std::vector<TrigTerm> terms;
    for (const auto& t : p) {
      const Vector f = vector_from_json(need(t, "freq"));
      terms.push_back({f, complex_of(t)});
    }
    spec.polys.emplace_back(d, terms);
  }
  spec.box = box_from_json(need(j, "box"));
  spec.validate();
  return spec;
}

AtomicMeasure measure_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("measure must be a JSON object");
  if (j.contains("quasicrystal")) {
    return generate_quasicrystal(quasicrystal_from_json(j.at("quasicrystal")),
                                 j.value("atom_cap", static_cast<std::size_t>(kDefaultAtomCap)));
  }
  if (j.contains("comb")) {
    const json& c = j.at("comb");
    return dirac_comb(matrix_from_json(need(c, "basis")), box_from_json(need(c, "box")));
  }
  const json& atoms = need(j, "atoms");
  if (!atoms.is_array()) throw ValidationError("atoms must be an array");
  int d = j.value("d", 0);
  std::vector<Atom> list;
  for (const auto& a : atoms) {
    Vector r = vector_from_json(need(a, "r"));
    if (d == 0) d = static_cast<int>(r.size());
    MultiIndex alpha(static_cast<std::size_t>(r.size()), 0);
    if (a.contains("alpha")) {
      if (!a.at("alpha").is_array()) throw ValidationError("alpha must be an array of integers");
      alpha.clear();
      for (const auto& k : a.at("alpha")) {
        if (!k.is_number_integer()) throw ValidationError("alpha entries must be integers");
        alpha.push_back(k.get<int>());
      }
    }
    list.push_back({std::move(r), std::move(alpha), complex_of(a)});
  }
  if (d == 0) throw ValidationError("empty measure needs 'd'");
  return AtomicMeasure(d, list, number_or(j, "merge_tol", kDefaultMergeTol));
}

json to_json(const AtomicMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) {
    atoms.push_back({{"r", to_json(a.position)}, {"alpha", a.order}, {"re", a.coeff.real()}, {"im", a.coeff.imag()}});
  }
  return {{"d", mu.dim()}, {"merge_tol", mu.merge_tol()}, {"atoms", atoms}};
}

SignalSpec signal_from_json(const json& j) {
  const auto type = need(j, "type").get<std::string>();
  SignalSpec spec;
  spec.box = box_from_json(need(j, "box"));
  for (const auto& n : need(j, "samples")) {
    if (!n.is_number_integer() || n.get<long long>() < 2) throw ValidationError("samples must be integers >= 2");
    spec.samples.push_back(n.get<std::size_t>());
  }
  if (type == "gaussian") {
    spec.variant = GaussianSignal{vector_from_json(need(j, "center")), number_or(j, "width", 1.0)};
  } else if (type == "modulated") {
    spec.variant = ModulatedGaussianSignal{vector_from_json(need(j, "center")), number_or(j, "width", 1.0),
                                           vector_from_json(need(j, "freq"))};
  } else if (type == "mollified") {
    spec.variant = MollifiedMeasureSignal{measure_from_json(need(j, "measure")), number_or(j, "width", 0.05)};
  } else {
    throw ValidationError("unknown signal type '" + type + "'");
  }
  return spec;
}

WignerGridSpec grid_spec_from_json(const json& j) {
  WignerGridSpec spec;
  auto coords = [](const json& list, const char* stem, std::vector<OutputCoord>& out) {
    if (!list.is_array()) throw ValidationError(std::string(stem) + " must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const json& c = list[i];
      if (c.is_number()) {
        out.emplace_back(c.get<double>());
        continue;
      }
      const std::string name = list.size() == 1 ? stem : stem + std::to_string(i + 1);
      const json& cnt = need(c, "count");
      if (!cnt.is_number_integer() || cnt.get<long long>() < 2) throw ValidationError("axis count must be >= 2");
      out.emplace_back(Axis::span(name, number(need(c, "lo"), "lo"), number(need(c, "hi"), "hi"), cnt.get<std::size_t>()));
    }
  };
  coords(need(j, "x"), "x", spec.x);
  coords(need(j, "omega"), "omega", spec.omega);
  spec.t_step = number_or(j, "t_step", 0.0);
  if (spec.t_step < 0) throw ValidationError("t_step must be nonnegative");
  return spec;
}

SupportData support_from_json(const json& j, double tol) {
  SupportData data;
  int d = j.value("d", 0);
  const auto r = points_of(need(j, "R"), d);
  const auto s = points_of(need(j, "S"), d);
  if (d == 0) throw ValidationError("support data needs points or 'd'");
  data.r = PointSet::from_vectors(d, r, tol);
  data.s = PointSet::from_vectors(d, s, tol);
  data.complete = j.value("complete", false);
  if (j.contains("coeffs")) {
    for (const auto& c : j.at("coeffs")) {
      const Vector rv = vector_from_json(need(c, "r")), sv = vector_from_json(need(c, "s"));
      if (rv.size() != d || sv.size() != d) throw ValidationError("coefficient key has the wrong dimension");
      std::size_t ri, si;
      try {
        ri = match_points(data.r, std::vector<double>(rv.data(), rv.data() + d), tol)[0];
        si = match_points(data.s, std::vector<double>(sv.data(), sv.data() + d), tol)[0];
      } catch (const NumericalError&) {
        throw ValidationError("coefficient key does not pair a point of R with a point of S");
      }
      data.coeffs[{ri, si}] += complex_of(c);
    }
  }
  data.validate();
  return data;
}

SeparableTest test_function_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("test function must be a non-empty array of factors");
  std::vector<GaussPoly1d> factors;
  for (const auto& f : j) {
    const double c = number_or(f, "center", 0.0), w = number_or(f, "width", 1.0), fr = number_or(f, "freq", 0.0);
    if (!(w > 0)) throw ValidationError("test function width must be positive");
    factors.push_back(GaussPoly1d::modulated(c, w, fr));
  }
  return SeparableTest(factors);
}

json to_json(const PointSet& s) {
  json pts = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) pts.push_back(to_json(s.vec(i)));
  return {{"d", s.dim()}, {"points", pts}};
}

json to_json(const ChirpAtomSum& w) {
  json atoms = json::array();
  for (const auto& a : w.atoms()) {
    json chirps = json::array();
    for (const auto& c : a.chirps) {
      chirps.push_back({{"weight", complex_json(c.weight)}, {"freq", to_json(c.freq)}});
    }
    atoms.push_back({{"x", to_json(a.x)}, {"chirps", chirps}});
  }
  json out = {{"d", w.dim()}, {"merge_tol", w.merge_tol()}, {"atom_count", w.size()},
              {"chirp_count", w.chirp_count()}, {"atoms", atoms}};
  if (w.matrix) out["matrix"] = to_json(*w.matrix);
  return out;
}

json to_json(const DetInfo& d) {
  return {{"det", d.det}, {"cond", d.cond}, {"tolerance", d.tolerance}, {"verdict", to_string(d.verdict)}};
}

json to_json(const SchurReport& r) {
  json out = {{"Z_blocks", {{"Y", to_json(r.y)}, {"U", to_json(r.u)}, {"V", to_json(r.v)}, {"W", to_json(r.w)}}},
              {"Zinv_blocks", {{"E", to_json(r.e)}, {"F", to_json(r.f)}, {"G", to_json(r.g)}, {"H", to_json(r.h)}}},
              {"equivalences",
               {{"detY<=>detH", r.y_h}, {"detW<=>detE", r.w_e}, {"detU<=>detF", r.u_f}, {"detV<=>detG", r.v_g}}},
              {"all_hold", r.all_hold()}};
  out["U=-Y"] = r.u_is_minus_y ? json(*r.u_is_minus_y) : json(nullptr);
  out["F=H"] = r.f_is_h ? json(*r.f_is_h) : json(nullptr);
  return out;
}

json to_json(const DualMatrix& d) { return {{"L", to_json(d.l)}, {"L_inverse", to_json(d.l_inverse)}}; }

json to_json(const DetectionReport& r) {
  json conds = json::array();
  json evidence = json::object();
  for (const auto& c : r.conditions) {
    json ev = json::object();
    for (const auto& [k, v] : c.evidence) ev[k] = v;
    conds.push_back({{"name", c.name}, {"verdict", to_string(c.verdict)}, {"note", c.note}, {"evidence", ev}});
    evidence[c.name] = ev;
  }
  json concl = json::array();
  for (const auto& c : r.conclusions) {
    json e = {{"claim", c.claim}};
    e["map"] = c.map ? to_json(*c.map) : json(nullptr);
    e["verified"] = c.verified ? json(*c.verified) : json(nullptr);
    concl.push_back(e);
  }
  return {{"theorem", r.theorem},   {"route", to_string(r.route)}, {"all_conditions_pass", r.all_pass()},
          {"conditions", conds},    {"conclusions", concl},       {"evidence", evidence},
          {"caveats", r.caveats}};
}

json to_json(const CounterexampleReport& r) {
  json rat = json::array();
  for (const auto& q : r.rationality) {
    rat.push_back({{"label", q.label}, {"value", q.value}, {"rational", q.rational}, {"p", q.p}, {"q", q.q},
                   {"error", q.error}, {"denominator_bound", kRationalDenominatorBound}});
  }
  json out = {{"a", r.a},
              {"c", r.c},
              {"m_max", r.m_max},
              {"orbit_size", r.orbit_size},
              {"orbit_lengths", r.profile.radii},
              {"min_gaps", r.profile.min_gaps},
              {"gap_rule_accumulation", r.profile.accumulation_suspected},
              {"accumulation", r.accumulation},
              {"rationality", rat},
              {"conclusion", r.conclusion}};
  out["period"] = r.period ? json(*r.period) : json(nullptr);
  return out;
}

json to_json(const DifferDiscreteReport& r) {
  json out = {{"contained", r.contained}, {"delta", r.delta}, {"min_gap", r.min_gap}, {"bound_holds", r.bound_holds}};
  out["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  return out;
}

json to_json(const DualityReport& r) { return {{"max_abs", r.max_abs}, {"max_rel", r.max_rel}}; }

json grid_sidecar(const GridField& g, const std::string& bin_name) {
  json axes = json::array();
  for (const auto& a : g.axes()) {
    axes.push_back({{"name", a.name}, {"origin", a.origin}, {"step", a.step}, {"count", a.count}});
  }
  json fixed = json::object();
  for (const auto& [k, v] : g.fixed()) fixed[k] = v;
  return {{"data", bin_name},
          {"dtype", "float64"},
          {"endianness", "little"},
          {"layout", "row-major, (re, im) interleaved"},
          {"axes", axes},
          {"fixed", fixed},
          {"max_abs", g.max_abs()}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string points_csv(const PointSet& s) {
  std::string out;
  const int d = s.dim();
  for (int i = 0; i < d; ++i) out += (i ? "," : "") + (d == 1 ? std::string("x") : "x" + std::to_string(i + 1));
  out += "\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto p = s.point(k);
    for (int i = 0; i < d; ++i) out += (i ? "," : "") + format_double(p[static_cast<std::size_t>(i)]);
    out += "\n";
  }
  return out;
}

std::string gap_profile_csv(const CounterexampleReport& r) {
  std::string out = "n,min_gap\n";
  for (std::size_t i = 0; i < r.profile.radii.size(); ++i) {
    out += format_double(r.profile.radii[i]) + "," + format_double(r.profile.min_gaps[i]) + "\n";
  }
  return out;
}

std::string peaks_csv(const std::vector<Peak>& peaks) {
  std::string out;
  if (peaks.empty()) return "position,magnitude\n";
  const auto d = peaks[0].position.size();
  for (Eigen::Index i = 0; i < d; ++i) out += "p" + std::to_string(i + 1) + ",";
  out += "magnitude\n";
  for (const auto& p : peaks) {
    for (Eigen::Index i = 0; i < d; ++i) out += format_double(p.position(i)) + ",";
    out += format_double(p.magnitude) + "\n";
  }
  return out;
}

namespace {

void put_le(std::string& buf, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    buf.push_back(static_cast<char>(bits & 0xff));
    bits >>= 8;
  }
}

double get_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = bits << 8 | p[i];
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_grid_bin(const GridField& g, const std::string& path) {
  std::string buf;
  buf.reserve(g.size() * 16);
  for (const auto& v : g.values()) {
    put_le(buf, v.real());
    put_le(buf, v.imag());
  }
  write_file(path, buf);
}

GridField read_grid(const std::string& sidecar_path) {
  const json side = parse(read_file(sidecar_path));
  std::vector<Axis> axes;
  for (const auto& a : need(side, "axes")) {
    axes.push_back(Axis{need(a, "name").get<std::string>(), number(need(a, "origin"), "origin"),
                        number(need(a, "step"), "step"), need(a, "count").get<std::size_t>()});
  }
  std::vector<std::pair<std::string, double>> fixed;
  if (side.contains("fixed")) {
    for (const auto& [k, v] : side.at("fixed").items()) fixed.emplace_back(k, v.get<double>());
  }
  const auto dir = std::filesystem::path(sidecar_path).parent_path();
  const std::string raw = read_file((dir / need(side, "data").get<std::string>()).string());
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.count;
  if (raw.size() != 16 * n) throw ValidationError("grid data size does not match the sidecar axes");
  std::vector<Complex> vals(n);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  for (std::size_t k = 0; k < n; ++k) vals[k] = {get_le(p + 16 * k), get_le(p + 16 * k + 8)};
  return GridField(std::move(axes), std::move(vals), std::move(fixed));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace qwigner::io
