#include "qwigner/qwigner.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "qwigner/io.hpp"

using namespace qwigner;
using io::json;

struct qw_matrix {
  BlockMatrix2d t;
};
struct qw_measure {
  AtomicMeasure mu;
};
struct qw_chirpsum {
  ChirpAtomSum w;
};
struct qw_grid {
  GridField g;
};

namespace {

thread_local std::string last_error;

template <class F>
qw_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return QW_OK;
  } catch (const ValidationError& e) {
    last_error = e.what();
    return QW_ERR_VALIDATION;
  } catch (const PropertyViolation& e) {
    last_error = e.what();
    return QW_ERR_PROPERTY;
  } catch (const NumericalError& e) {
    last_error = e.what();
    return QW_ERR_NUMERICAL;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QW_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return QW_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw ValidationError(std::string("null ") + what);
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

const char* qw_last_error(void) { return last_error.c_str(); }
const char* qw_version(void) { return "0.1.0"; }
void qw_string_free(char* s) { delete[] s; }

qw_status qw_matrix_from_json(const char* text, qw_matrix** out) {
  return guard([&] {
    need(text, "json");
    need(out, "output");
    *out = new qw_matrix{io::block_matrix_from_json(io::parse(text))};
  });
}

qw_status qw_matrix_to_json(const qw_matrix* t, char** out) {
  return guard([&] {
    need(t, "matrix");
    put(out, dump(io::to_json(t->t)));
  });
}

int qw_matrix_dim(const qw_matrix* t) { return t ? t->t.dim() : 0; }
void qw_matrix_free(qw_matrix* t) { delete t; }

qw_status qw_matrix_dual_json(const qw_matrix* t, char** out) {
  return guard([&] {
    need(t, "matrix");
    if (!t->t.invertible()) throw SingularMatrixError("matrix is singular");
    const DualMatrix d = dual_matrix(t->t);
    json j = io::to_json(d);
    j["T"] = io::to_json(t->t);
    j["dual_of_dual_equals_T"] = approx_equal(dual_matrix(d.l).l, t->t);
    j["det_T"] = t->t.det();
    put(out, dump(j));
  });
}

qw_status qw_matrix_cohen_json(const qw_matrix* t, char** out) {
  return guard([&] {
    need(t, "matrix");
    const auto cf = cohen_form(t->t);
    json j = {{"cohen", cf.has_value()}};
    if (cf) {
      j["E"] = io::to_json(cf->e);
      j["inverse"] = io::to_json(cf->inverse);
      j["b0_minus_d0"] = io::to_json(cf->b0_minus_d0);
      j["a_plus_b"] = io::to_json(cf->a_plus_b);
    }
    put(out, dump(j));
  });
}

qw_status qw_matrix_schur_json(const qw_matrix* t, char** out) {
  return guard([&] {
    need(t, "matrix");
    const BlockMatrix2d inv = invert_blocks(t->t);
    put(out, dump({{"T", io::to_json(schur_report(t->t))}, {"T_inverse", io::to_json(schur_report(inv))}}));
  });
}

qw_status qw_measure_from_json(const char* text, qw_measure** out) {
  return guard([&] {
    need(text, "json");
    need(out, "output");
    *out = new qw_measure{io::measure_from_json(io::parse(text))};
  });
}

qw_status qw_quasicrystal_generate(const char* spec_json, qw_measure** out) {
  return guard([&] {
    need(spec_json, "json");
    need(out, "output");
    *out = new qw_measure{generate_quasicrystal(io::quasicrystal_from_json(io::parse(spec_json)))};
  });
}

qw_status qw_measure_to_json(const qw_measure* mu, char** out) {
  return guard([&] {
    need(mu, "measure");
    put(out, dump(io::to_json(mu->mu)));
  });
}

qw_status qw_measure_support_csv(const qw_measure* mu, char** out) {
  return guard([&] {
    need(mu, "measure");
    put(out, io::points_csv(mu->mu.support()));
  });
}

size_t qw_measure_size(const qw_measure* mu) { return mu ? mu->mu.size() : 0; }
void qw_measure_free(qw_measure* mu) { delete mu; }

qw_status qw_measure_differ_discrete_json(const qw_measure* mu, double tol, char** out) {
  return guard([&] {
    need(mu, "measure");
    const PointSet supp = mu->mu.support();
    const PointSet s = supp.empty() ? supp : diff_set(supp);
    json j = io::to_json(verify_differ_discrete(supp, s, tol));
    j["support_size"] = supp.size();
    j["difference_set_size"] = s.size();
    put(out, dump(j));
  });
}

qw_status qw_wigner_exact(const qw_matrix* t, const qw_measure* mu, qw_chirpsum** out) {
  return guard([&] {
    need(t, "matrix");
    need(mu, "measure");
    need(out, "output");
    *out = new qw_chirpsum{wigner_t_exact(t->t, mu->mu)};
  });
}

qw_status qw_chirpsum_to_json(const qw_chirpsum* w, char** out) {
  return guard([&] {
    need(w, "chirp sum");
    put(out, dump(io::to_json(w->w)));
  });
}

qw_status qw_chirpsum_support_csv(const qw_chirpsum* w, char** out) {
  return guard([&] {
    need(w, "chirp sum");
    put(out, io::points_csv(support_x(w->w)));
  });
}

size_t qw_chirpsum_size(const qw_chirpsum* w) { return w ? w->w.size() : 0; }
void qw_chirpsum_free(qw_chirpsum* w) { delete w; }

qw_status qw_signal_sample(const char* signal_json, qw_grid** out) {
  return guard([&] {
    need(signal_json, "json");
    need(out, "output");
    *out = new qw_grid{sample(io::signal_from_json(io::parse(signal_json)))};
  });
}

qw_status qw_wigner_grid(const qw_matrix* t, const qw_grid* f, const char* spec_json, qw_grid** out) {
  return guard([&] {
    need(t, "matrix");
    need(f, "grid");
    need(spec_json, "json");
    need(out, "output");
    *out = new qw_grid{wigner_t_grid(t->t, f->g, io::grid_spec_from_json(io::parse(spec_json)))};
  });
}

size_t qw_grid_size(const qw_grid* g) { return g ? g->g.size() : 0; }
size_t qw_grid_rank(const qw_grid* g) { return g ? g->g.rank() : 0; }

qw_status qw_grid_values(const qw_grid* g, double* buf) {
  return guard([&] {
    need(g, "grid");
    need(buf, "buffer");
    for (std::size_t k = 0; k < g->g.size(); ++k) {
      buf[2 * k] = g->g.values()[k].real();
      buf[2 * k + 1] = g->g.values()[k].imag();
    }
  });
}

qw_status qw_grid_write(const qw_grid* g, const char* bin_path, const char* bin_name, char** sidecar_json) {
  return guard([&] {
    need(g, "grid");
    need(bin_path, "path");
    need(bin_name, "name");
    io::write_grid_bin(g->g, bin_path);
    put(sidecar_json, dump(io::grid_sidecar(g->g, bin_name)));
  });
}

qw_status qw_grid_read(const char* sidecar_path, qw_grid** out) {
  return guard([&] {
    need(sidecar_path, "path");
    need(out, "output");
    *out = new qw_grid{io::read_grid(sidecar_path)};
  });
}

qw_status qw_grid_peaks_csv(const qw_grid* g, const char* keep_axes, double rel_threshold, double cluster_radius,
                            char** out) {
  return guard([&] {
    need(g, "grid");
    std::vector<std::size_t> keep;
    if (keep_axes && *keep_axes) {
      std::stringstream ss(keep_axes);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          keep.push_back(std::stoul(item));
        } catch (const std::exception&) {
          throw ValidationError("bad axis list '" + std::string(keep_axes) + "'");
        }
      }
    }
    const GridField f = keep.empty() ? g->g : project_max(g->g, keep);
    put(out, io::peaks_csv(find_peaks(f, rel_threshold, cluster_radius)));
  });
}

void qw_grid_free(qw_grid* g) { delete g; }

qw_status qw_check_support(const qw_matrix* t, const char* support_json, double tol, char** report_json, char** text) {
  return guard([&] {
    need(t, "matrix");
    need(support_json, "json");
    const SupportData data = io::support_from_json(io::parse(support_json), tol);
    const Route route = suggest_route(t->t);
    DetectionReport rep = route == Route::theorem2 ? check_theorem2(t->t, data) : check_theorem1(t->t, data);
    if (route == Route::neither) {
      rep.theorem = 0;
      rep.caveats.emplace_back("neither hypothesis set is satisfied");
    }
    json j = io::to_json(rep);
    const FinitenessVerdict fin = finiteness_rule(data);
    j["finiteness"] = {{"verdict", fin.verdict == Finiteness::measure_zero ? "mu=0" : "inconclusive"},
                       {"reason", fin.reason}};
    put(report_json, dump(j));
    put(text, render_text(rep) + "finiteness: " + fin.reason + "\n");
  });
}

qw_status qw_detect(const qw_matrix* t, const qw_measure* mu, double tol, double threshold, char** report_json,
                    char** text) {
  return guard([&] {
    need(t, "matrix");
    need(mu, "measure");
    EndToEndOptions opt;
    if (tol > 0) opt.tol = tol;
    if (threshold > 0) opt.peak_threshold = threshold;
    const DetectionReport rep = end_to_end_detect(t->t, mu->mu, opt);
    put(report_json, dump(io::to_json(rep)));
    put(text, render_text(rep));
  });
}

qw_status qw_counterexample(double a, double c, int m_max, char** report_json, char** profile_csv) {
  return guard([&] {
    const CounterexampleReport rep = counterexample_scan(a, c, m_max);
    put(report_json, dump(io::to_json(rep)));
    put(profile_csv, io::gap_profile_csv(rep));
  });
}

qw_status qw_pair(const qw_measure* mu, const char* tests_json, char** out) {
  return guard([&] {
    need(mu, "measure");
    need(tests_json, "json");
    const json j = io::parse(tests_json);
    const SeparableTest p1 = io::test_function_from_json(j.at("phi1"));
    const SeparableTest p2 = io::test_function_from_json(j.at("phi2"));
    const std::string sign_name = j.value("sign", "derived");
    if (sign_name != "derived" && sign_name != "as_printed") throw ValidationError("sign must be derived or as_printed");
    const LambdaSign sign = sign_name == "derived" ? LambdaSign::derived : LambdaSign::as_printed;
    const Complex formula = pair_wigner_formula(mu->mu, p1, p2, sign);
    json res = {{"sign", sign_name}, {"formula", {{"re", formula.real()}, {"im", formula.imag()}}}};
    if (mu->mu.is_order_zero()) {
      const Complex exact = pair_chirp_sum(wigner_t_exact(BlockMatrix2d::wigner(mu->mu.dim()), mu->mu), p1, p2);
      res["exact_chirp_pairing"] = {{"re", exact.real()}, {"im", exact.imag()}};
      res["discrepancy"] = std::abs(exact - formula);
    }
    put(out, dump(res));
  });
}

qw_status qw_duality_check(const qw_matrix* t, const qw_grid* f, double half_width, size_t count, double pad_half,
                           char** out) {
  return guard([&] {
    need(t, "matrix");
    need(f, "grid");
    const DualityReport rep = check_duality(t->t, f->g, {half_width, count, pad_half});
    json j = io::to_json(rep);
    j["L"] = io::to_json(dual_matrix(t->t).l);
    j["grid"] = {{"half_width", half_width}, {"count", count}, {"pad_half", pad_half}};
    put(out, dump(j));
  });
}

}  // extern "C"
