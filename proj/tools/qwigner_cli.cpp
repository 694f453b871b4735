// Command-line front end. Talks to the library only through qwigner.h.
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwigner/qwigner.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string message;
};

void check(qw_status s, const char* what) {
  if (s != QW_OK) throw Failure{static_cast<int>(s), std::string(what) + ": " + qw_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  qw_string_free(s);
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Failure{1, "cannot read '" + p.string() + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{1, "cannot write '" + p.string() + "'"};
  out << data;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw Failure{4, "sha256 failed"};
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};
using Matrix = Handle<qw_matrix, qw_matrix_free>;
using Measure = Handle<qw_measure, qw_measure_free>;
using ChirpSum = Handle<qw_chirpsum, qw_chirpsum_free>;
using Grid = Handle<qw_grid, qw_grid_free>;

// Scenario: config file values, overridden by flags.
struct Scenario {
  std::string command;
  std::string config_path;
  json config = json::object();
  std::map<std::string, std::string> file_flags;  // key -> path given on the command line
  std::optional<std::string> out;
  std::optional<double> tol, threshold, a, c, radius, half_width, pad;
  std::optional<int> grid, mmax, count;

  json manifest_inputs = json::object();
  json params = json::object();
  std::vector<std::pair<std::string, std::string>> outputs;  // name -> contents
  Grid grid_result;
  std::optional<std::string> grid_output;
  std::string summary;

  fs::path base_dir() const { return config_path.empty() ? fs::path(".") : fs::path(config_path).parent_path(); }

  // JSON text for an input: flag path, then config path string, then inline config object.
  std::string input(const std::string& key) {
    if (auto it = file_flags.find(key); it != file_flags.end() && !it->second.empty()) {
      const std::string text = read_file(it->second);
      manifest_inputs[key] = {{"path", it->second}, {"sha256", sha256_hex(text)}};
      return text;
    }
    if (config.contains(key)) {
      const json& v = config.at(key);
      if (v.is_string()) {
        const fs::path p = base_dir() / v.get<std::string>();
        const std::string text = read_file(p);
        manifest_inputs[key] = {{"path", p.string()}, {"sha256", sha256_hex(text)}};
        return text;
      }
      const std::string text = v.dump();
      manifest_inputs[key] = {{"inline", true}, {"sha256", sha256_hex(text)}};
      return text;
    }
    throw Failure{1, "missing input '" + key + "' (flag --" + key + " or config field)"};
  }

  template <class T>
  T param(const std::string& key, const std::optional<T>& flag, std::optional<T> dflt = std::nullopt) {
    T v;
    if (flag) {
      v = *flag;
    } else if (config.contains(key)) {
      try {
        v = config.at(key).get<T>();
      } catch (const json::exception&) {
        throw Failure{1, "config field '" + key + "' has the wrong type"};
      }
    } else if (dflt) {
      v = *dflt;
    } else {
      throw Failure{1, "missing parameter '" + key + "'"};
    }
    params[key] = v;
    return v;
  }
};

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Failure{1, "invalid JSON in " + what + ": " + e.what()};
  }
}

void load_matrix(Scenario& s, Matrix& m) { check(qw_matrix_from_json(s.input("matrix").c_str(), &m.p), "matrix"); }
void load_measure(Scenario& s, Measure& m) { check(qw_measure_from_json(s.input("measure").c_str(), &m.p), "measure"); }

// Default output grid: x over the signal box, omega over [-2, 2] (d = 1) or fixed at 0 (d = 2).
std::string default_grid_spec(const json& signal, int d, int n) {
  json spec = {{"x", json::array()}, {"omega", json::array()}};
  const json& box = signal.at("box");
  for (int i = 0; i < d; ++i) {
    spec["x"].push_back({{"lo", box.at("lo").at(i)}, {"hi", box.at("hi").at(i)}, {"count", n}});
    if (d == 1) spec["omega"].push_back({{"lo", -2.0}, {"hi", 2.0}, {"count", n}});
    else spec["omega"].push_back(0.0);
  }
  return spec.dump();
}

void run_command(Scenario& s) {
  const std::string& cmd = s.command;
  if (cmd == "compute-exact") {
    Matrix t;
    Measure mu;
    load_matrix(s, t);
    load_measure(s, mu);
    ChirpSum w;
    check(qw_wigner_exact(t.p, mu.p, &w.p), "compute-exact");
    char* j = nullptr;
    char* csv = nullptr;
    check(qw_chirpsum_to_json(w.p, &j), "serialize");
    s.outputs.emplace_back("chirp_sum.json", take(j));
    check(qw_chirpsum_support_csv(w.p, &csv), "serialize");
    s.outputs.emplace_back("support.csv", take(csv));
    s.summary = std::to_string(qw_chirpsum_size(w.p)) + " atoms in the x-support\n";
  } else if (cmd == "compute-grid") {
    Matrix t;
    load_matrix(s, t);
    const std::string signal_text = s.input("signal");
    const json signal = parse_json(signal_text, "signal");
    const int n = s.param<int>("grid", s.grid, 65);
    const double threshold = s.param<double>("threshold", s.threshold, 0.5);
    const double radius = s.param<double>("radius", s.radius, 0.1);
    std::string spec = s.config.contains("output") ? s.config.at("output").dump() : "";
    if (!signal.contains("box") || !signal.at("box").is_object()) throw Failure{1, "signal needs a box"};
    if (spec.empty()) spec = default_grid_spec(signal, qw_matrix_dim(t.p), n);
    s.params["output"] = parse_json(spec, "output");
    Grid f;
    check(qw_signal_sample(signal_text.c_str(), &f.p), "signal");
    Grid& w = s.grid_result;
    check(qw_wigner_grid(t.p, f.p, spec.c_str(), &w.p), "compute-grid");
    char* peaks = nullptr;
    const std::string keep = qw_matrix_dim(t.p) == 1 && qw_grid_rank(w.p) == 2 ? "0" : "";
    check(qw_grid_peaks_csv(w.p, keep.c_str(), threshold, radius, &peaks), "peaks");
    s.outputs.emplace_back("peaks.csv", take(peaks));
    s.grid_output = "grid";
    s.summary = std::to_string(qw_grid_size(w.p)) + " grid samples\n";
  } else if (cmd == "check") {
    Matrix t;
    load_matrix(s, t);
    const std::string support = s.input("support");
    const double tol = s.param<double>("tol", s.tol, 1e-9);
    char* j = nullptr;
    char* text = nullptr;
    check(qw_check_support(t.p, support.c_str(), tol, &j, &text), "check");
    s.outputs.emplace_back("report.json", take(j));
    s.summary = take(text);
    s.outputs.emplace_back("report.txt", s.summary);
  } else if (cmd == "dual" || cmd == "cohen" || cmd == "schur") {
    Matrix t;
    load_matrix(s, t);
    char* j = nullptr;
    if (cmd == "dual") check(qw_matrix_dual_json(t.p, &j), "dual");
    else if (cmd == "cohen") check(qw_matrix_cohen_json(t.p, &j), "cohen");
    else check(qw_matrix_schur_json(t.p, &j), "schur");
    s.summary = take(j);
    s.outputs.emplace_back(cmd + ".json", s.summary);
  } else if (cmd == "generate-qc") {
    const std::string spec = s.input("quasicrystal");
    const double tol = s.param<double>("tol", s.tol, 1e-9);
    Measure mu;
    check(qw_quasicrystal_generate(spec.c_str(), &mu.p), "generate-qc");
    char* j = nullptr;
    char* csv = nullptr;
    char* dd = nullptr;
    check(qw_measure_to_json(mu.p, &j), "serialize");
    check(qw_measure_support_csv(mu.p, &csv), "serialize");
    check(qw_measure_differ_discrete_json(mu.p, tol, &dd), "differ-discrete");
    s.outputs.emplace_back("measure.json", take(j));
    s.outputs.emplace_back("support.csv", take(csv));
    s.outputs.emplace_back("differ_discrete.json", take(dd));
    s.summary = std::to_string(qw_measure_size(mu.p)) + " atoms\n";
  } else if (cmd == "counterexample") {
    const double a = s.param<double>("a", s.a);
    const double c = s.param<double>("c", s.c, 0.0);
    const int m = s.param<int>("mmax", s.mmax, 500);
    char* j = nullptr;
    char* csv = nullptr;
    check(qw_counterexample(a, c, m, &j, &csv), "counterexample");
    s.summary = take(j);
    s.outputs.emplace_back("rationality.json", s.summary);
    s.outputs.emplace_back("gap_profile.csv", take(csv));
  } else if (cmd == "pair") {
    Measure mu;
    load_measure(s, mu);
    const std::string tests = s.input("tests");
    char* j = nullptr;
    check(qw_pair(mu.p, tests.c_str(), &j), "pair");
    s.summary = take(j);
    s.outputs.emplace_back("pairing.json", s.summary);
  } else if (cmd == "duality-check") {
    Matrix t;
    load_matrix(s, t);
    const std::string signal = s.input("signal");
    const double hw = s.param<double>("half_width", s.half_width, 2.0);
    const int count = s.param<int>("count", s.count, 129);
    const double pad = s.param<double>("pad_half", s.pad, 32.0);
    if (count < 2) throw Failure{1, "count must be at least 2"};
    Grid f;
    check(qw_signal_sample(signal.c_str(), &f.p), "signal");
    char* j = nullptr;
    check(qw_duality_check(t.p, f.p, hw, static_cast<size_t>(count), pad, &j), "duality-check");
    s.summary = take(j);
    s.outputs.emplace_back("duality.json", s.summary);
  } else if (cmd == "detect") {
    Matrix t;
    Measure mu;
    load_matrix(s, t);
    load_measure(s, mu);
    const double tol = s.param<double>("tol", s.tol, 1e-9);
    const double threshold = s.param<double>("threshold", s.threshold, 0.5);
    char* j = nullptr;
    char* text = nullptr;
    check(qw_detect(t.p, mu.p, tol, threshold, &j, &text), "detect");
    s.outputs.emplace_back("report.json", take(j));
    s.summary = take(text);
    s.outputs.emplace_back("report.txt", s.summary);
  } else {
    throw Failure{1, "unknown command '" + cmd + "'"};
  }
}

int execute(Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  try {
    if (!s.config_path.empty()) s.config = parse_json(read_file(s.config_path), "config");
    if (!s.config.is_object()) throw Failure{1, "config must be a JSON object"};
    if (s.config.contains("command") && s.config.at("command") != s.command) {
      throw Failure{1, "config is for command '" + s.config.at("command").get<std::string>() + "'"};
    }
    const fs::path out_dir = s.out ? fs::path(*s.out)
                                   : (s.config.contains("out") ? s.base_dir() / s.config.at("out").get<std::string>()
                                                               : fs::path("out"));
    run_command(s);

    fs::create_directories(out_dir);
    json outputs = json::array();
    for (const auto& [name, data] : s.outputs) {
      write_file(out_dir / name, data);
      outputs.push_back(name);
    }
    if (s.grid_output) {
      const std::string bin = *s.grid_output + ".bin";
      char* side = nullptr;
      check(qw_grid_write(s.grid_result.p, (out_dir / bin).string().c_str(), bin.c_str(), &side), "write grid");
      write_file(out_dir / (*s.grid_output + ".json"), take(side));
      outputs.push_back(bin);
      outputs.push_back(*s.grid_output + ".json");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest = {{"command", s.command}, {"tool_version", qw_version()}, {"inputs", s.manifest_inputs},
                     {"parameters", s.params}, {"outputs", outputs},        {"wall_time_s", secs}};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << s.summary;
    if (!s.summary.empty() && s.summary.back() != '\n') std::cout << "\n";
    return 0;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-Wigner transforms of atomic measures and quasicrystal detection"};
  app.require_subcommand(1);
  Scenario s;

  struct Spec {
    const char* name;
    const char* help;
    std::vector<std::string> files;
  };
  const std::vector<Spec> specs{
      {"compute-exact", "exact chirp-atom sum of W_T(mu)", {"matrix", "measure"}},
      {"compute-grid", "W_T of a sampled signal on a grid", {"matrix", "signal"}},
      {"check", "check Theorem 1/2 hypotheses on support data", {"matrix", "support"}},
      {"dual", "Fourier-dual matrix L", {"matrix"}},
      {"cohen", "Cohen-class form of T", {"matrix"}},
      {"schur", "block determinant equivalences for T and its inverse", {"matrix"}},
      {"generate-qc", "generate a lattice-translate quasicrystal measure", {"quasicrystal"}},
      {"counterexample", "fractional-part scan of m(a, c)", {}},
      {"pair", "pairing of W(mu) with a Gaussian test pair", {"measure", "tests"}},
      {"duality-check", "compare W_T(f) with the dual transform of f-hat", {"matrix", "signal"}},
      {"detect", "end-to-end detection from a measure", {"matrix", "measure"}},
  };
  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--config", s.config_path, "scenario JSON")->check(CLI::ExistingFile);
    sub->add_option("--out", s.out, "output directory");
    for (const auto& f : spec.files) sub->add_option("--" + f, s.file_flags[f], f + " JSON file");
    const std::string name = spec.name;
    if (name == "check" || name == "detect" || name == "generate-qc") sub->add_option("--tol", s.tol, "merge tolerance");
    if (name == "compute-grid" || name == "detect") sub->add_option("--threshold", s.threshold, "relative peak threshold");
    if (name == "compute-grid") {
      sub->add_option("--grid", s.grid, "samples per output axis");
      sub->add_option("--radius", s.radius, "peak cluster radius");
    }
    if (name == "counterexample") {
      sub->add_option("--a", s.a, "first coordinate");
      sub->add_option("--c", s.c, "second coordinate");
      sub->add_option("--mmax", s.mmax, "largest multiple");
    }
    if (name == "duality-check") {
      sub->add_option("--half-width", s.half_width, "shared grid [-a, a]^2");
      sub->add_option("--count", s.count, "points per axis");
      sub->add_option("--pad", s.pad, "zero-padding half width for f-hat");
    }
    sub->callback([&s, name] { s.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return execute(s);
}
