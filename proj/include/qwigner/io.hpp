#pragma once

#include <string>

#include "json.hpp"
#include "qwigner/blockmat.hpp"
#include "qwigner/detect.hpp"
#include "qwigner/measure.hpp"
#include "qwigner/testfn.hpp"
#include "qwigner/wexact.hpp"
#include "qwigner/wgrid.hpp"

// JSON/CSV/binary formats. Readers throw ValidationError on malformed input.
namespace qwigner::io {

using nlohmann::json;

/// Parses text, mapping parse errors to ValidationError.
json parse(const std::string& text);

Matrix matrix_from_json(const json& j);
json to_json(const Matrix& m);
Vector vector_from_json(const json& j);
json to_json(const Vector& v);

/// {"d","A0","B0","C0","D0"}, {"full": [[...]]}, {"preset": "wigner"|"ambiguity"|"identity", "d"}
/// or {"preset": "cohen", "E": [[...]]}.
BlockMatrix2d block_matrix_from_json(const json& j);
json to_json(const BlockMatrix2d& t);

/// {"d", "merge_tol"?, "atoms": [{"r": [..], "alpha"?: [..], "re", "im"?}]},
/// or {"quasicrystal": {...}} / {"comb": {"basis", "box"}}.
AtomicMeasure measure_from_json(const json& j);
json to_json(const AtomicMeasure& mu);

Box box_from_json(const json& j);
json to_json(const Box& b);

/// {"d"?, "lattice", "shifts", "polys": [[{"freq","re","im"?}]], "box"}
QuasicrystalSpec quasicrystal_from_json(const json& j);

/// {"type": "gaussian"|"modulated"|"mollified", "center", "width", "freq", "measure", "box", "samples"}
SignalSpec signal_from_json(const json& j);

/// {"x": [axis | number], "omega": [...], "t_step"?}; axis = {"lo","hi","count"}.
WignerGridSpec grid_spec_from_json(const json& j);

/// {"R": [[..]], "S": [[..]], "coeffs": [{"r","s","re","im"?}], "complete"?}
SupportData support_from_json(const json& j, double tol = kDefaultMergeTol);

/// [{"center","width","freq"?}, ...] one entry per coordinate.
SeparableTest test_function_from_json(const json& j);

json to_json(const PointSet& s);
json to_json(const ChirpAtomSum& w);
json to_json(const DetInfo& d);
json to_json(const SchurReport& r);
json to_json(const DualMatrix& d);
json to_json(const DetectionReport& r);
json to_json(const CounterexampleReport& r);
json to_json(const DifferDiscreteReport& r);
json to_json(const DualityReport& r);
json grid_sidecar(const GridField& g, const std::string& bin_name);

/// Shortest decimal that round-trips the double; "nan"/"inf"/"-inf" otherwise.
std::string format_double(double v);

/// One row per point, header x1..xd (x for d = 1).
std::string points_csv(const PointSet& s);
std::string gap_profile_csv(const CounterexampleReport& r);
std::string peaks_csv(const std::vector<Peak>& peaks);

/// Little-endian float64, (re, im) interleaved, row-major.
void write_grid_bin(const GridField& g, const std::string& path);
GridField read_grid(const std::string& sidecar_path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

}  // namespace qwigner::io
