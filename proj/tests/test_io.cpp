#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "qwigner/io.hpp"

using namespace qwigner;
namespace fs = std::filesystem;

TEST_CASE("matrix formats") {
  const auto t = io::block_matrix_from_json(io::parse(R"({"d":1,"A0":[[1]],"B0":[[0.5]],"C0":[[1]],"D0":[[-0.5]]})"));
  CHECK(approx_equal(t, BlockMatrix2d::wigner(1), 0.0));
  CHECK(approx_equal(io::block_matrix_from_json(io::to_json(t)), t, 0.0));
  CHECK(approx_equal(io::block_matrix_from_json(io::parse(R"({"preset":"ambiguity","d":2})")),
                     BlockMatrix2d::ambiguity(2), 0.0));
  CHECK(io::block_matrix_from_json(io::parse(R"({"preset":"cohen","E":[[0.3]]})")).upper_right()(0, 0) ==
        doctest::Approx(0.8));
  CHECK_THROWS_AS(io::block_matrix_from_json(io::parse(R"({"d":1,"A0":[[1]],"B0":[[1]]})")), ValidationError);
  CHECK_THROWS_AS(io::block_matrix_from_json(io::parse(R"({"d":2,"A0":[[1]],"B0":[[1]],"C0":[[1]],"D0":[[2]]})")),
                  ValidationError);
  CHECK_THROWS_AS(io::parse("{oops"), ValidationError);
}

TEST_CASE("measure formats") {
  const auto mu = io::measure_from_json(
      io::parse(R"({"d":1,"atoms":[{"r":[0],"re":1},{"r":[0.5],"alpha":[1],"re":2,"im":-1}]})"));
  REQUIRE(mu.size() == 2);
  CHECK(mu.atoms()[1].coeff == Complex(2, -1));
  const auto back = io::measure_from_json(io::to_json(mu));
  CHECK(io::to_json(back) == io::to_json(mu));
  const auto qc = io::measure_from_json(io::parse(
      R"({"quasicrystal":{"lattice":[[1]],"shifts":[[0],[0.5]],"polys":[1,[{"freq":[0.25],"re":1}]],"box":{"lo":[-2],"hi":[2]}}})"));
  CHECK(qc.size() == 9);
  CHECK_THROWS_AS(io::measure_from_json(io::parse(R"({"atoms":[{"r":[0]}]})")), ValidationError);
}

TEST_CASE("support data") {
  const auto data = io::support_from_json(
      io::parse(R"({"R":[0,1,2],"S":[[0],[0.5]],"coeffs":[{"r":[1],"s":[0.5],"re":2}],"complete":true})"));
  CHECK(data.r.size() == 3);
  CHECK(data.complete);
  CHECK(data.coeffs.at({1, 1}) == Complex(2.0));
  CHECK_THROWS_AS(io::support_from_json(io::parse(R"({"R":[0],"S":[0],"coeffs":[{"r":[3],"s":[0],"re":1}]})")),
                  ValidationError);
}

TEST_CASE("grid binary round trip") {
  const auto dir = fs::temp_directory_path() / "qwigner_io_test";
  fs::create_directories(dir);
  GridField g({Axis{"x", -1.0, 0.5, 3}, Axis{"omega", 0.0, 0.25, 2}},
              {{1, 2}, {3, -4}, {0.1, 1e-300}, {-0.0, 7}, {5, 6}, {std::nextafter(1.0, 2.0), 0}}, {{"t", 0.5}});
  io::write_grid_bin(g, (dir / "g.bin").string());
  io::write_file((dir / "g.json").string(), io::grid_sidecar(g, "g.bin").dump(2));
  CHECK(fs::file_size(dir / "g.bin") == 96);
  const auto back = io::read_grid((dir / "g.json").string());
  CHECK(back.values() == g.values());
  CHECK(back.axis(1).name == "omega");
  CHECK(back.fixed().at(0).second == 0.5);
  fs::remove_all(dir);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(io::format_double(v)) == v);
  CHECK(io::format_double(INFINITY) == "inf");
  CHECK(io::points_csv(PointSet(1, {0.5, -1.0})) == "x\n-1\n0.5\n");
}

TEST_CASE("report JSON schema") {
  SupportData data{PointSet(1, {0.0, 1.0}), PointSet(1, {0.0}), {{{0, 0}, 1.0}}, false};
  const auto j = io::to_json(check_theorem1(BlockMatrix2d::wigner(1), data));
  CHECK(j.at("theorem") == 1);
  CHECK(j.at("conditions").size() == 5);
  CHECK(j.contains("evidence"));
  CHECK(j.contains("caveats"));
}
