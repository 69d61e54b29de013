#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "toric/error.hpp"
#include "toric/io.hpp"

using namespace toric;
namespace fs = std::filesystem;

namespace {

const fs::path kData = TORIC_DATA_DIR;

ErrorCode code_of(auto&& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
  std::size_t n = 0, pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (text.compare(pos, prefix.size(), prefix) == 0) ++n;
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return n;
}

}  // namespace

TEST_CASE("rationals in JSON") {
  CHECK(io::rational_from_json(io::Json(3), "x") == 3);
  CHECK(io::rational_from_json(io::Json("-2/4"), "x") == Rational(-1, 2));
  CHECK(io::rational_from_json(io::Json(0.25), "x") == Rational(1, 4));
  CHECK(io::rational_to_json(Rational(5)) == io::Json(5));
  CHECK(io::rational_to_json(Rational(1, 3)) == io::Json("1/3"));
  CHECK(code_of([] { io::rational_from_json(io::Json("1/0"), "lifting[2]"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::rational_from_json(io::Json(true), "x"); }) == ErrorCode::SchemaError);
}

TEST_CASE("malformed JSON reports line and column") {
  std::string msg;
  CHECK(code_of([] { io::parse_json("{\n  \"a\": [1,\n}", "f.json"); }, &msg) == ErrorCode::ParseError);
  CHECK(msg.find("f.json:3:") != std::string::npos);
  CHECK(code_of([] { io::read_json_file("/nonexistent/x.json"); }) == ErrorCode::IoError);
}

TEST_CASE("schema errors name the field") {
  std::string msg;
  CHECK(code_of([] { io::experiment_from_json(io::parse_json("{}")); }, &msg) == ErrorCode::SchemaError);
  CHECK(msg.find("experiment.config") != std::string::npos);

  auto bad_point = io::parse_json(R"({"config": {"dim": 1, "points": [[0], [1.5]]}})");
  CHECK(code_of([&] { io::experiment_from_json(bad_point); }, &msg) == ErrorCode::SchemaError);
  CHECK(msg.find("points[1]") != std::string::npos);

  auto no_weights = io::parse_json(R"({"config": {"dim": 1, "points": [[0], [1]]}, "control_points": [[0], [1]]})");
  CHECK(code_of([&] { io::experiment_from_json(no_weights); }, &msg) == ErrorCode::SchemaError);
  CHECK(msg.find("weights") != std::string::npos);

  auto bare = io::experiment_from_json(io::parse_json(R"({"config": {"dim": 1, "points": [[0], [1]]}})"));
  CHECK(code_of([&] { bare.require_lifting(); }, &msg) == ErrorCode::SchemaError);
  CHECK(msg.find("lifting") != std::string::npos);
  CHECK(code_of([&] { bare.spec(); }) == ErrorCode::SchemaError);
}

TEST_CASE("every shipped data file loads") {
  int files = 0;
  for (const auto& entry : fs::directory_iterator(kData)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    auto e = io::load_experiment(entry.path());
    CHECK(e.has_patch());
    CHECK(e.control_points->size() == e.config.size());
    ++files;
  }
  CHECK(files >= 6);
}

TEST_CASE("experiments round-trip byte-identically") {
  for (const auto& entry : fs::directory_iterator(kData)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    auto first = io::dump(io::to_json(io::load_experiment(entry.path())));
    auto second = io::dump(io::to_json(io::experiment_from_json(io::parse_json(first))));
    CHECK(first == second);
  }
  auto e = io::load_experiment(kData / "bicubic_fig3.json");
  REQUIRE(e.lifting.has_value());
  CHECK((*e.lifting)[3] == Rational(1, 2));
}

TEST_CASE("certificates round-trip") {
  auto e = io::load_experiment(kData / "pinwheel.json");
  REQUIRE(e.facets.has_value());
  auto dec = validate_decomposition(e.config, *e.facets);
  auto cert = certify_regularity(e.config, dec);
  auto json = io::to_json(dec, cert);
  CHECK(json["status"] == "irregular");
  auto back = io::certificate_from_json(json, e.config.size());
  REQUIRE(std::holds_alternative<FarkasCertificate>(back));
  CHECK(verify_certificate(e.config, dec, std::get<FarkasCertificate>(back)));
  CHECK(io::dump(io::to_json(dec, back)) == io::dump(json));

  auto g = io::load_experiment(kData / "grid3x3.json");
  auto gdec = regular_decomposition(g.config, *g.lifting);
  auto gcert = certify_regularity(g.config, gdec);
  auto gjson = io::to_json(gdec, gcert);
  CHECK(gjson["status"] == "regular");
  auto gback = io::certificate_from_json(gjson, g.config.size());
  REQUIRE(std::holds_alternative<RegularWitness>(gback));
  CHECK(std::get<RegularWitness>(gback).lifting == std::get<RegularWitness>(gcert).lifting);
}

TEST_CASE("OBJ export") {
  PatchSpec square(tensor_patch(1, 1), {1, 1, 1, 1}, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 1}});
  auto text = io::obj_string(sample(square, 2, Execution::Serial));
  CHECK(count_lines(text, "v ") == 4);
  CHECK(count_lines(text, "f ") == 1);
  CHECK(count_lines(text, "g ") == 1);
  CHECK(text.find("f 1 2 4 3\n") != std::string::npos);

  auto e = io::load_experiment(kData / "bicubic_fig3.json");
  auto surface = control_surface(e.spec(), regular_decomposition(e.config, *e.lifting));
  auto pieces = io::obj_string(sample(surface, 3, Execution::Serial));
  CHECK(count_lines(pieces, "g ") == surface.facet_pieces.size());
  auto grid = io::load_experiment(kData / "grid3x3.json");
  auto grid_surface = control_surface(grid.spec(), regular_decomposition(grid.config, *grid.lifting));
  CHECK(count_lines(io::obj_string(sample(grid_surface, 3, Execution::Serial)), "g ") == 9);

  PatchSpec curve(bezier_curve(2), {1, 1, 1}, {{0, 0}, {1, 1}, {2, 0}});
  auto ctext = io::obj_string(sample(curve, 5, Execution::Serial));
  CHECK(count_lines(ctext, "l ") == 4);
  CHECK(ctext.find("v 0 0 0\n") != std::string::npos);

  auto dir = fs::temp_directory_path() / "toric_io_test";
  fs::create_directories(dir);
  io::export_obj(sample(square, 2, Execution::Serial), dir / "sq.obj");
  std::ifstream in(dir / "sq.obj");
  std::string disk((std::istreambuf_iterator<char>(in)), {});
  CHECK(disk == text);
  fs::remove_all(dir);
  CHECK(code_of([&] { io::export_obj(sample(square, 2), "/nonexistent/dir/x.obj"); }) == ErrorCode::IoError);
}
