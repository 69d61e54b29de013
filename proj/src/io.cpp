#include "toric/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "toric/error.hpp"

namespace toric::io {

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::SchemaError, field + ": " + what);
}

const Json& require(const Json& obj, const std::string& key, const std::string& field) {
  if (!obj.is_object()) schema(field, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(field + "." + key, "missing");
  return *it;
}

std::int64_t int_from_json(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) schema(field, "expected an integer");
  return v.get<std::int64_t>();
}

double double_from_json(const Json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return to_double(rational_from_json(v, field));
  schema(field, "expected a number");
}

std::vector<int> labels_from_json(const Json& v, const std::string& field) {
  if (!v.is_array()) schema(field, "expected an array of labels");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(static_cast<int>(int_from_json(v[i], field + "[" + std::to_string(i) + "]")));
  }
  return out;
}

// Resolves a field that may be inline or a path to a JSON file.
Json resolve(const Json& v, const std::filesystem::path& base_dir) {
  if (v.is_string()) return read_json_file(base_dir / v.get<std::string>());
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Text

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                           ": malformed JSON");
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Values

Rational rational_from_json(const Json& value, const std::string& field) {
  if (value.is_number_integer()) return to_rational(value.get<std::int64_t>());
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (!std::isfinite(d)) schema(field, "non-finite number");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, d);
    std::string text(buf, res.ptr);
    if (text.find('e') != std::string::npos) schema(field, "use a \"p/q\" string for " + text);
    return parse_rational(text);
  }
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, field + ": " + e.what());
    }
  }
  schema(field, "expected an integer or a \"p/q\" string");
}

Json rational_to_json(const Rational& value) {
  if (is_integer(value) && value.get_num().fits_slong_p()) return Json(value.get_num().get_si());
  return Json(format_rational(value));
}

LatticeConfig config_from_json(const Json& value, const std::string& field) {
  const int dim = static_cast<int>(int_from_json(require(value, "dim", field), field + ".dim"));
  const Json& pts = require(value, "points", field);
  if (!pts.is_array()) schema(field + ".points", "expected an array");
  std::vector<IntVector> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string f = field + ".points[" + std::to_string(i) + "]";
    if (!pts[i].is_array()) schema(f, "expected an array of integers");
    IntVector p;
    for (std::size_t j = 0; j < pts[i].size(); ++j) p.push_back(int_from_json(pts[i][j], f + "[" + std::to_string(j) + "]"));
    points.push_back(std::move(p));
  }
  return LatticeConfig(dim, std::move(points));
}

Json to_json(const LatticeConfig& config) {
  Json pts = Json::array();
  for (const auto& p : config.points()) pts.push_back(p);
  return Json{{"dim", config.dim()}, {"points", pts}};
}

Lifting lifting_from_json(const Json& value, const std::string& field) {
  const Json& arr = value.is_object() ? require(value, "lifting", field) : value;
  const std::string f = value.is_object() ? field + ".lifting" : field;
  if (!arr.is_array()) schema(f, "expected an array");
  RationalVector v;
  for (std::size_t i = 0; i < arr.size(); ++i) v.push_back(rational_from_json(arr[i], f + "[" + std::to_string(i) + "]"));
  return Lifting(std::move(v));
}

Json to_json(const Lifting& lifting) {
  Json arr = Json::array();
  for (const auto& v : lifting.values()) arr.push_back(rational_to_json(v));
  return arr;
}

std::vector<std::vector<int>> facets_from_json(const Json& value, const std::string& field) {
  const Json& arr = value.is_object() ? require(value, "facets", field) : value;
  const std::string f = value.is_object() ? field + ".facets" : field;
  if (!arr.is_array()) schema(f, "expected an array of label lists");
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(labels_from_json(arr[i], f + "[" + std::to_string(i) + "]"));
  return out;
}

Json facets_to_json(const std::vector<std::vector<int>>& facets) {
  Json arr = Json::array();
  for (const auto& f : facets) arr.push_back(f);
  return arr;
}

PatchSpec spec_from_json(const Json& value, const std::string& field) {
  auto config = config_from_json(require(value, "config", field), field + ".config");
  const Json& w = require(value, "weights", field);
  if (!w.is_array()) schema(field + ".weights", "expected an array");
  std::vector<double> weights;
  for (std::size_t i = 0; i < w.size(); ++i) weights.push_back(double_from_json(w[i], field + ".weights[" + std::to_string(i) + "]"));
  const Json& b = require(value, "control_points", field);
  if (!b.is_array()) schema(field + ".control_points", "expected an array");
  std::vector<Point> control;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::string f = field + ".control_points[" + std::to_string(i) + "]";
    if (!b[i].is_array()) schema(f, "expected an array of numbers");
    Point p;
    for (std::size_t j = 0; j < b[i].size(); ++j) p.push_back(double_from_json(b[i][j], f + "[" + std::to_string(j) + "]"));
    control.push_back(std::move(p));
  }
  return PatchSpec(std::move(config), std::move(weights), std::move(control));
}

Json to_json(const PatchSpec& spec) {
  Json b = Json::array();
  for (const auto& p : spec.control_points()) b.push_back(p);
  return Json{{"config", to_json(spec.config())}, {"weights", spec.weights()}, {"control_points", b}};
}

// ---------------------------------------------------------------------------
// Certificates

Json to_json(const Decomposition& decomposition, const RegularityCertificate& certificate) {
  Json out;
  out["facets"] = facets_to_json(decomposition.facets());
  out["points_in_no_face"] = decomposition.points_in_no_face();
  if (const auto* w = std::get_if<RegularWitness>(&certificate)) {
    out["status"] = "regular";
    out["witness"] = Json{{"lifting", to_json(w->lifting)}, {"margin", rational_to_json(w->margin)}};
    return out;
  }
  const auto& f = std::get<FarkasCertificate>(certificate);
  auto rows = [](const std::vector<std::pair<ConstraintRef, Rational>>& v) {
    Json arr = Json::array();
    for (const auto& [ref, m] : v) {
      arr.push_back(Json{{"facet", ref.facet}, {"point", ref.point}, {"multiplier", rational_to_json(m)}});
    }
    return arr;
  };
  out["status"] = "irregular";
  out["farkas"] = Json{{"inequalities", rows(f.inequalities)}, {"equalities", rows(f.equalities)}};
  return out;
}

RegularityCertificate certificate_from_json(const Json& value, std::size_t num_points) {
  const Json& status = require(value, "status", "certificate");
  if (status == "regular") {
    const Json& w = require(value, "witness", "certificate");
    auto lifting = lifting_from_json(require(w, "lifting", "certificate.witness"), "certificate.witness.lifting");
    if (lifting.size() != num_points) schema("certificate.witness.lifting", "wrong number of values");
    return RegularWitness{std::move(lifting), rational_from_json(require(w, "margin", "certificate.witness"),
                                                                 "certificate.witness.margin")};
  }
  if (status != "irregular") schema("certificate.status", "expected \"regular\" or \"irregular\"");
  const Json& f = require(value, "farkas", "certificate");
  auto rows = [&](const char* key) {
    const std::string field = std::string("certificate.farkas.") + key;
    const Json& arr = require(f, key, "certificate.farkas");
    if (!arr.is_array()) schema(field, "expected an array");
    std::vector<std::pair<ConstraintRef, Rational>> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string fi = field + "[" + std::to_string(i) + "]";
      ConstraintRef ref{static_cast<int>(int_from_json(require(arr[i], "facet", fi), fi + ".facet")),
                        static_cast<int>(int_from_json(require(arr[i], "point", fi), fi + ".point"))};
      out.emplace_back(ref, rational_from_json(require(arr[i], "multiplier", fi), fi + ".multiplier"));
    }
    return out;
  };
  return FarkasCertificate{rows("inequalities"), rows("equalities")};
}

// ---------------------------------------------------------------------------
// Experiments

PatchSpec Experiment::spec() const {
  if (!weights) schema("experiment.weights", "missing");
  if (!control_points) schema("experiment.control_points", "missing");
  return PatchSpec(config, *weights, *control_points);
}

const Lifting& Experiment::require_lifting() const {
  if (!lifting) schema("experiment.lifting", "missing");
  return *lifting;
}

Experiment experiment_from_json(const Json& value, const std::filesystem::path& base_dir) {
  if (!value.is_object()) schema("experiment", "expected an object");
  Experiment e;
  e.config = config_from_json(resolve(require(value, "config", "experiment"), base_dir), "experiment.config");
  if (value.contains("lifting")) {
    e.lifting = lifting_from_json(resolve(value["lifting"], base_dir), "experiment.lifting");
  }
  if (value.contains("facets")) {
    e.facets = facets_from_json(resolve(value["facets"], base_dir), "experiment.facets");
  }
  if (value.contains("weights") || value.contains("control_points")) {
    Json spec_json{{"config", to_json(e.config)},
                   {"weights", require(value, "weights", "experiment")},
                   {"control_points", require(value, "control_points", "experiment")}};
    auto spec = spec_from_json(spec_json, "experiment");
    e.weights = spec.weights();
    e.control_points = spec.control_points();
  }
  if (value.contains("schedule")) {
    const Json& s = value["schedule"];
    if (!s.is_array() || s.empty()) schema("experiment.schedule", "expected a nonempty array");
    e.schedule.clear();
    for (std::size_t i = 0; i < s.size(); ++i) e.schedule.push_back(double_from_json(s[i], "experiment.schedule[" + std::to_string(i) + "]"));
  }
  if (value.contains("resolution")) {
    e.resolution = static_cast<int>(int_from_json(value["resolution"], "experiment.resolution"));
    if (e.resolution < 2) schema("experiment.resolution", "must be at least 2");
  }
  if (value.contains("tolerance_scale")) {
    e.tolerance_scale = double_from_json(value["tolerance_scale"], "experiment.tolerance_scale");
  }
  if (value.contains("out_dir")) {
    if (!value["out_dir"].is_string()) schema("experiment.out_dir", "expected a string");
    e.out_dir = value["out_dir"].get<std::string>();
  }
  return e;
}

Experiment load_experiment(const std::filesystem::path& path) {
  return experiment_from_json(read_json_file(path), path.parent_path());
}

Json to_json(const Experiment& e) {
  Json out{{"config", to_json(e.config)},
           {"schedule", e.schedule},
           {"resolution", e.resolution},
           {"tolerance_scale", e.tolerance_scale}};
  if (e.lifting) out["lifting"] = to_json(*e.lifting);
  if (e.facets) out["facets"] = facets_to_json(*e.facets);
  if (e.weights) out["weights"] = *e.weights;
  if (e.control_points) out["control_points"] = *e.control_points;
  if (!e.out_dir.empty()) out["out_dir"] = e.out_dir;
  return out;
}

// ---------------------------------------------------------------------------
// OBJ

std::string obj_string(const SampledSet& set) {
  const int dim = set.points.dim;
  if (dim < 2 || dim > 3) throw Error(ErrorCode::IoError, "OBJ export needs 2 or 3 image coordinates");
  std::string out = "# " + set.provenance + ", resolution " + std::to_string(set.resolution) + "\n";
  char buf[128];
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const auto p = set.points.point(i);
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p[0], p[1], dim == 3 ? p[2] : 0.0);
    out += buf;
  }
  for (const auto& g : set.groups) {
    out += "g " + g.name + "\n";
    const char* tag = g.cell_dim == 2 ? "f" : g.cell_dim == 1 ? "l" : "p";
    for (const auto& cell : g.cells) {
      out += tag;
      for (auto i : cell) out += " " + std::to_string(i + 1);
      out += "\n";
    }
  }
  return out;
}

void export_obj(const SampledSet& set, const std::filesystem::path& path) {
  write_text_file(path, obj_string(set));
}

}  // namespace toric::io
