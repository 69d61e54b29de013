#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "toric/degeneration.hpp"
#include "toric/patch.hpp"
#include "toric/subdivision.hpp"

namespace toric::io {

using Json = nlohmann::json;

/// Parses JSON text; syntax errors become ParseError with line and column.
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::filesystem::path& path);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& value);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Integer or "p/q" string for exact values; floats accepted on input and
/// read through their shortest decimal form.
Rational rational_from_json(const Json& value, const std::string& field);
Json rational_to_json(const Rational& value);

LatticeConfig config_from_json(const Json& value, const std::string& field = "config");
Json to_json(const LatticeConfig& config);

/// {"lifting": [...]} or a bare array.
Lifting lifting_from_json(const Json& value, const std::string& field = "lifting");
Json to_json(const Lifting& lifting);

/// {"facets": [[labels..],..]} or a bare array of label lists.
std::vector<std::vector<int>> facets_from_json(const Json& value, const std::string& field = "facets");
Json facets_to_json(const std::vector<std::vector<int>>& facets);

PatchSpec spec_from_json(const Json& value, const std::string& field = "spec");
Json to_json(const PatchSpec& spec);

Json to_json(const Decomposition& decomposition, const RegularityCertificate& certificate);
RegularityCertificate certificate_from_json(const Json& value, std::size_t num_points);

/// Everything an experiment needs. In a file, "config" may be an inline
/// object or a path relative to the experiment file; the same holds for
/// "lifting" and "facets".
struct Experiment {
  LatticeConfig config;
  std::optional<Lifting> lifting;
  std::optional<std::vector<double>> weights;
  std::optional<std::vector<Point>> control_points;
  std::optional<std::vector<std::vector<int>>> facets;
  std::vector<double> schedule{1, 5, 25, 125, 625};
  int resolution = 65;
  double tolerance_scale = 1.0;
  std::string out_dir;

  bool has_patch() const { return weights.has_value() && control_points.has_value(); }
  /// Throws SchemaError naming the missing field.
  PatchSpec spec() const;
  const Lifting& require_lifting() const;
};

Experiment experiment_from_json(const Json& value, const std::filesystem::path& base_dir = ".");
Experiment load_experiment(const std::filesystem::path& path);
Json to_json(const Experiment& experiment);

/// Wavefront OBJ text: one group per mesh group, "f" for 2-cells, "l" for
/// segments, "p" for isolated points. Images of dimension 2 get z = 0.
std::string obj_string(const SampledSet& set);
void export_obj(const SampledSet& set, const std::filesystem::path& path);

}  // namespace toric::io
