#pragma once

#include <string>
#include <vector>

#include "toric/kernels.hpp"
#include "toric/patch.hpp"
#include "toric/subdivision.hpp"

namespace toric {

/// Cells of one sampled piece. Indices refer to SampledSet::points.
/// cell_dim 1: polyline segments; 2: quads or triangles; 0: isolated points.
struct MeshGroup {
  std::string name;
  int cell_dim = 2;
  std::vector<std::vector<std::size_t>> cells;
};

struct SampledSet {
  PointCloud points;
  std::vector<MeshGroup> groups;
  int resolution = 0;
  std::string provenance;
  /// True when every group parametrizes the same set (a degenerate patch
  /// sampled in several torus charts); false when groups are distinct pieces.
  bool groups_are_charts = false;
  /// For chart groups: largest distance from the image of a cell centroid
  /// or edge midpoint (in any chart) to the nearest sample. Negative when
  /// not measured.
  double measured_gap = -1.0;

  /// Longest image-space edge between adjacent samples over all groups, or
  /// the measured gap when one is available.
  double sampling_pitch() const;
};

/// t^{lambda(a)} w_a. Throws NonpositiveT unless t > 0.
std::vector<double> degeneration_weights(std::span<const double> weights, const Lifting& lifting,
                                         double t);

/// Union of the sub-patches (F, w|F, B|F) over the faces of a decomposition.
struct ControlSurface {
  Decomposition decomposition;
  std::vector<Face> faces;
  std::vector<PatchSpec> pieces;  // parallel to faces
  std::vector<std::size_t> facet_pieces;

  /// Largest distance between two control points of one facet.
  double max_facet_diameter() const;

  /// Largest distance, over facets F and one-dimensional faces H of F,
  /// between the F-piece restricted to the edge and the H-piece, matched
  /// through the torus reparametrization of the edge.
  double c0_mismatch(int samples_per_edge) const;
};

ControlSurface control_surface(const PatchSpec& spec, const Decomposition& decomposition);

/// Chart-coordinate grid over a patch domain with mesh cells. Triangles get a
/// triangular grid, quadrilaterals a bilinear m x m grid, other polygons a
/// fan of triangular grids; intervals get m uniform points.
struct DomainGrid {
  int param_dim = 1;
  std::vector<double> params;
  MeshGroup mesh;
};

DomainGrid domain_grid(const ToricBasis& basis, int m);

SampledSet sample(const PatchSpec& spec, int m, Execution exec = Execution::Parallel);
SampledSet sample(const ControlSurface& surface, int m, Execution exec = Execution::Parallel);

/// Samples Y(t) for the lifting family. Besides the plain domain grid, the
/// patch is sampled in the torus chart of every facet F of S_lambda, i.e.
/// with weights t^{lambda(a) - l_F(a)} w_a. The affine factor t^{-l_F(a)}
/// does not change the image, so every sample lies on Y(t), while the
/// F-chart keeps its samples spread over the part of Y(t) near the F-piece.
SampledSet sample_degeneration(const PatchSpec& spec, const Lifting& lifting, double t, int m,
                               Execution exec = Execution::Parallel);

/// Symmetric discrete Hausdorff distance. Throws EmptySet.
double hausdorff_distance(const SampledSet& x, const SampledSet& y,
                          HausdorffMethod method = HausdorffMethod::GridIndex,
                          Execution exec = Execution::Parallel);

struct SweepRow {
  double t = 0.0;
  double hausdorff = 0.0;
  double sampling_pitch = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double threshold = 0.0;
  /// Each entry at most the previous one plus threshold / 10.
  bool nonincreasing = false;
  bool final_pass = false;
  /// Smallest scheduled t from which every entry passes; negative if none.
  double passing_from = -1.0;
  bool passed() const { return nonincreasing && final_pass; }
};

/// tau(m) = 3 * (max facet diameter) / m, times `tolerance_scale`.
double convergence_threshold(const ControlSurface& surface, int m, double tolerance_scale = 1.0);

/// Hausdorff distance between Y(t) and the control surface of S_lambda for
/// each t of a strictly increasing schedule with t >= 1.
SweepResult convergence_sweep(const PatchSpec& spec, const Lifting& lifting,
                              std::span<const double> schedule, int m,
                              double tolerance_scale = 1.0,
                              Execution exec = Execution::Parallel);

/// Same sweep against an arbitrary target surface (used for irregular ones).
SweepResult distance_sweep(const PatchSpec& spec, const Lifting& lifting, const ControlSurface& target,
                           std::span<const double> schedule, int m, double tolerance_scale = 1.0,
                           Execution exec = Execution::Parallel);

/// CSV with header t,hausdorff,sampling_pitch,threshold,pass.
std::string sweep_csv(const SweepResult& result);

struct DecayReport {
  std::vector<std::pair<int, int>> excluded_pairs;  // in faces, but in no common face
  std::vector<int> excluded_points;                 // in no face
  double pair_mass = 0.0;   // max over samples and pairs of min(z_a, z_b)
  double point_mass = 0.0;  // max over samples and points of z_c
  bool empty() const { return excluded_pairs.empty() && excluded_points.empty(); }
};

/// Simplex coordinates of Y(t) outside the realization of S_lambda, sampled
/// on the m-grid of the domain.
DecayReport support_decay_probe(const PatchSpec& spec, const Lifting& lifting, double t, int m);

}  // namespace toric
