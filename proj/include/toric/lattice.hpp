#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "toric/rational.hpp"

namespace toric {

/// A finite set of distinct points of Z^d. Labels are the indices into
/// `points()` and are the stable handles every other module uses.
class LatticeConfig {
 public:
  LatticeConfig() = default;
  LatticeConfig(int dim, std::vector<IntVector> points);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const IntVector& point(std::size_t label) const { return points_[label]; }
  const std::vector<IntVector>& points() const { return points_; }

  /// Sub-configuration with labels renumbered 0..k-1 in the given order.
  LatticeConfig subset(std::span<const int> labels) const;

  /// Dimension of the affine span over Q (-1 for the empty configuration).
  int affine_dimension() const;

  friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;

 private:
  int dim_ = 0;
  std::vector<IntVector> points_;
};

/// h(x) = normal . x + offset, primitive and nonnegative on the polytope.
struct FacetInequality {
  IntVector normal;
  std::int64_t offset = 0;

  std::int64_t operator()(const IntVector& x) const;
  Rational operator()(std::span<const Rational> x) const;
  double evaluate(std::span<const double> x) const;

  friend bool operator==(const FacetInequality&, const FacetInequality&) = default;
};

/// Integer affine coordinates on the lattice Z^d intersected with the affine
/// span of a configuration. Identity when the configuration is full-dimensional.
class AffineChart {
 public:
  static AffineChart of(const LatticeConfig& config);

  int ambient_dim() const { return ambient_dim_; }
  int intrinsic_dim() const { return static_cast<int>(basis_.size()); }
  bool is_identity() const { return identity_; }

  IntVector to_local(const IntVector& p) const;
  std::vector<double> to_local(std::span<const double> x) const;
  std::vector<double> to_global(std::span<const double> u) const;

  /// Applies to_local to every point of the configuration.
  LatticeConfig localize(const LatticeConfig& config) const;

 private:
  int ambient_dim_ = 0;
  bool identity_ = true;
  IntVector origin_;
  std::vector<IntVector> basis_;          // intrinsic_dim vectors in Z^d
  std::vector<std::vector<double>> left_inverse_;  // intrinsic_dim x d
  RationalMatrix left_inverse_exact_;
};

/// Convex hull of a full-dimensional configuration with d in {1, 2}.
/// In d = 2 vertices are counter-clockwise and facets[i] is the edge
/// vertices[i] -> vertices[i+1]. In d = 1 facets are {x - min, max - x}.
struct Polytope {
  int dim = 0;
  std::vector<int> vertices;
  std::vector<IntVector> vertex_points;
  std::vector<FacetInequality> facets;

  /// Twice the area (d = 2) or the length (d = 1); always an integer.
  std::int64_t doubled_volume() const;
};

Polytope convex_hull(const LatticeConfig& config);

/// Counter-clockwise strict hull vertices of the given labels (d = 2).
std::vector<int> hull_2d(const LatticeConfig& config, std::span<const int> labels);

struct FaceLocation {
  enum class Kind { Interior, Boundary, Vertex, Outside };
  Kind kind = Kind::Outside;
  int dim = -1;                      // dimension of the minimal face
  std::vector<int> tight_facets;     // indices into Polytope::facets
  std::optional<int> vertex;         // label when kind == Vertex
};

FaceLocation face_membership(const Polytope& poly, std::span<const Rational> x);

/// Exact heights on the points of a configuration.
class Lifting {
 public:
  Lifting() = default;
  explicit Lifting(RationalVector values) : values_(std::move(values)) {}

  static Lifting zero(std::size_t n) { return Lifting(RationalVector(n, Rational(0))); }

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t label) const { return values_[label]; }
  const RationalVector& values() const { return values_; }
  Lifting negated() const;

  friend bool operator==(const Lifting&, const Lifting&) = default;

 private:
  RationalVector values_;
};

/// x -> gradient . x + constant.
struct AffineFunction {
  RationalVector gradient;
  Rational constant;

  Rational operator()(const IntVector& x) const;
  friend bool operator==(const AffineFunction&, const AffineFunction&) = default;
};

struct UpperFacet {
  std::vector<int> members;   // every label whose lift lies on the facet, sorted
  std::vector<int> boundary;  // strict hull vertices of members (ccw in d = 2)
  AffineFunction plane;       // agrees with the lifting on members
};

/// Upper hull of the lifted configuration {(a, lambda(a))}. Only facets whose
/// outward normal has positive last coordinate are kept; coplanar pieces
/// are merged into one facet.
struct LiftedPolytope {
  LatticeConfig base;
  Lifting lifting;
  Polytope base_hull;
  std::vector<UpperFacet> upper_facets;

  /// Labels whose lift lies strictly below every upper facet.
  std::vector<int> points_below() const;
};

LiftedPolytope lift(const LatticeConfig& config, const Lifting& lifting);

}  // namespace toric
