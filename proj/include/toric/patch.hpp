#pragma once

#include <optional>
#include <span>
#include <vector>

#include "toric/lattice.hpp"

namespace toric {

using Point = std::vector<double>;

/// Facet data of a (possibly lower-dimensional) configuration in its own
/// integer chart: the domain inequalities and the exponents h_e(a).
class ToricBasis {
 public:
  explicit ToricBasis(const LatticeConfig& config);

  const LatticeConfig& config() const { return config_; }
  const AffineChart& chart() const { return chart_; }
  /// Domain polytope in chart coordinates; empty facets for a single point.
  const Polytope& domain() const { return domain_; }
  int intrinsic_dim() const { return chart_.intrinsic_dim(); }
  std::size_t size() const { return config_.size(); }
  std::size_t num_facets() const { return facets_.size(); }

  /// Writes log beta_a(u) for chart coordinates u; -inf where beta_a vanishes.
  /// Facet values within `slack` below zero are clamped to zero; further out
  /// the call throws OutsideDomain.
  void log_basis(std::span<const double> u, std::span<double> out, double slack = 1e-9) const;

  /// log h_e(u) for every facet, clamped as in log_basis.
  void log_facet_values(std::span<const double> u, std::span<double> out, double slack = 1e-9) const;

  std::int64_t exponent(std::size_t label, std::size_t facet) const {
    return exponents_[label * facets_.size() + facet];
  }

 private:
  LatticeConfig config_;
  AffineChart chart_;
  Polytope domain_;
  std::vector<FacetInequality> facets_;
  std::vector<std::int64_t> exponents_;  // label-major
  double scale_ = 1.0;
};

/// (A, w, B): positive weights and control points in R^n for every label.
class PatchSpec {
 public:
  PatchSpec(LatticeConfig config, std::vector<double> weights, std::vector<Point> control_points);

  const LatticeConfig& config() const { return basis_.config(); }
  const ToricBasis& basis() const { return basis_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Point>& control_points() const { return control_points_; }
  int image_dim() const { return image_dim_; }

  /// Sub-patch (F, w|F, B|F) with labels renumbered in the given order.
  PatchSpec restrict_to(std::span<const int> labels) const;
  PatchSpec with_weights(std::vector<double> weights) const;

 private:
  ToricBasis basis_;
  std::vector<double> weights_;
  std::vector<Point> control_points_;
  int image_dim_ = 0;
};

/// Point of the probability simplex indexed by configuration labels.
struct SimplexPoint {
  std::vector<double> z;
};

/// beta_{a,A}(x) for a point x of the domain (ambient coordinates). The
/// domain test is exact: x is converted to a rational and located with
/// face_membership. Uses 0^0 = 1.
double toric_basis(const LatticeConfig& config, int label, std::span<const double> x);

SimplexPoint beta_map(const LatticeConfig& config, std::span<const double> x);
SimplexPoint weight_action(std::span<const double> weights, const SimplexPoint& z);
Point project(std::span<const Point> control_points, const SimplexPoint& z);

/// F_{A,w,B}(x) for x in ambient coordinates.
Point evaluate(const PatchSpec& spec, std::span<const double> x);

/// Normalized coefficients w_a beta_a(u) / sum, computed in the log domain
/// from per-label log weights. `u` is in chart coordinates.
void blend_coefficients(const ToricBasis& basis, std::span<const double> log_weights,
                        std::span<const double> u, std::span<double> out);

LatticeConfig bezier_curve(int d);
LatticeConfig tensor_patch(int c, int d);
LatticeConfig triangle_patch(int d);

/// sum alpha_a a = sum beta_a a with both coefficient vectors on the simplex.
struct BinomialRelation {
  RationalVector alpha;
  RationalVector beta;
};

/// Throws InvalidRelation unless the relation's identities hold exactly.
void validate_relation(const LatticeConfig& config, const BinomialRelation& relation);

/// One relation per Z-basis vector of the integer affine relations of A.
std::vector<BinomialRelation> spanning_relations(const LatticeConfig& config);

/// A relation with alpha supported on F and beta on G, when conv(F) and
/// conv(G) meet.
std::optional<BinomialRelation> hull_intersection_relation(const LatticeConfig& config,
                                                           std::span<const int> f,
                                                           std::span<const int> g);

/// max over relations and samples of
/// |prod z^alpha prod w^beta - prod z^beta prod w^alpha|, z = w . beta(x).
double check_binomial_relations(const PatchSpec& spec, std::span<const BinomialRelation> relations,
                                std::span<const Point> samples);

}  // namespace toric
