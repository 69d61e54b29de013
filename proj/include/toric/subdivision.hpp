#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "toric/lattice.hpp"

namespace toric {

/// A subset of configuration labels together with the dimension of its
/// convex hull. Members are kept sorted.
struct Face {
  std::vector<int> members;
  int dim = 0;

  friend bool operator==(const Face&, const Face&) = default;
  friend auto operator<=>(const Face& a, const Face& b) {
    if (a.dim != b.dim) return b.dim <=> a.dim;  // facets first
    return a.members <=> b.members;
  }
};

/// Lifting that induces a decomposition, with its bending margin: the least
/// amount by which a point off a facet sits below that facet's plane.
struct RegularWitness {
  Lifting lifting;
  Rational margin;
};

/// Row l_F(a) - lambda(a) of the regularity system. `facet` indexes
/// Decomposition::facets().
struct ConstraintRef {
  int facet = 0;
  int point = 0;
  friend bool operator==(const ConstraintRef&, const ConstraintRef&) = default;
};

/// Proof that no lifting induces a decomposition. With rows
///   l_F(a) - lambda(a) - eps >= 0   (a not in F)
///   l_F(a) - lambda(a)        = 0   (a in F)
/// the multipliers are nonnegative on the first kind, sum to one there, and
/// the combination cancels every lambda and l_F coefficient. What remains
/// is -eps >= 0, which no positive margin satisfies.
struct FarkasCertificate {
  std::vector<std::pair<ConstraintRef, Rational>> inequalities;
  std::vector<std::pair<ConstraintRef, Rational>> equalities;
};

using RegularityCertificate = std::variant<RegularWitness, FarkasCertificate>;

struct Regularity {
  enum class Status { Unknown, Regular, Irregular };
  Status status = Status::Unknown;
  std::optional<RegularityCertificate> certificate;
};

class Decomposition {
 public:
  enum class Source { FromLifting, UserSupplied };

  Decomposition() = default;
  Decomposition(int dim, std::size_t num_points, std::vector<Face> faces, Source source);

  int dim() const { return dim_; }
  std::size_t num_points() const { return num_points_; }
  const std::vector<Face>& faces() const { return faces_; }
  Source source() const { return source_; }
  bool validated() const { return validated_; }

  /// Full-dimensional faces in canonical (sorted) order.
  std::vector<std::vector<int>> facets() const;
  /// Labels that belong to no face.
  std::vector<int> points_in_no_face() const;

  Regularity regularity;
  std::optional<Lifting> source_lifting;

  friend bool same_faces(const Decomposition& a, const Decomposition& b) {
    return a.faces_ == b.faces_;
  }

 private:
  friend Decomposition validate_decomposition(const LatticeConfig&, std::vector<std::vector<int>>);
  friend Decomposition regular_decomposition(const LatticeConfig&, const Lifting&);

  int dim_ = 0;
  std::size_t num_points_ = 0;
  std::vector<Face> faces_;
  Source source_ = Source::UserSupplied;
  bool validated_ = false;
};

/// Decomposition S_lambda read off the upper hull of the lifted points.
Decomposition regular_decomposition(const LatticeConfig& config, const Lifting& lifting);

/// Checks that the given faces form a polyhedral decomposition of the
/// configuration's hull and closes the face set downward. Throws
/// CoverageGap, OverlapViolation or BadIntersection naming the faces.
Decomposition validate_decomposition(const LatticeConfig& config,
                                     std::vector<std::vector<int>> faces);

/// Decides regularity with an exact linear program and stores the result in
/// `decomposition.regularity`.
RegularityCertificate certify_regularity(const LatticeConfig& config, Decomposition& decomposition);

/// Global margin min_{F, a not in F} (l_F(a) - lambda(a)) where l_F is the
/// affine function agreeing with lambda on F; nullopt if lambda is not
/// affine on some facet.
std::optional<Rational> bending_margin(const LatticeConfig& config,
                                       const std::vector<std::vector<int>>& facets,
                                       const Lifting& lifting);

/// Pure rational re-check of a Farkas certificate against the decomposition.
bool verify_certificate(const LatticeConfig& config, const Decomposition& decomposition,
                        const FarkasCertificate& certificate);

/// Affine function through the lifts of an affinely spanning facet.
AffineFunction facet_plane(const LatticeConfig& config, const std::vector<int>& facet,
                           const Lifting& lifting);

}  // namespace toric
