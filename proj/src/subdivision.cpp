#include "toric/subdivision.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "toric/error.hpp"
#include "toric/linalg.hpp"
#include "toric/lp.hpp"

namespace toric {

namespace {

std::string describe(const std::vector<int>& members) {
  std::string s = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(members[i]);
  }
  return s + "}";
}

bool contains(const std::vector<int>& sorted, int label) {
  return std::binary_search(sorted.begin(), sorted.end(), label);
}

// Hull of a facet, with polytope labels mapped back to configuration labels.
Polytope facet_polytope(const LatticeConfig& config, const std::vector<int>& members) {
  Polytope p = convex_hull(config.subset(members));
  for (auto& v : p.vertices) v = members[v];
  return p;
}

bool in_hull(const Polytope& poly, const IntVector& x) {
  for (const auto& h : poly.facets) {
    if (h(x) < 0) return false;
  }
  return true;
}

// Proper faces of a facet's hull as point sets: facet-of-facet tight sets
// and, in d = 2, the vertices.
std::vector<Face> boundary_faces(const LatticeConfig& config, const std::vector<int>& members,
                                 const Polytope& poly) {
  std::vector<Face> out;
  for (const auto& h : poly.facets) {
    Face f;
    for (int m : members) {
      if (h(config.point(m)) == 0) f.members.push_back(m);
    }
    f.dim = poly.dim - 1;
    out.push_back(std::move(f));
  }
  if (poly.dim == 2) {
    for (int v : poly.vertices) out.push_back(Face{{v}, 0});
  }
  return out;
}

std::vector<int> affine_basis(const LatticeConfig& config, const std::vector<int>& members) {
  const int d = config.dim();
  std::vector<int> basis;
  RationalMatrix rows;
  for (int m : members) {
    RationalVector row;
    for (int j = 0; j < d; ++j) row.push_back(to_rational(config.point(m)[j]));
    row.push_back(1);
    auto trial = rows;
    trial.push_back(row);
    if (linalg::rank(trial) > static_cast<int>(rows.size())) {
      rows.push_back(std::move(row));
      basis.push_back(m);
      if (static_cast<int>(basis.size()) == d + 1) break;
    }
  }
  return basis;
}

// Affine coordinates of x with respect to an affine basis.
RationalVector barycentric(const LatticeConfig& config, const std::vector<int>& basis,
                           const IntVector& x) {
  const int d = config.dim();
  RationalMatrix a(d + 1, RationalVector(basis.size()));
  RationalVector b(d + 1);
  for (int j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < basis.size(); ++i) a[j][i] = to_rational(config.point(basis[i])[j]);
    b[j] = to_rational(x[j]);
  }
  for (std::size_t i = 0; i < basis.size(); ++i) a[d][i] = 1;
  b[d] = 1;
  auto sol = linalg::solve(a, b);
  if (!sol) throw std::logic_error("point outside the affine span of a facet");
  return *sol;
}

std::vector<Face> close_downward(const LatticeConfig& config,
                                 const std::vector<std::vector<int>>& facets) {
  std::set<Face> faces;
  for (const auto& f : facets) {
    faces.insert(Face{f, config.dim()});
    auto poly = facet_polytope(config, f);
    for (auto& g : boundary_faces(config, f, poly)) faces.insert(std::move(g));
  }
  return {faces.begin(), faces.end()};
}

}  // namespace

Decomposition::Decomposition(int dim, std::size_t num_points, std::vector<Face> faces, Source source)
    : dim_(dim), num_points_(num_points), faces_(std::move(faces)), source_(source) {
  std::sort(faces_.begin(), faces_.end());
}

std::vector<std::vector<int>> Decomposition::facets() const {
  std::vector<std::vector<int>> out;
  for (const auto& f : faces_) {
    if (f.dim == dim_) out.push_back(f.members);
  }
  return out;
}

std::vector<int> Decomposition::points_in_no_face() const {
  std::vector<bool> used(num_points_, false);
  for (const auto& f : faces_) {
    for (int m : f.members) used[m] = true;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < num_points_; ++i) {
    if (!used[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

AffineFunction facet_plane(const LatticeConfig& config, const std::vector<int>& facet,
                           const Lifting& lifting) {
  const int d = config.dim();
  auto basis = affine_basis(config, facet);
  RationalMatrix a;
  RationalVector b;
  for (int m : basis) {
    RationalVector row;
    for (int j = 0; j < d; ++j) row.push_back(to_rational(config.point(m)[j]));
    row.push_back(1);
    a.push_back(std::move(row));
    b.push_back(lifting[m]);
  }
  auto sol = linalg::solve(a, b);
  if (!sol) throw std::logic_error("facet is not affinely spanning");
  AffineFunction f;
  f.gradient.assign(sol->begin(), sol->begin() + d);
  f.constant = (*sol)[d];
  return f;
}

std::optional<Rational> bending_margin(const LatticeConfig& config,
                                       const std::vector<std::vector<int>>& facets,
                                       const Lifting& lifting) {
  std::optional<Rational> margin;
  for (const auto& f : facets) {
    auto plane = facet_plane(config, f, lifting);
    for (std::size_t a = 0; a < config.size(); ++a) {
      Rational gap = plane(config.point(a)) - lifting[a];
      if (contains(f, static_cast<int>(a))) {
        if (sgn(gap) != 0) return std::nullopt;
      } else if (!margin || gap < *margin) {
        margin = gap;
      }
    }
  }
  return margin.value_or(Rational(1));
}

Decomposition regular_decomposition(const LatticeConfig& config, const Lifting& lifting) {
  auto lifted = lift(config, lifting);
  std::vector<std::vector<int>> facets;
  for (const auto& f : lifted.upper_facets) facets.push_back(f.members);
  Decomposition dec(config.dim(), config.size(), close_downward(config, facets),
                    Decomposition::Source::FromLifting);
  dec.validated_ = true;
  dec.source_lifting = lifting;
  auto margin = bending_margin(config, dec.facets(), lifting);
  if (!margin || sgn(*margin) <= 0) throw std::logic_error("upper hull facets are not strictly bent");
  dec.regularity.status = Regularity::Status::Regular;
  dec.regularity.certificate = RegularWitness{lifting, *margin};
  return dec;
}

Decomposition validate_decomposition(const LatticeConfig& config,
                                     std::vector<std::vector<int>> faces) {
  const int d = config.dim();
  const auto base = convex_hull(config);

  std::vector<std::vector<int>> facets;
  std::vector<std::vector<int>> lower;
  for (auto& f : faces) {
    if (f.empty()) throw Error(ErrorCode::FaceNotSubset, "empty face");
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end()) {
      throw Error(ErrorCode::FaceNotSubset, "face " + describe(f) + " repeats a label");
    }
    for (int m : f) {
      if (m < 0 || static_cast<std::size_t>(m) >= config.size()) {
        throw Error(ErrorCode::FaceNotSubset, "face " + describe(f) + " has label " +
                                                  std::to_string(m) + " outside the configuration");
      }
    }
    if (config.subset(f).affine_dimension() == d) facets.push_back(f);
    else lower.push_back(f);
  }
  if (facets.empty()) throw Error(ErrorCode::CoverageGap, "no full-dimensional face given");
  std::sort(facets.begin(), facets.end());
  if (auto dup = std::adjacent_find(facets.begin(), facets.end()); dup != facets.end()) {
    throw Error(ErrorCode::OverlapViolation, "facet " + describe(*dup) + " is listed twice");
  }

  std::vector<Polytope> polys;
  for (const auto& f : facets) polys.push_back(facet_polytope(config, f));

  auto separated = [](const Polytope& p, const Polytope& q) {
    for (const auto& h : p.facets) {
      bool all_out = std::all_of(q.vertex_points.begin(), q.vertex_points.end(),
                                 [&](const IntVector& v) { return h(v) <= 0; });
      if (all_out) return true;
    }
    return false;
  };

  for (std::size_t i = 0; i < facets.size(); ++i) {
    for (std::size_t j = i + 1; j < facets.size(); ++j) {
      if (!separated(polys[i], polys[j]) && !separated(polys[j], polys[i])) {
        throw Error(ErrorCode::OverlapViolation,
                    "facets " + describe(facets[i]) + " and " + describe(facets[j]) + " overlap");
      }
    }
  }

  std::int64_t covered = 0;
  for (const auto& p : polys) covered += p.doubled_volume();
  if (covered != base.doubled_volume()) {
    throw Error(ErrorCode::CoverageGap, "facets cover " + std::to_string(covered) + "/" +
                                            std::to_string(base.doubled_volume()) +
                                            " of the (doubled) volume of the hull");
  }

  std::vector<std::vector<Face>> bfaces;
  for (std::size_t i = 0; i < facets.size(); ++i) bfaces.push_back(boundary_faces(config, facets[i], polys[i]));
  auto is_face_of = [&](std::size_t i, const std::vector<int>& s) {
    return std::any_of(bfaces[i].begin(), bfaces[i].end(), [&](const Face& f) { return f.members == s; });
  };

  for (std::size_t i = 0; i < facets.size(); ++i) {
    for (std::size_t j = i + 1; j < facets.size(); ++j) {
      std::vector<int> in_j, in_i;
      for (int m : facets[i]) {
        if (in_hull(polys[j], config.point(m))) in_j.push_back(m);
      }
      for (int m : facets[j]) {
        if (in_hull(polys[i], config.point(m))) in_i.push_back(m);
      }
      bool ok = in_j == in_i && (in_j.empty() || (is_face_of(i, in_j) && is_face_of(j, in_j)));
      if (!ok) {
        throw Error(ErrorCode::BadIntersection, "facets " + describe(facets[i]) + " and " +
                                                    describe(facets[j]) +
                                                    " do not meet in a common face");
      }
    }
  }

  for (const auto& f : lower) {
    bool found = false;
    for (std::size_t i = 0; i < facets.size() && !found; ++i) found = is_face_of(i, f);
    if (!found) {
      throw Error(ErrorCode::BadIntersection, "face " + describe(f) + " is not a face of any facet");
    }
  }

  Decomposition dec(d, config.size(), close_downward(config, facets),
                    Decomposition::Source::UserSupplied);
  dec.validated_ = true;
  return dec;
}

// The program solved here keeps only local rows: lambda affine on each facet,
// a strict bend across every interior ridge, and points in no face strictly
// below the facets whose hull contains them. On a convex domain, local
// concavity of the piecewise-affine function is global concavity, so these
// rows have a positive margin exactly when the full system does. Each local
// inequality is one of the full rows with l_F eliminated, so the Farkas
// multipliers transfer after solving for the equality multipliers.
RegularityCertificate certify_regularity(const LatticeConfig& config, Decomposition& decomposition) {
  if (!decomposition.validated()) {
    throw Error(ErrorCode::UnvalidatedInput, "decomposition must be validated first");
  }
  const int d = config.dim();
  const std::size_t n = config.size();
  const auto facets = decomposition.facets();
  const auto no_face = decomposition.points_in_no_face();

  std::vector<std::vector<int>> bases;
  std::vector<Polytope> polys;
  for (const auto& f : facets) {
    bases.push_back(affine_basis(config, f));
    polys.push_back(facet_polytope(config, f));
  }

  // Linear forms over lambda (length n).
  auto plane_form = [&](std::size_t fi, const IntVector& x) {
    RationalVector form(n, Rational(0));
    auto beta = barycentric(config, bases[fi], x);
    for (std::size_t i = 0; i < beta.size(); ++i) form[bases[fi][i]] += beta[i];
    return form;
  };

  struct Row {
    RationalVector form;  // inequality: form.lambda - eps >= 0; equality: form.lambda = 0
    ConstraintRef ref;
  };
  std::vector<Row> ineq, eq;

  for (std::size_t fi = 0; fi < facets.size(); ++fi) {
    for (int q : facets[fi]) {
      if (std::find(bases[fi].begin(), bases[fi].end(), q) != bases[fi].end()) continue;
      auto form = plane_form(fi, config.point(q));
      form[q] -= 1;
      eq.push_back({std::move(form), {static_cast<int>(fi), q}});
    }
  }
  for (std::size_t fi = 0; fi < facets.size(); ++fi) {
    for (std::size_t gi = 0; gi < facets.size(); ++gi) {
      if (fi == gi) continue;
      std::vector<int> shared;
      std::set_intersection(facets[fi].begin(), facets[fi].end(), facets[gi].begin(),
                            facets[gi].end(), std::back_inserter(shared));
      if (shared.empty() || config.subset(shared).affine_dimension() != d - 1) continue;
      for (int g : facets[gi]) {
        if (contains(facets[fi], g)) continue;
        auto form = plane_form(fi, config.point(g));
        form[g] -= 1;
        ineq.push_back({std::move(form), {static_cast<int>(fi), g}});
        break;
      }
    }
  }
  for (int c : no_face) {
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
      if (!in_hull(polys[fi], config.point(c))) continue;
      auto form = plane_form(fi, config.point(c));
      form[c] -= 1;
      ineq.push_back({std::move(form), {static_cast<int>(fi), c}});
    }
  }

  // Gauge: lambda = 0 on an affine basis of the first facet.
  std::vector<int> var_of(n, -1);
  int k = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (std::find(bases[0].begin(), bases[0].end(), static_cast<int>(a)) == bases[0].end()) var_of[a] = k++;
  }
  const int eps = k++;

  // Dual program: min u  s.t.  -sum y_g g + sum (z+ - z-) e + u e_eps = e_eps.
  const std::size_t ni = ineq.size(), ne = eq.size();
  const std::size_t cols = ni + 2 * ne + 1;
  RationalMatrix a(k, RationalVector(cols, Rational(0)));
  for (std::size_t g = 0; g < ni; ++g) {
    for (std::size_t l = 0; l < n; ++l) {
      if (var_of[l] >= 0 && sgn(ineq[g].form[l]) != 0) a[var_of[l]][g] = -ineq[g].form[l];
    }
    a[eps][g] = 1;
  }
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t l = 0; l < n; ++l) {
      if (var_of[l] >= 0 && sgn(eq[e].form[l]) != 0) {
        a[var_of[l]][ni + 2 * e] = eq[e].form[l];
        a[var_of[l]][ni + 2 * e + 1] = -eq[e].form[l];
      }
    }
  }
  a[eps][cols - 1] = 1;
  RationalVector b(k, Rational(0));
  b[eps] = 1;
  RationalVector cost(cols, Rational(0));
  cost[cols - 1] = 1;

  auto sol = lp::minimize(a, b, cost);
  if (sol.status != lp::Status::Optimal) throw std::logic_error("regularity program did not solve");

  if (sgn(sol.objective) > 0) {
    RationalVector lambda(n, Rational(0));
    for (std::size_t l = 0; l < n; ++l) {
      if (var_of[l] >= 0) lambda[l] = sol.dual[var_of[l]];
    }
    Lifting witness(std::move(lambda));
    auto margin = bending_margin(config, facets, witness);
    if (!margin || sgn(*margin) <= 0) throw std::logic_error("regularity witness failed re-check");
    RegularWitness w{std::move(witness), *margin};
    decomposition.regularity.status = Regularity::Status::Regular;
    decomposition.regularity.certificate = w;
    return w;
  }

  // Irregular: lift the local multipliers to the full row system.
  FarkasCertificate cert;
  const std::size_t nvars = n + facets.size() * (d + 1);
  auto full_row = [&](const ConstraintRef& r) {
    RationalVector v(nvars, Rational(0));
    std::size_t off = n + static_cast<std::size_t>(r.facet) * (d + 1);
    for (int j = 0; j < d; ++j) v[off + j] = to_rational(config.point(r.point)[j]);
    v[off + d] = 1;
    v[r.point] = -1;
    return v;
  };
  RationalVector target(nvars, Rational(0));
  for (std::size_t g = 0; g < ni; ++g) {
    if (sgn(sol.x[g]) == 0) continue;
    cert.inequalities.emplace_back(ineq[g].ref, sol.x[g]);
    auto row = full_row(ineq[g].ref);
    for (std::size_t v = 0; v < nvars; ++v) target[v] -= sol.x[g] * row[v];
  }
  std::vector<ConstraintRef> eq_refs;
  for (std::size_t fi = 0; fi < facets.size(); ++fi) {
    for (int m : facets[fi]) eq_refs.push_back({static_cast<int>(fi), m});
  }
  RationalMatrix e(nvars, RationalVector(eq_refs.size(), Rational(0)));
  for (std::size_t c = 0; c < eq_refs.size(); ++c) {
    auto row = full_row(eq_refs[c]);
    for (std::size_t v = 0; v < nvars; ++v) e[v][c] = row[v];
  }
  auto z = linalg::solve(e, target);
  if (!z) throw std::logic_error("Farkas multipliers do not lift to the full system");
  for (std::size_t c = 0; c < eq_refs.size(); ++c) {
    if (sgn((*z)[c]) != 0) cert.equalities.emplace_back(eq_refs[c], (*z)[c]);
  }
  if (!verify_certificate(config, decomposition, cert)) {
    throw std::logic_error("Farkas certificate failed re-check");
  }
  decomposition.regularity.status = Regularity::Status::Irregular;
  decomposition.regularity.certificate = cert;
  return cert;
}

bool verify_certificate(const LatticeConfig& config, const Decomposition& decomposition,
                        const FarkasCertificate& certificate) {
  const int d = config.dim();
  const std::size_t n = config.size();
  const auto facets = decomposition.facets();
  const std::size_t nvars = n + facets.size() * (d + 1);
  RationalVector form(nvars, Rational(0));

  auto accumulate = [&](const ConstraintRef& r, const Rational& mult) {
    std::size_t off = n + static_cast<std::size_t>(r.facet) * (d + 1);
    for (int j = 0; j < d; ++j) form[off + j] += mult * to_rational(config.point(r.point)[j]);
    form[off + d] += mult;
    form[r.point] -= mult;
  };
  auto valid_ref = [&](const ConstraintRef& r) {
    return r.facet >= 0 && static_cast<std::size_t>(r.facet) < facets.size() && r.point >= 0 &&
           static_cast<std::size_t>(r.point) < n;
  };

  Rational total = 0;
  for (const auto& [ref, y] : certificate.inequalities) {
    if (!valid_ref(ref) || contains(facets[ref.facet], ref.point) || sgn(y) < 0) return false;
    total += y;
    accumulate(ref, y);
  }
  if (total != 1) return false;
  for (const auto& [ref, z] : certificate.equalities) {
    if (!valid_ref(ref) || !contains(facets[ref.facet], ref.point)) return false;
    accumulate(ref, z);
  }
  return std::all_of(form.begin(), form.end(), [](const Rational& v) { return sgn(v) == 0; });
}

}  // namespace toric
