#include "toric/lattice.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "toric/error.hpp"
#include "toric/linalg.hpp"

namespace toric {

namespace {

std::int64_t cross(const IntVector& o, const IntVector& a, const IntVector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::int64_t gcd_all(const IntVector& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  return g;
}

FacetInequality edge_inequality(const IntVector& p, const IntVector& q) {
  // Inward (left) normal of the ccw edge p -> q.
  IntVector n{-(q[1] - p[1]), q[0] - p[0]};
  auto g = gcd_all(n);
  n[0] /= g;
  n[1] /= g;
  return {n, -(n[0] * p[0] + n[1] * p[1])};
}

RationalVector to_rational_vector(const IntVector& v) {
  RationalVector out;
  out.reserve(v.size());
  for (auto x : v) out.push_back(to_rational(x));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LatticeConfig

LatticeConfig::LatticeConfig(int dim, std::vector<IntVector> points)
    : dim_(dim), points_(std::move(points)) {
  if (dim_ < 1) throw Error(ErrorCode::InvalidConfig, "dimension must be positive");
  std::set<IntVector> seen;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<int>(points_[i].size()) != dim_) {
      throw Error(ErrorCode::InvalidConfig,
                  "point " + std::to_string(i) + " has wrong dimension");
    }
    if (!seen.insert(points_[i]).second) {
      throw Error(ErrorCode::InvalidConfig,
                  "point " + std::to_string(i) + " is repeated");
    }
  }
}

LatticeConfig LatticeConfig::subset(std::span<const int> labels) const {
  std::vector<IntVector> pts;
  pts.reserve(labels.size());
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= points_.size()) {
      throw Error(ErrorCode::FaceNotSubset, "label " + std::to_string(l) + " out of range");
    }
    pts.push_back(points_[l]);
  }
  return LatticeConfig(dim_, std::move(pts));
}

int LatticeConfig::affine_dimension() const {
  if (points_.empty()) return -1;
  RationalMatrix diffs;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    RationalVector row(dim_);
    for (int k = 0; k < dim_; ++k) row[k] = to_rational(points_[i][k] - points_[0][k]);
    diffs.push_back(std::move(row));
  }
  return linalg::rank(std::move(diffs));
}

// ---------------------------------------------------------------------------
// FacetInequality

std::int64_t FacetInequality::operator()(const IntVector& x) const {
  std::int64_t v = offset;
  for (std::size_t i = 0; i < normal.size(); ++i) v += normal[i] * x[i];
  return v;
}

Rational FacetInequality::operator()(std::span<const Rational> x) const {
  Rational v = to_rational(offset);
  for (std::size_t i = 0; i < normal.size(); ++i) v += to_rational(normal[i]) * x[i];
  return v;
}

double FacetInequality::evaluate(std::span<const double> x) const {
  double v = static_cast<double>(offset);
  for (std::size_t i = 0; i < normal.size(); ++i) v += static_cast<double>(normal[i]) * x[i];
  return v;
}

// ---------------------------------------------------------------------------
// AffineChart

AffineChart AffineChart::of(const LatticeConfig& config) {
  if (config.empty()) throw Error(ErrorCode::EmptyConfig, "configuration is empty");
  const int d = config.dim();
  AffineChart chart;
  chart.ambient_dim_ = d;

  const int k = config.affine_dimension();
  if (k == d) {
    chart.identity_ = true;
    chart.origin_.assign(d, 0);
    for (int i = 0; i < d; ++i) {
      IntVector e(d, 0);
      e[i] = 1;
      chart.basis_.push_back(e);
    }
  } else {
    chart.identity_ = false;
    chart.origin_ = config.point(0);
    RationalMatrix diffs;
    for (std::size_t i = 1; i < config.size(); ++i) {
      RationalVector row(d);
      for (int j = 0; j < d; ++j) row[j] = to_rational(config.point(i)[j] - config.point(0)[j]);
      diffs.push_back(std::move(row));
    }
    // The span is the common kernel of its orthogonal complement; the
    // integer kernel of that complement is a basis of the saturated lattice.
    auto complement = linalg::nullspace(diffs, d);
    linalg::IntegerMatrix normals;
    for (const auto& v : complement) normals.push_back(linalg::primitive_integer_vector(v));
    auto kernel = linalg::integer_kernel(normals, d);
    for (const auto& v : kernel) {
      IntVector b(d);
      for (int j = 0; j < d; ++j) b[j] = v[j].get_si();
      chart.basis_.push_back(std::move(b));
    }
  }

  // Left inverse: pick k independent ambient coordinates and invert there.
  const int kk = static_cast<int>(chart.basis_.size());
  std::vector<int> rows;
  RationalMatrix picked;
  for (int j = 0; j < d && static_cast<int>(rows.size()) < kk; ++j) {
    RationalVector row(kk);
    for (int c = 0; c < kk; ++c) row[c] = to_rational(chart.basis_[c][j]);
    auto trial = picked;
    trial.push_back(row);
    if (linalg::rank(trial) > static_cast<int>(picked.size())) {
      picked.push_back(row);
      rows.push_back(j);
    }
  }
  chart.left_inverse_exact_.assign(kk, RationalVector(d, Rational(0)));
  for (int c = 0; c < kk; ++c) {
    RationalVector e(kk, Rational(0));
    e[c] = 1;
    // Column c of picked^{-1}: solve picked * x = e_c.
    auto col = linalg::solve(picked, e);
    for (int r = 0; r < kk; ++r) chart.left_inverse_exact_[r][rows[c]] = (*col)[r];
  }
  chart.left_inverse_.assign(kk, std::vector<double>(d, 0.0));
  for (int r = 0; r < kk; ++r) {
    for (int j = 0; j < d; ++j) chart.left_inverse_[r][j] = chart.left_inverse_exact_[r][j].get_d();
  }
  return chart;
}

IntVector AffineChart::to_local(const IntVector& p) const {
  if (identity_) return p;
  const int d = ambient_dim_;
  IntVector out(basis_.size());
  for (std::size_t r = 0; r < basis_.size(); ++r) {
    Rational acc = 0;
    for (int j = 0; j < d; ++j) acc += left_inverse_exact_[r][j] * to_rational(p[j] - origin_[j]);
    if (!is_integer(acc)) throw Error(ErrorCode::InvalidConfig, "point is not on the chart lattice");
    out[r] = acc.get_num().get_si();
  }
  for (int j = 0; j < d; ++j) {
    std::int64_t v = origin_[j];
    for (std::size_t r = 0; r < basis_.size(); ++r) v += out[r] * basis_[r][j];
    if (v != p[j]) throw Error(ErrorCode::InvalidConfig, "point is not on the affine span");
  }
  return out;
}

std::vector<double> AffineChart::to_local(std::span<const double> x) const {
  if (identity_) return {x.begin(), x.end()};
  std::vector<double> out(basis_.size(), 0.0);
  for (std::size_t r = 0; r < basis_.size(); ++r) {
    for (int j = 0; j < ambient_dim_; ++j) {
      out[r] += left_inverse_[r][j] * (x[j] - static_cast<double>(origin_[j]));
    }
  }
  return out;
}

std::vector<double> AffineChart::to_global(std::span<const double> u) const {
  if (identity_) return {u.begin(), u.end()};
  std::vector<double> out(ambient_dim_);
  for (int j = 0; j < ambient_dim_; ++j) {
    double v = static_cast<double>(origin_[j]);
    for (std::size_t r = 0; r < basis_.size(); ++r) v += u[r] * static_cast<double>(basis_[r][j]);
    out[j] = v;
  }
  return out;
}

LatticeConfig AffineChart::localize(const LatticeConfig& config) const {
  if (identity_) return config;
  std::vector<IntVector> pts;
  for (const auto& p : config.points()) pts.push_back(to_local(p));
  // A zero-dimensional chart still needs a positive ambient dimension.
  if (basis_.empty()) {
    for (auto& p : pts) p = IntVector{0};
    return LatticeConfig(1, std::move(pts));
  }
  return LatticeConfig(intrinsic_dim(), std::move(pts));
}

// ---------------------------------------------------------------------------
// Convex hull

std::vector<int> hull_2d(const LatticeConfig& config, std::span<const int> labels) {
  std::vector<int> idx(labels.begin(), labels.end());
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return config.point(a) < config.point(b); });
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.size() < 3) return idx;
  std::vector<int> hull(2 * idx.size());
  std::size_t k = 0;
  for (int i : idx) {
    while (k >= 2 && cross(config.point(hull[k - 2]), config.point(hull[k - 1]), config.point(i)) <= 0) --k;
    hull[k++] = i;
  }
  for (std::size_t j = idx.size() - 1, t = k + 1; j-- > 0;) {
    int i = idx[j];
    while (k >= t && cross(config.point(hull[k - 2]), config.point(hull[k - 1]), config.point(i)) <= 0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

std::int64_t Polytope::doubled_volume() const {
  if (dim == 1) return vertex_points[1][0] - vertex_points[0][0];
  std::int64_t twice = 0;
  for (std::size_t i = 0; i < vertex_points.size(); ++i) {
    const auto& p = vertex_points[i];
    const auto& q = vertex_points[(i + 1) % vertex_points.size()];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return twice;
}

Polytope convex_hull(const LatticeConfig& config) {
  if (config.empty()) throw Error(ErrorCode::EmptyConfig, "configuration is empty");
  const int d = config.dim();
  if (config.affine_dimension() < d) {
    throw Error(ErrorCode::DegenerateSpan,
                "points span an affine space of dimension " +
                    std::to_string(config.affine_dimension()) + " < " + std::to_string(d));
  }
  Polytope poly;
  poly.dim = d;
  if (d == 1) {
    int lo = 0, hi = 0;
    for (std::size_t i = 1; i < config.size(); ++i) {
      if (config.point(i)[0] < config.point(lo)[0]) lo = static_cast<int>(i);
      if (config.point(i)[0] > config.point(hi)[0]) hi = static_cast<int>(i);
    }
    poly.vertices = {lo, hi};
    poly.vertex_points = {config.point(lo), config.point(hi)};
    poly.facets = {{{1}, -config.point(lo)[0]}, {{-1}, config.point(hi)[0]}};
    return poly;
  }
  if (d != 2) {
    throw Error(ErrorCode::Unsupported, "convex hulls are implemented for d <= 2");
  }
  std::vector<int> all(config.size());
  std::iota(all.begin(), all.end(), 0);
  poly.vertices = hull_2d(config, all);
  for (int v : poly.vertices) poly.vertex_points.push_back(config.point(v));
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    const auto& p = poly.vertex_points[i];
    const auto& q = poly.vertex_points[(i + 1) % poly.vertices.size()];
    poly.facets.push_back(edge_inequality(p, q));
  }
  return poly;
}

FaceLocation face_membership(const Polytope& poly, std::span<const Rational> x) {
  FaceLocation loc;
  for (std::size_t i = 0; i < poly.facets.size(); ++i) {
    int s = sgn(poly.facets[i](x));
    if (s < 0) {
      loc.kind = FaceLocation::Kind::Outside;
      loc.tight_facets.clear();
      return loc;
    }
    if (s == 0) loc.tight_facets.push_back(static_cast<int>(i));
  }
  RationalMatrix normals;
  for (int f : loc.tight_facets) normals.push_back(to_rational_vector(poly.facets[f].normal));
  loc.dim = poly.dim - linalg::rank(normals);
  if (loc.tight_facets.empty()) {
    loc.kind = FaceLocation::Kind::Interior;
  } else if (loc.dim == 0) {
    loc.kind = FaceLocation::Kind::Vertex;
    for (std::size_t v = 0; v < poly.vertex_points.size(); ++v) {
      bool same = true;
      for (int j = 0; j < poly.dim; ++j) same = same && x[j] == to_rational(poly.vertex_points[v][j]);
      if (same) loc.vertex = poly.vertices[v];
    }
  } else {
    loc.kind = FaceLocation::Kind::Boundary;
  }
  return loc;
}

// ---------------------------------------------------------------------------
// Lifting

Lifting Lifting::negated() const {
  RationalVector v = values_;
  for (auto& x : v) x = -x;
  return Lifting(std::move(v));
}

Rational AffineFunction::operator()(const IntVector& x) const {
  Rational v = constant;
  for (std::size_t i = 0; i < gradient.size(); ++i) v += gradient[i] * to_rational(x[i]);
  return v;
}

std::vector<int> LiftedPolytope::points_below() const {
  std::vector<bool> on(base.size(), false);
  for (const auto& f : upper_facets) {
    for (int m : f.members) on[m] = true;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < on.size(); ++i) {
    if (!on[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

// Upper hull of (x, lambda) in d = 1; merges collinear runs.
std::vector<UpperFacet> upper_facets_1d(const LatticeConfig& config, const Lifting& lifting) {
  std::vector<int> idx(config.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return config.point(a)[0] < config.point(b)[0]; });
  auto x = [&](int l) { return to_rational(config.point(l)[0]); };
  // Upper chain: pop while the middle point is on or below the chord.
  std::vector<int> chain;
  for (int l : idx) {
    while (chain.size() >= 2) {
      int a = chain[chain.size() - 2];
      int b = chain.back();
      Rational turn = (x(b) - x(a)) * (lifting[l] - lifting[a]) - (lifting[b] - lifting[a]) * (x(l) - x(a));
      if (sgn(turn) >= 0) chain.pop_back();
      else break;
    }
    chain.push_back(l);
  }
  std::vector<UpperFacet> facets;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    int a = chain[i], b = chain[i + 1];
    Rational slope = (lifting[b] - lifting[a]) / (x(b) - x(a));
    UpperFacet f;
    f.plane.gradient = {slope};
    f.plane.constant = lifting[a] - slope * x(a);
    for (int l : idx) {
      if (x(l) >= x(a) && x(l) <= x(b) && f.plane(config.point(l)) == lifting[l]) f.members.push_back(l);
    }
    std::sort(f.members.begin(), f.members.end());
    f.boundary = {a, b};
    facets.push_back(std::move(f));
  }
  return facets;
}

// Gift wrapping over the upper hull in d = 2. Each query (u, v) asks for
// the upper facet lying to the left of the lifted edge u -> v.
std::vector<UpperFacet> upper_facets_2d(const LatticeConfig& config, const Lifting& lifting,
                                        const Polytope& base) {
  const auto n = config.size();
  auto pt = [&](int l) -> const IntVector& { return config.point(l); };

  auto on_base_boundary = [&](int p, int q) {
    for (const auto& h : base.facets) {
      if (h(pt(p)) == 0 && h(pt(q)) == 0) return true;
    }
    return false;
  };

  // Affine function through the lifts of u and v with left-slope sigma.
  auto plane_through = [&](int u, int v, const Rational& sigma) {
    const auto& pu = pt(u);
    const auto& pv = pt(v);
    Rational dx = to_rational(pv[0] - pu[0]);
    Rational dy = to_rational(pv[1] - pu[1]);
    Rational len2 = dx * dx + dy * dy;
    Rational rise = (lifting[v] - lifting[u]) / len2;
    // l0(x) = lambda_u + rise * (x - u).(v - u);  cross(x) = dx*(y-uy) - dy*(x-ux)
    AffineFunction f;
    f.gradient = {rise * dx - sigma * dy, rise * dy + sigma * dx};
    f.constant = lifting[u] - f.gradient[0] * to_rational(pu[0]) - f.gradient[1] * to_rational(pu[1]);
    return f;
  };

  auto find_facet = [&](int u, int v) {
    const auto& pu = pt(u);
    const auto& pv = pt(v);
    AffineFunction base_line = plane_through(u, v, Rational(0));
    std::optional<Rational> best;
    for (std::size_t s = 0; s < n; ++s) {
      auto c = cross(pu, pv, pt(static_cast<int>(s)));
      if (c <= 0) continue;
      Rational sigma = (lifting[s] - base_line(pt(static_cast<int>(s)))) / to_rational(c);
      if (!best || sigma > *best) best = sigma;
    }
    if (!best) throw std::logic_error("upper hull query has no points on its left");
    return plane_through(u, v, *best);
  };

  std::vector<UpperFacet> facets;
  std::set<std::pair<int, int>> covered;
  std::deque<std::pair<int, int>> queue;

  // Seed: first segment of the 1D upper hull along the first base edge.
  {
    const auto& h = base.facets.front();
    int v0 = base.vertices[0];
    int v1 = base.vertices[1 % base.vertices.size()];
    std::vector<int> on_edge;
    for (std::size_t l = 0; l < n; ++l) {
      if (h(pt(static_cast<int>(l))) == 0) on_edge.push_back(static_cast<int>(l));
    }
    auto along = [&](int l) {
      return (pt(l)[0] - pt(v0)[0]) * (pt(v1)[0] - pt(v0)[0]) + (pt(l)[1] - pt(v0)[1]) * (pt(v1)[1] - pt(v0)[1]);
    };
    std::sort(on_edge.begin(), on_edge.end(), [&](int a, int b) { return along(a) < along(b); });
    int next = -1;
    std::optional<Rational> best_slope;
    for (int l : on_edge) {
      if (l == v0) continue;
      Rational slope = (lifting[l] - lifting[v0]) / to_rational(along(l));
      // Largest slope wins; ties go to the farthest point.
      if (!best_slope || slope >= *best_slope) {
        best_slope = slope;
        next = l;
      }
    }
    queue.emplace_back(v0, next);
  }

  while (!queue.empty()) {
    auto [u, v] = queue.front();
    queue.pop_front();
    if (covered.count({u, v})) continue;
    UpperFacet f;
    f.plane = find_facet(u, v);
    for (std::size_t l = 0; l < n; ++l) {
      Rational value = f.plane(pt(static_cast<int>(l)));
      int s = sgn(lifting[l] - value);
      if (s > 0) throw std::logic_error("upper hull plane is not supporting");
      if (s == 0) f.members.push_back(static_cast<int>(l));
    }
    f.boundary = hull_2d(config, f.members);
    covered.emplace(u, v);
    for (std::size_t i = 0; i < f.boundary.size(); ++i) {
      int p = f.boundary[i];
      int q = f.boundary[(i + 1) % f.boundary.size()];
      covered.emplace(p, q);
    }
    for (std::size_t i = 0; i < f.boundary.size(); ++i) {
      int p = f.boundary[i];
      int q = f.boundary[(i + 1) % f.boundary.size()];
      if (!on_base_boundary(p, q) && !covered.count({q, p})) queue.emplace_back(q, p);
    }
    facets.push_back(std::move(f));
  }
  return facets;
}

}  // namespace

LiftedPolytope lift(const LatticeConfig& config, const Lifting& lifting) {
  if (lifting.size() != config.size()) {
    throw Error(ErrorCode::MissingLiftValue,
                "lifting has " + std::to_string(lifting.size()) + " values for " +
                    std::to_string(config.size()) + " points");
  }
  LiftedPolytope lp;
  lp.base = config;
  lp.lifting = lifting;
  lp.base_hull = convex_hull(config);
  if (config.dim() == 1) {
    lp.upper_facets = upper_facets_1d(config, lifting);
  } else {
    lp.upper_facets = upper_facets_2d(config, lifting, lp.base_hull);
  }
  std::sort(lp.upper_facets.begin(), lp.upper_facets.end(),
            [](const UpperFacet& a, const UpperFacet& b) { return a.members < b.members; });
  return lp;
}

}  // namespace toric
