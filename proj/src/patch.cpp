#include "toric/patch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "toric/error.hpp"
#include "toric/linalg.hpp"
#include "toric/lp.hpp"

namespace toric {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_or_neg_inf(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

// exp(c) with exp(-inf) = 0 spelled out.
double safe_exp(double c) { return c == kNegInf ? 0.0 : std::exp(c); }

// Exact facet values at x for the identity-chart configuration; throws
// OutsideDomain if x is not in the hull.
std::vector<Rational> exact_facet_values(const Polytope& domain, std::span<const double> x) {
  std::vector<Rational> rx;
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::OutsideDomain, "non-finite coordinate");
    rx.emplace_back(v);
  }
  if (face_membership(domain, rx).kind == FaceLocation::Kind::Outside) {
    throw Error(ErrorCode::OutsideDomain, "point lies outside the patch domain");
  }
  std::vector<Rational> h;
  for (const auto& f : domain.facets) h.push_back(f(std::span<const Rational>(rx)));
  return h;
}

std::vector<double> exact_basis(const LatticeConfig& config, std::span<const double> x) {
  if (static_cast<int>(x.size()) != config.dim()) {
    throw Error(ErrorCode::OutsideDomain, "point has dimension " + std::to_string(x.size()) +
                                              ", configuration has " + std::to_string(config.dim()));
  }
  if (config.size() == 1) {
    for (int j = 0; j < config.dim(); ++j) {
      if (x[j] != static_cast<double>(config.point(0)[j])) {
        throw Error(ErrorCode::OutsideDomain, "point differs from the single configuration point");
      }
    }
    return {1.0};
  }
  if (config.affine_dimension() < config.dim()) {
    // Lower-dimensional configurations are evaluated in their own chart.
    ToricBasis basis(config);
    auto u = basis.chart().to_local(x);
    auto back = basis.chart().to_global(u);
    for (int j = 0; j < config.dim(); ++j) {
      if (std::abs(back[j] - x[j]) > 1e-12 * (1.0 + std::abs(x[j]))) {
        throw Error(ErrorCode::OutsideDomain, "point is off the affine span of the configuration");
      }
    }
    return exact_basis(basis.chart().localize(config), u);
  }
  const Polytope domain = convex_hull(config);
  const auto h = exact_facet_values(domain, x);
  std::vector<double> out(config.size(), 1.0);
  for (std::size_t a = 0; a < config.size(); ++a) {
    for (std::size_t e = 0; e < h.size(); ++e) {
      const std::int64_t k = domain.facets[e](config.point(a));
      if (k == 0) continue;  // 0^0 = 1
      out[a] *= std::pow(h[e].get_d(), static_cast<double>(k));
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ToricBasis

ToricBasis::ToricBasis(const LatticeConfig& config)
    : config_(config), chart_(AffineChart::of(config)) {
  if (config_.size() == 1) return;
  const LatticeConfig local = chart_.localize(config_);
  domain_ = convex_hull(local);
  facets_ = domain_.facets;
  exponents_.resize(local.size() * facets_.size());
  for (std::size_t a = 0; a < local.size(); ++a) {
    for (std::size_t e = 0; e < facets_.size(); ++e) {
      exponents_[a * facets_.size() + e] = facets_[e](local.point(a));
    }
  }
  for (const auto& f : facets_) scale_ = std::max(scale_, static_cast<double>(std::abs(f.offset)));
}

void ToricBasis::log_facet_values(std::span<const double> u, std::span<double> out,
                                  double slack) const {
  for (std::size_t e = 0; e < facets_.size(); ++e) {
    double h = facets_[e].evaluate(u);
    if (!(h >= -slack * scale_)) {
      throw Error(ErrorCode::OutsideDomain, "point violates a domain inequality by " + std::to_string(-h));
    }
    out[e] = log_or_neg_inf(h);
  }
}

void ToricBasis::log_basis(std::span<const double> u, std::span<double> out, double slack) const {
  const std::size_t nf = facets_.size();
  double logh[64];
  std::vector<double> heap;
  double* lh = logh;
  if (nf > 64) {
    heap.resize(nf);
    lh = heap.data();
  }
  log_facet_values(u, std::span<double>(lh, nf), slack);
  for (std::size_t a = 0; a < config_.size(); ++a) {
    double acc = 0.0;
    const std::int64_t* k = exponents_.data() + a * nf;
    for (std::size_t e = 0; e < nf; ++e) {
      if (k[e] == 0) continue;
      acc += static_cast<double>(k[e]) * lh[e];
    }
    out[a] = acc;
  }
}

// ---------------------------------------------------------------------------
// PatchSpec

PatchSpec::PatchSpec(LatticeConfig config, std::vector<double> weights,
                     std::vector<Point> control_points)
    : basis_(config), weights_(std::move(weights)), control_points_(std::move(control_points)) {
  const std::size_t n = basis_.size();
  if (weights_.size() != n) {
    throw Error(ErrorCode::InvalidPatch, std::to_string(weights_.size()) + " weights for " +
                                             std::to_string(n) + " points");
  }
  if (control_points_.size() != n) {
    throw Error(ErrorCode::InvalidPatch, std::to_string(control_points_.size()) +
                                             " control points for " + std::to_string(n) + " points");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!(weights_[a] > 0.0) || !std::isfinite(weights_[a])) {
      throw Error(ErrorCode::InvalidPatch, "weight " + std::to_string(a) + " is not positive");
    }
  }
  image_dim_ = static_cast<int>(control_points_.front().size());
  if (image_dim_ == 0) throw Error(ErrorCode::InvalidPatch, "control points have dimension 0");
  for (const auto& b : control_points_) {
    if (static_cast<int>(b.size()) != image_dim_) {
      throw Error(ErrorCode::InvalidPatch, "control points have mixed dimensions");
    }
    for (double v : b) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidPatch, "non-finite control point");
    }
  }
}

PatchSpec PatchSpec::restrict_to(std::span<const int> labels) const {
  std::vector<double> w;
  std::vector<Point> b;
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= weights_.size()) {
      throw Error(ErrorCode::FaceNotSubset, "label " + std::to_string(l) + " is not in the patch");
    }
    w.push_back(weights_[l]);
    b.push_back(control_points_[l]);
  }
  return PatchSpec(config().subset(labels), std::move(w), std::move(b));
}

PatchSpec PatchSpec::with_weights(std::vector<double> weights) const {
  return PatchSpec(config(), std::move(weights), control_points_);
}

// ---------------------------------------------------------------------------
// Evaluation

double toric_basis(const LatticeConfig& config, int label, std::span<const double> x) {
  if (label < 0 || static_cast<std::size_t>(label) >= config.size()) {
    throw Error(ErrorCode::FaceNotSubset, "label " + std::to_string(label) + " out of range");
  }
  return exact_basis(config, x)[label];
}

SimplexPoint beta_map(const LatticeConfig& config, std::span<const double> x) {
  SimplexPoint z{exact_basis(config, x)};
  double s = 0.0;
  for (double v : z.z) s += v;
  for (double& v : z.z) v /= s;
  return z;
}

SimplexPoint weight_action(std::span<const double> weights, const SimplexPoint& z) {
  SimplexPoint out{std::vector<double>(z.z.size())};
  double s = 0.0;
  for (std::size_t a = 0; a < z.z.size(); ++a) {
    out.z[a] = weights[a] * z.z[a];
    s += out.z[a];
  }
  for (double& v : out.z) v /= s;
  return out;
}

Point project(std::span<const Point> control_points, const SimplexPoint& z) {
  Point out(control_points.front().size(), 0.0);
  for (std::size_t a = 0; a < z.z.size(); ++a) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += z.z[a] * control_points[a][j];
  }
  return out;
}

void blend_coefficients(const ToricBasis& basis, std::span<const double> log_weights,
                        std::span<const double> u, std::span<double> out) {
  const std::size_t n = basis.size();
  if (n == 1) {
    out[0] = 1.0;
    return;
  }
  basis.log_basis(u, out);
  double top = kNegInf;
  for (std::size_t a = 0; a < n; ++a) {
    out[a] += log_weights[a];
    top = std::max(top, out[a]);
  }
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    out[a] = safe_exp(out[a] - top);
    s += out[a];
  }
  for (std::size_t a = 0; a < n; ++a) out[a] /= s;
}

Point evaluate(const PatchSpec& spec, std::span<const double> x) {
  const auto& basis = spec.basis();
  if (static_cast<int>(x.size()) != spec.config().dim()) {
    throw Error(ErrorCode::OutsideDomain, "point has the wrong dimension");
  }
  auto u = basis.chart().to_local(x);
  if (!basis.chart().is_identity()) {
    auto back = basis.chart().to_global(u);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (std::abs(back[j] - x[j]) > 1e-9 * (1.0 + std::abs(x[j]))) {
        throw Error(ErrorCode::OutsideDomain, "point is off the affine span of the configuration");
      }
    }
  }
  std::vector<double> logw(spec.weights().size());
  for (std::size_t a = 0; a < logw.size(); ++a) logw[a] = std::log(spec.weights()[a]);
  std::vector<double> c(basis.size());
  blend_coefficients(basis, logw, u, c);
  return project(spec.control_points(), SimplexPoint{std::move(c)});
}

// ---------------------------------------------------------------------------
// Classical configurations

LatticeConfig bezier_curve(int d) {
  if (d <= 0) throw Error(ErrorCode::ZeroDegree, "degree must be positive");
  std::vector<IntVector> pts;
  for (int i = 0; i <= d; ++i) pts.push_back({i});
  return LatticeConfig(1, std::move(pts));
}

LatticeConfig tensor_patch(int c, int d) {
  if (c <= 0 || d <= 0) throw Error(ErrorCode::ZeroDegree, "bidegree must be positive");
  std::vector<IntVector> pts;
  for (int j = 0; j <= d; ++j) {
    for (int i = 0; i <= c; ++i) pts.push_back({i, j});
  }
  return LatticeConfig(2, std::move(pts));
}

LatticeConfig triangle_patch(int d) {
  if (d <= 0) throw Error(ErrorCode::ZeroDegree, "degree must be positive");
  std::vector<IntVector> pts;
  for (int j = 0; j <= d; ++j) {
    for (int i = 0; i + j <= d; ++i) pts.push_back({i, j});
  }
  return LatticeConfig(2, std::move(pts));
}

// ---------------------------------------------------------------------------
// Binomial relations

void validate_relation(const LatticeConfig& config, const BinomialRelation& relation) {
  const std::size_t n = config.size();
  if (relation.alpha.size() != n || relation.beta.size() != n) {
    throw Error(ErrorCode::InvalidRelation, "coefficient vectors must have one entry per point");
  }
  Rational sa = 0, sb = 0;
  RationalVector moment(config.dim(), Rational(0));
  for (std::size_t a = 0; a < n; ++a) {
    if (sgn(relation.alpha[a]) < 0 || sgn(relation.beta[a]) < 0) {
      throw Error(ErrorCode::InvalidRelation, "negative coefficient at label " + std::to_string(a));
    }
    sa += relation.alpha[a];
    sb += relation.beta[a];
    for (int j = 0; j < config.dim(); ++j) {
      moment[j] += (relation.alpha[a] - relation.beta[a]) * to_rational(config.point(a)[j]);
    }
  }
  if (sa != 1 || sb != 1) throw Error(ErrorCode::InvalidRelation, "coefficients must sum to 1");
  for (const auto& m : moment) {
    if (sgn(m) != 0) throw Error(ErrorCode::InvalidRelation, "the two combinations differ");
  }
}

std::vector<BinomialRelation> spanning_relations(const LatticeConfig& config) {
  const std::size_t n = config.size();
  linalg::IntegerMatrix m(config.dim() + 1, std::vector<Integer>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (int j = 0; j < config.dim(); ++j) m[j][a] = Integer(static_cast<long>(config.point(a)[j]));
    m[config.dim()][a] = 1;
  }
  std::vector<BinomialRelation> out;
  for (const auto& v : linalg::integer_kernel(m, n)) {
    BinomialRelation r{RationalVector(n, Rational(0)), RationalVector(n, Rational(0))};
    Integer pos = 0;
    for (const auto& c : v) {
      if (sgn(c) > 0) pos += c;
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (sgn(v[a]) > 0) r.alpha[a] = Rational(v[a], pos);
      else if (sgn(v[a]) < 0) r.beta[a] = Rational(Integer(-v[a]), pos);
      r.alpha[a].canonicalize();
      r.beta[a].canonicalize();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<BinomialRelation> hull_intersection_relation(const LatticeConfig& config,
                                                           std::span<const int> f,
                                                           std::span<const int> g) {
  const int d = config.dim();
  const std::size_t nf = f.size(), ng = g.size();
  RationalMatrix a(d + 2, RationalVector(nf + ng, Rational(0)));
  RationalVector b(d + 2, Rational(0));
  for (std::size_t i = 0; i < nf; ++i) {
    for (int j = 0; j < d; ++j) a[j][i] = to_rational(config.point(f[i])[j]);
    a[d][i] = 1;
  }
  for (std::size_t i = 0; i < ng; ++i) {
    for (int j = 0; j < d; ++j) a[j][nf + i] = -to_rational(config.point(g[i])[j]);
    a[d + 1][nf + i] = 1;
  }
  b[d] = 1;
  b[d + 1] = 1;
  auto sol = lp::minimize(a, b, RationalVector(nf + ng, Rational(0)));
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  BinomialRelation r{RationalVector(config.size(), Rational(0)),
                     RationalVector(config.size(), Rational(0))};
  for (std::size_t i = 0; i < nf; ++i) r.alpha[f[i]] += sol.x[i];
  for (std::size_t i = 0; i < ng; ++i) r.beta[g[i]] += sol.x[nf + i];
  return r;
}

double check_binomial_relations(const PatchSpec& spec, std::span<const BinomialRelation> relations,
                                std::span<const Point> samples) {
  const std::size_t n = spec.config().size();
  std::vector<std::vector<double>> alpha, beta;
  for (const auto& r : relations) {
    validate_relation(spec.config(), r);
    std::vector<double> al(n), be(n);
    for (std::size_t a = 0; a < n; ++a) {
      al[a] = r.alpha[a].get_d();
      be[a] = r.beta[a].get_d();
    }
    alpha.push_back(std::move(al));
    beta.push_back(std::move(be));
  }
  std::vector<double> logw(n);
  for (std::size_t a = 0; a < n; ++a) logw[a] = std::log(spec.weights()[a]);

  // Sum of coef * log(v) with 0 * log(0) = 0.
  auto weighted_log = [&](const std::vector<double>& coef, const std::vector<double>& logv) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (coef[a] != 0.0) s += coef[a] * logv[a];
    }
    return s;
  };

  double worst = 0.0;
  std::vector<double> z(n), logz(n);
  for (const auto& x : samples) {
    auto u = spec.basis().chart().to_local(x);
    blend_coefficients(spec.basis(), logw, u, z);
    for (std::size_t a = 0; a < n; ++a) logz[a] = log_or_neg_inf(z[a]);
    for (std::size_t r = 0; r < alpha.size(); ++r) {
      double lhs = safe_exp(weighted_log(alpha[r], logz) + weighted_log(beta[r], logw));
      double rhs = safe_exp(weighted_log(beta[r], logz) + weighted_log(alpha[r], logw));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace toric
