#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "toric/error.hpp"
#include "toric/patch.hpp"

using namespace toric;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

std::vector<Rational> q(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* s : xs) out.push_back(parse_rational(s));
  return out;
}

PatchSpec cubic_spec() {
  return PatchSpec(bezier_curve(3), {1, 4, 4, 1}, {{0, 0}, {3.5, 3.5}, {-0.5, 2.5}, {3, 0}});
}

PatchSpec bicubic_spec() {
  const double h[16] = {0, 1, 1, 0, 1, 3, 2, 1, 1, 2, 3, 1, 0, 1, 1, 0};
  const double b[4] = {1, 3, 3, 1};
  std::vector<double> w;
  std::vector<Point> pts;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      w.push_back(b[i] * b[j]);
      pts.push_back({double(i), double(j), h[j * 4 + i]});
    }
  }
  return PatchSpec(tensor_patch(3, 3), w, pts);
}

}  // namespace

TEST_CASE("toric basis on a segment is the binomial-free Bernstein basis") {
  auto c = bezier_curve(3);
  for (double x : {0.0, 0.25, 1.0, 1.5, 2.9, 3.0}) {
    std::vector<double> xs{x};
    for (int i = 0; i <= 3; ++i) {
      CHECK(toric_basis(c, i, xs) == doctest::Approx(oracle::bernstein_1d(3, i, x)).epsilon(1e-12));
    }
  }
  // 0^0 = 1 at the endpoint.
  CHECK(toric_basis(c, 0, std::vector<double>{0.0}) == doctest::Approx(27.0));
  CHECK(toric_basis(c, 3, std::vector<double>{0.0}) == 0.0);
}

TEST_CASE("toric basis on the degree-3 triangle") {
  auto c = triangle_patch(3);
  for (auto [x, y] : {std::pair{0.5, 0.5}, {1.0, 2.0}, {0.0, 0.0}, {1.2, 0.3}}) {
    std::vector<double> xs{x, y};
    for (std::size_t a = 0; a < c.size(); ++a) {
      const auto& p = c.point(a);
      CHECK(toric_basis(c, int(a), xs) ==
            doctest::Approx(oracle::bernstein_tri(3, int(p[0]), int(p[1]), x, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("unit square basis and tensor factorization") {
  auto sq = tensor_patch(1, 1);
  std::vector<double> xs{0.3, 0.8};
  CHECK(toric_basis(sq, 0, xs) == doctest::Approx(0.7 * 0.2));
  CHECK(toric_basis(sq, 1, xs) == doctest::Approx(0.3 * 0.2));
  CHECK(toric_basis(sq, 2, xs) == doctest::Approx(0.7 * 0.8));
  CHECK(toric_basis(sq, 3, xs) == doctest::Approx(0.3 * 0.8));

  auto t = tensor_patch(3, 2);
  std::vector<double> p{1.7, 0.4};
  for (int j = 0; j <= 2; ++j) {
    for (int i = 0; i <= 3; ++i) {
      const double expect = oracle::bernstein_1d(3, i, p[0]) * oracle::bernstein_1d(2, j, p[1]);
      CHECK(toric_basis(t, j * 4 + i, p) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("rational Bezier curve matches exact evaluation") {
  auto spec = cubic_spec();
  std::vector<Rational> w{1, 4, 4, 1};
  std::vector<std::vector<Rational>> b{
      {0, 0}, q({"7/2", "7/2"}), q({"-1/2", "5/2"}), {3, 0}};
  for (const char* xs : {"3/2", "0", "1/3", "3", "5/2"}) {
    auto x = parse_rational(xs);
    auto expect = oracle::bezier_curve_exact(w, b, x);
    auto got = evaluate(spec, std::vector<double>{x.get_d()});
    CHECK(got[0] == doctest::Approx(expect[0].get_d()).epsilon(1e-13));
    CHECK(got[1] == doctest::Approx(expect[1].get_d()).epsilon(1e-13));
  }
}

TEST_CASE("patches interpolate the control points at vertices") {
  PatchSpec pillow(LatticeConfig(2, {{1, 0}, {2, 1}, {1, 2}, {0, 1}, {1, 1}}), {1, 1, 1, 1, 2},
                   {{0, -1, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, 0, 1}});
  for (int v = 0; v < 4; ++v) {
    std::vector<double> x{double(pillow.config().point(v)[0]), double(pillow.config().point(v)[1])};
    auto p = evaluate(pillow, x);
    for (int k = 0; k < 3; ++k) CHECK(p[k] == doctest::Approx(pillow.control_points()[v][k]));
  }
  auto bi = bicubic_spec();
  for (int v : {0, 3, 12, 15}) {
    std::vector<double> x{double(bi.config().point(v)[0]), double(bi.config().point(v)[1])};
    auto p = evaluate(bi, x);
    for (int k = 0; k < 3; ++k) CHECK(p[k] == doctest::Approx(bi.control_points()[v][k]));
  }
}

TEST_CASE("boundary restriction is the edge curve") {
  auto bi = bicubic_spec();
  std::vector<int> edge{0, 1, 2, 3};
  auto sub = bi.restrict_to(edge);
  CHECK(sub.basis().intrinsic_dim() == 1);
  std::vector<Point> cps;
  std::vector<double> w;
  for (int a : edge) {
    cps.push_back(bi.control_points()[a]);
    w.push_back(bi.weights()[a]);
  }
  PatchSpec curve(bezier_curve(3), w, cps);
  for (double x : {0.0, 0.7, 1.5, 2.2, 3.0}) {
    auto on_patch = evaluate(bi, std::vector<double>{x, 0.0});
    auto on_sub = evaluate(sub, std::vector<double>{x, 0.0});
    auto on_curve = evaluate(curve, std::vector<double>{x});
    for (int k = 0; k < 3; ++k) {
      CHECK(on_patch[k] == doctest::Approx(on_curve[k]).epsilon(1e-12));
      CHECK(on_sub[k] == doctest::Approx(on_curve[k]).epsilon(1e-12));
    }
  }
  CHECK(code_of([&] { bi.restrict_to(std::vector<int>{0, 99}); }) == ErrorCode::FaceNotSubset);
}

TEST_CASE("blend coefficients lie on the simplex") {
  auto bi = bicubic_spec();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<double> logw;
  for (double w : bi.weights()) logw.push_back(std::log(w));
  std::vector<double> z(bi.config().size());
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x{u(rng), u(rng)};
    blend_coefficients(bi.basis(), logw, x, z);
    double total = 0;
    for (double v : z) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    // Cross-check against the literal map w . beta(x) normalized.
    auto lit = weight_action(bi.weights(), beta_map(bi.config(), x));
    double s = 0;
    for (double v : lit.z) s += v;
    for (std::size_t a = 0; a < z.size(); ++a) CHECK(z[a] == doctest::Approx(lit.z[a] / s).epsilon(1e-12));
    // The patch point is a convex combination, so it stays in the bounding box.
    auto p = evaluate(bi, x);
    CHECK(p[0] >= -1e-12);
    CHECK(p[0] <= 3 + 1e-12);
    CHECK(p[2] >= -1e-12);
    CHECK(p[2] <= 3 + 1e-12);
  }
}

TEST_CASE("binomial relations") {
  auto quad = bezier_curve(2);
  BinomialRelation mid{q({"1/2", "0", "1/2"}), q({"0", "1", "0"})};
  validate_relation(quad, mid);
  PatchSpec spec(quad, {1, 3, 2}, {{0, 0}, {1, 2}, {2, 0}});
  std::vector<Point> samples;
  for (int k = 0; k <= 20; ++k) samples.push_back({0.1 * k});
  std::vector<BinomialRelation> rels{mid};
  CHECK(check_binomial_relations(spec, rels, samples) < 1e-12);

  BinomialRelation bad{q({"1/2", "1/2", "0"}), q({"0", "1", "0"})};
  CHECK(code_of([&] { validate_relation(quad, bad); }) == ErrorCode::InvalidRelation);
  BinomialRelation unnormalized{q({"1", "0", "1"}), q({"0", "2", "0"})};
  CHECK(code_of([&] { validate_relation(quad, unnormalized); }) == ErrorCode::InvalidRelation);

  auto bi = bicubic_spec();
  auto span = spanning_relations(bi.config());
  // Affine relations of 16 points spanning a plane: 16 - 3.
  CHECK(span.size() == 13);
  std::vector<Point> grid_samples;
  for (int j = 0; j <= 6; ++j) {
    for (int i = 0; i <= 6; ++i) grid_samples.push_back({0.5 * i, 0.5 * j});
  }
  CHECK(check_binomial_relations(bi, span, grid_samples) < 1e-12);

  // They hold for any positive weights.
  auto flat = bi.with_weights(std::vector<double>(16, 1.0));
  CHECK(check_binomial_relations(flat, span, grid_samples) < 1e-12);
}

TEST_CASE("hull intersection relations") {
  auto c = bezier_curve(3);
  auto r = hull_intersection_relation(c, std::vector<int>{0, 2}, std::vector<int>{1});
  REQUIRE(r.has_value());
  validate_relation(c, *r);
  CHECK(r->alpha[0] + r->alpha[2] == 1);
  CHECK(r->beta[1] == 1);
  CHECK_FALSE(hull_intersection_relation(c, std::vector<int>{0, 1}, std::vector<int>{2, 3}).has_value());

  auto g = tensor_patch(3, 3);
  // The two diagonals of the big square cross at (3/2, 3/2).
  auto x = hull_intersection_relation(g, std::vector<int>{0, 15}, std::vector<int>{3, 12});
  REQUIRE(x.has_value());
  CHECK(x->alpha[0] == Rational(1, 2));
  CHECK(x->beta[3] == Rational(1, 2));
}

TEST_CASE("construction errors") {
  CHECK(code_of([] { bezier_curve(0); }) == ErrorCode::ZeroDegree);
  CHECK(code_of([] { tensor_patch(0, 2); }) == ErrorCode::ZeroDegree);
  CHECK(code_of([] { triangle_patch(0); }) == ErrorCode::ZeroDegree);
  CHECK(code_of([] { PatchSpec(bezier_curve(1), {1, -1}, {{0.0}, {1.0}}); }) == ErrorCode::InvalidPatch);
  CHECK(code_of([] { PatchSpec(bezier_curve(1), {1}, {{0.0}, {1.0}}); }) == ErrorCode::InvalidPatch);
  CHECK(code_of([] { PatchSpec(bezier_curve(1), {1, 1}, {{0.0}, {1.0, 2.0}}); }) == ErrorCode::InvalidPatch);
  auto c = bezier_curve(3);
  CHECK(code_of([&] { toric_basis(c, 0, std::vector<double>{3.5}); }) == ErrorCode::OutsideDomain);
  CHECK(code_of([&] { evaluate(cubic_spec(), std::vector<double>{-0.1}); }) == ErrorCode::OutsideDomain);
}

TEST_CASE("evaluation factors through the simplex") {
  auto bi = bicubic_spec();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x{u(rng), u(rng)};
    auto direct = evaluate(bi, x);
    auto composed = project(bi.control_points(), weight_action(bi.weights(), beta_map(bi.config(), x)));
    for (int k = 0; k < 3; ++k) CHECK(direct[k] == doctest::Approx(composed[k]).epsilon(1e-12));
  }
}
