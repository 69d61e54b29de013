#pragma once

// Independent reference computations used to derive expected values.
// Nothing here calls the hull, LP or evaluation code under test.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "toric/lattice.hpp"
#include "toric/rational.hpp"

namespace oracle {

using toric::IntVector;
using toric::LatticeConfig;
using toric::Lifting;
using toric::Rational;
using toric::RationalVector;

inline LatticeConfig grid(int c, int d) {
  std::vector<IntVector> pts;
  for (int j = 0; j <= d; ++j) {
    for (int i = 0; i <= c; ++i) pts.push_back({i, j});
  }
  return LatticeConfig(2, pts);
}

inline int label(int i, int j, int c = 3) { return j * (c + 1) + i; }

inline Lifting lifting(std::initializer_list<const char*> values) {
  RationalVector v;
  for (const char* s : values) v.emplace_back(s);
  for (auto& r : v) r.canonicalize();
  return Lifting(v);
}

inline Rational cross(const IntVector& o, const IntVector& a, const IntVector& b) {
  return Rational(static_cast<long>((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])));
}

/// Hull edges of a 2D configuration by checking every ordered pair: (p, q)
/// is an edge when every point is weakly left of p->q and the collinear
/// points lie between p and q. Returned as primitive (normal, offset).
inline std::set<std::vector<long>> brute_hull_edges(const LatticeConfig& c) {
  std::set<std::vector<long>> out;
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t q = 0; q < c.size(); ++q) {
      if (p == q) continue;
      bool ok = true;
      for (std::size_t r = 0; r < c.size() && ok; ++r) {
        if (cross(c.point(p), c.point(q), c.point(r)) < 0) ok = false;
      }
      if (!ok) continue;
      long nx = -(c.point(q)[1] - c.point(p)[1]);
      long ny = c.point(q)[0] - c.point(p)[0];
      long g = std::gcd(std::labs(nx), std::labs(ny));
      nx /= g;
      ny /= g;
      long off = -(nx * c.point(p)[0] + ny * c.point(p)[1]);
      out.insert({nx, ny, off});
    }
  }
  return out;
}

/// Upper (or lower) facets of the lifted 2D configuration by enumerating
/// planes through every non-collinear triple. Facets are the maximal point
/// sets on a supporting plane with the whole lift weakly below (above).
inline std::set<std::vector<int>> brute_lifted_facets(const LatticeConfig& c, const Lifting& l,
                                                       bool upper = true) {
  std::set<std::vector<int>> out;
  const std::size_t n = c.size();
  auto height = [&](std::size_t i) { return upper ? l[i] : Rational(-l[i]); };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t d = b + 1; d < n; ++d) {
        const Rational det = cross(c.point(a), c.point(b), c.point(d));
        if (det == 0) continue;
        // Plane z = gx x + gy y + k through the three lifted points.
        auto px = [&](std::size_t i, int j) { return Rational(static_cast<long>(c.point(i)[j])); };
        Rational x1 = px(b, 0) - px(a, 0), y1 = px(b, 1) - px(a, 1), z1 = height(b) - height(a);
        Rational x2 = px(d, 0) - px(a, 0), y2 = px(d, 1) - px(a, 1), z2 = height(d) - height(a);
        Rational gx = (z1 * y2 - z2 * y1) / det;
        Rational gy = (x1 * z2 - x2 * z1) / det;
        Rational k = height(a) - gx * px(a, 0) - gy * px(a, 1);
        std::vector<int> on;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          Rational gap = gx * px(i, 0) + gy * px(i, 1) + k - height(i);
          if (gap < 0) ok = false;
          else if (gap == 0) on.push_back(static_cast<int>(i));
        }
        if (ok) out.insert(on);
      }
    }
  }
  return out;
}

/// 1D version: upper facets as maximal sets on a supporting line.
inline std::set<std::vector<int>> brute_lifted_facets_1d(const LatticeConfig& c, const Lifting& l) {
  std::set<std::vector<int>> out;
  const std::size_t n = c.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      Rational xa(static_cast<long>(c.point(a)[0])), xb(static_cast<long>(c.point(b)[0]));
      Rational slope = (l[b] - l[a]) / (xb - xa);
      std::vector<int> on;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        Rational xi(static_cast<long>(c.point(i)[0]));
        Rational gap = l[a] + slope * (xi - xa) - l[i];
        if (gap < 0) ok = false;
        else if (gap == 0) on.push_back(static_cast<int>(i));
      }
      if (ok) out.insert(on);
    }
  }
  return out;
}

/// x^i (d-x)^(d-i): Bernstein polynomial without the binomial coefficient.
inline double bernstein_1d(int d, int i, double x) {
  return std::pow(x, i) * std::pow(d - x, d - i);
}

inline double bernstein_tri(int d, int i, int j, double x, double y) {
  return std::pow(x, i) * std::pow(y, j) * std::pow(d - x - y, d - i - j);
}

/// Literal rational evaluation of a rational Bezier curve on {0..d} at a
/// rational parameter: sum w_i b_i x^i (d-x)^(d-i) / sum w_i x^i (d-x)^(d-i).
inline std::vector<Rational> bezier_curve_exact(const std::vector<Rational>& w,
                                                const std::vector<std::vector<Rational>>& b,
                                                const Rational& x) {
  const int d = static_cast<int>(w.size()) - 1;
  std::vector<Rational> num(b.front().size(), Rational(0));
  Rational den = 0;
  for (int i = 0; i <= d; ++i) {
    Rational beta = 1;
    for (int k = 0; k < i; ++k) beta *= x;
    for (int k = 0; k < d - i; ++k) beta *= (Rational(d) - x);
    den += w[i] * beta;
    for (std::size_t j = 0; j < num.size(); ++j) num[j] += w[i] * b[i][j] * beta;
  }
  for (auto& v : num) v /= den;
  return num;
}

}  // namespace oracle
