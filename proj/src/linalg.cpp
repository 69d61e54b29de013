#include "toric/linalg.hpp"

#include <utility>

namespace toric::linalg {

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m, std::size_t columns) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < columns && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && sgn(m[sel][col]) == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    Rational inv = 1 / m[row][col];
    for (auto& v : m[row]) {
      if (sgn(v) != 0) v *= inv;
    }
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || sgn(m[r][col]) == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c) {
        if (sgn(m[row][c]) != 0) m[r][c] -= f * m[row][c];
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank(RationalMatrix matrix) {
  if (matrix.empty()) return 0;
  auto cols = matrix.front().size();
  return static_cast<int>(rref(matrix, cols).size());
}

std::optional<RationalVector> solve(const RationalMatrix& a,
                                    const RationalVector& b) {
  const std::size_t n = a.empty() ? 0 : a.front().size();
  RationalMatrix aug(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aug[i] = a[i];
    aug[i].push_back(b[i]);
  }
  auto pivots = rref(aug, n);
  for (std::size_t r = pivots.size(); r < aug.size(); ++r) {
    if (sgn(aug[r][n]) != 0) return std::nullopt;
  }
  RationalVector x(n, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][n];
  return x;
}

RationalMatrix nullspace(const RationalMatrix& a, std::size_t columns) {
  RationalMatrix m = a;
  auto pivots = rref(m, columns);
  std::vector<bool> is_pivot(columns, false);
  for (auto p : pivots) is_pivot[p] = true;
  RationalMatrix basis;
  for (std::size_t f = 0; f < columns; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(columns, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

IntegerMatrix integer_kernel(const IntegerMatrix& a, std::size_t columns) {
  // Column operations on M, mirrored on U (starts as identity). After
  // processing every row, columns [p, n) of M vanish and the same columns
  // of U are a Z-basis of the kernel.
  IntegerMatrix m = a;
  const std::size_t n = columns;
  IntegerMatrix u(n, std::vector<Integer>(n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

  auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) {
    // column dst -= q * column src
    for (auto& row : m) row[dst] -= q * row[src];
    for (auto& row : u) row[dst] -= q * row[src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& row : m) std::swap(row[x], row[y]);
    for (auto& row : u) std::swap(row[x], row[y]);
  };

  std::size_t p = 0;
  for (std::size_t i = 0; i < m.size() && p < n; ++i) {
    for (std::size_t j = p + 1; j < n; ++j) {
      while (m[i][j] != 0) {
        if (m[i][p] == 0) {
          col_swap(p, j);
          continue;
        }
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][p].get_mpz_t(), m[i][j].get_mpz_t());
        col_axpy(p, j, q);
        col_swap(p, j);
      }
    }
    if (m[i][p] != 0) ++p;
  }

  IntegerMatrix kernel;
  for (std::size_t j = p; j < n; ++j) {
    std::vector<Integer> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = u[r][j];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

std::vector<Integer> primitive_integer_vector(const RationalVector& v) {
  Integer lcm_den = 1;
  for (const auto& x : v) {
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
  }
  std::vector<Integer> out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational scaled = v[i] * lcm_den;
    out[i] = scaled.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g > 1) {
    for (auto& x : out) x /= g;
  }
  return out;
}

}  // namespace toric::linalg
