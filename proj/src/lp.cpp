#include "toric/lp.hpp"

#include <optional>
#include <stdexcept>

namespace toric::lp {

namespace {

class Tableau {
 public:
  Tableau(const RationalMatrix& a, const RationalVector& b)
      : m_(a.size()), n_(a.empty() ? 0 : a.front().size()), width_(n_ + m_ + 1) {
    rows_.assign(m_, RationalVector(width_, Rational(0)));
    sign_.assign(m_, 1);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      sign_[i] = sgn(b[i]) < 0 ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(a[i][j]) != 0) rows_[i][j] = sign_[i] < 0 ? Rational(-a[i][j]) : a[i][j];
      }
      rows_[i][n_ + i] = 1;
      rows_[i][width_ - 1] = sign_[i] < 0 ? Rational(-b[i]) : b[i];
      basis_[i] = n_ + i;
    }
  }

  // Loads costs for all n + m columns and prices out the current basis.
  void set_costs(const RationalVector& costs) {
    costs_ = costs;
    reduced_.assign(width_, Rational(0));
    for (std::size_t j = 0; j + 1 < width_; ++j) reduced_[j] = costs_[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = costs_[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (sgn(rows_[i][j]) != 0) reduced_[j] -= cb * rows_[i][j];
      }
    }
  }

  // Returns false when the objective is unbounded below.
  bool optimize(std::size_t allowed_columns) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed_columns; ++j) {
        if (sgn(reduced_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        const Rational& coef = rows_[i][*enter];
        if (sgn(coef) <= 0) continue;
        Rational ratio = rows_[i][width_ - 1] / coef;
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t p, std::size_t e) {
    auto& prow = rows_[p];
    Rational inv = 1 / prow[e];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < width_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    }
    auto eliminate = [&](RationalVector& row) {
      if (sgn(row[e]) == 0) return;
      Rational f = row[e];
      for (auto j : nz) row[j] -= f * prow[j];
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != p) eliminate(rows_[i]);
    }
    eliminate(reduced_);
    basis_[p] = e;
  }

  // Pivots zero-level artificials out of the basis where possible.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Rational objective() const { return -reduced_[width_ - 1]; }

  RationalVector primal() const {
    RationalVector x(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][width_ - 1];
    }
    return x;
  }

  RationalVector dual() const {
    RationalVector y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      // Artificial column i started as e_i with zero phase-2 cost.
      Rational yi = costs_[n_ + i] - reduced_[n_ + i];
      y[i] = sign_[i] < 0 ? Rational(-yi) : yi;
    }
    return y;
  }

  std::size_t rows() const { return m_; }
  std::size_t columns() const { return n_; }

 private:
  std::size_t m_, n_, width_;
  std::vector<RationalVector> rows_;
  RationalVector reduced_;
  RationalVector costs_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution minimize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("lp::minimize: ragged constraint matrix");
  }
  if (b.size() != m) throw std::invalid_argument("lp::minimize: rhs size mismatch");

  Tableau t(a, b);
  Solution sol;

  RationalVector phase1(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  t.set_costs(phase1);
  t.optimize(n + m);
  if (sgn(t.objective()) > 0) {
    sol.status = Status::Infeasible;
    return sol;
  }
  t.expel_artificials();

  RationalVector phase2(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  t.set_costs(phase2);
  if (!t.optimize(n)) {
    sol.status = Status::Unbounded;
    return sol;
  }
  sol.status = Status::Optimal;
  sol.objective = t.objective();
  sol.x = t.primal();
  sol.dual = t.dual();
  return sol;
}

}  // namespace toric::lp
