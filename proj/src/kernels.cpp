#include "toric/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>

#include <omp.h>

namespace toric {

namespace {

double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

void evaluate_one(const ToricBasis& basis, std::span<const double> log_weights,
                  std::span<const Point> control_points, const double* u, std::size_t k,
                  std::span<double> coef, double* dst, int n) {
  blend_coefficients(basis, log_weights, {u, k}, coef);
  for (int j = 0; j < n; ++j) dst[j] = 0.0;
  for (std::size_t a = 0; a < coef.size(); ++a) {
    if (coef[a] == 0.0) continue;
    for (int j = 0; j < n; ++j) dst[j] += coef[a] * control_points[a][j];
  }
}

// Uniform grid over the bounding box of a point cloud (dim <= 3), with
// cell contents in CSR form ordered by point index.
class UniformGrid {
 public:
  explicit UniformGrid(const PointCloud& cloud) : cloud_(cloud), dim_(cloud.dim) {
    const std::size_t n = cloud.size();
    lo_.fill(0.0);
    std::array<double, 3> hi{0.0, 0.0, 0.0};
    for (int j = 0; j < dim_; ++j) {
      lo_[j] = std::numeric_limits<double>::infinity();
      hi[j] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (int j = 0; j < dim_; ++j) {
        lo_[j] = std::min(lo_[j], cloud.coords[i * dim_ + j]);
        hi[j] = std::max(hi[j], cloud.coords[i * dim_ + j]);
      }
    }
    // About one cell per point over the bounding box.
    double volume = 1.0, extent = 0.0;
    int spanned = 0;
    for (int j = 0; j < dim_; ++j) {
      const double e = hi[j] - lo_[j];
      extent = std::max(extent, e);
      if (e > 0.0) {
        volume *= e;
        ++spanned;
      }
    }
    if (extent == 0.0) extent = 1.0;
    h_ = spanned == 0 ? extent
                      : std::pow(volume / static_cast<double>(std::max<std::size_t>(n, 1)),
                                 1.0 / spanned);
    h_ = std::max(h_, extent * 1e-6);
    for (;;) {
      std::size_t total = 1;
      for (int j = 0; j < 3; ++j) {
        dims_[j] = j < dim_ ? static_cast<std::size_t>((hi[j] - lo_[j]) / h_) + 1 : 1;
        total *= dims_[j];
      }
      if (total <= 2 * n + 64) break;
      h_ *= 1.25;
    }
    const std::size_t cells = dims_[0] * dims_[1] * dims_[2];
    start_.assign(cells + 1, 0);
    std::vector<std::size_t> cell_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      cell_of[i] = flat(cell_index(cloud.point(i).data()));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
    items_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) items_[fill[cell_of[i]]++] = i;
  }

  double nearest_squared(const double* x) const {
    const auto c = cell_index(x);
    double best = std::numeric_limits<double>::infinity();
    const std::size_t max_ring = std::max({dims_[0], dims_[1], dims_[2]});
    for (std::size_t r = 0; r <= max_ring; ++r) {
      visit_ring(c, r, x, best);
      // Unvisited cells differ by more than r cells in some axis, so their
      // points are at least r * h away from the clamped query, and clamping
      // onto the box never increases distances to points inside it.
      const double bound = static_cast<double>(r) * h_;
      if (best < bound * bound * (1.0 - 1e-9)) break;
    }
    return best;
  }

 private:
  std::array<std::size_t, 3> cell_index(const double* x) const {
    std::array<std::size_t, 3> c{0, 0, 0};
    for (int j = 0; j < dim_; ++j) {
      double f = std::floor((x[j] - lo_[j]) / h_);
      if (!(f >= 0.0)) f = 0.0;
      c[j] = std::min(static_cast<std::size_t>(f), dims_[j] - 1);
    }
    return c;
  }

  std::size_t flat(const std::array<std::size_t, 3>& c) const {
    return (c[2] * dims_[1] + c[1]) * dims_[0] + c[0];
  }

  void scan_cell(std::size_t cell, const double* x, double& best) const {
    for (std::size_t k = start_[cell]; k < start_[cell + 1]; ++k) {
      const double d = squared_distance(x, cloud_.coords.data() + items_[k] * dim_, dim_);
      if (d < best) best = d;
    }
  }

  void visit_ring(const std::array<std::size_t, 3>& c, std::size_t r, const double* x,
                  double& best) const {
    const long rr = static_cast<long>(r);
    std::array<long, 3> lo, hi;
    for (int j = 0; j < 3; ++j) {
      lo[j] = std::max(0L, static_cast<long>(c[j]) - rr);
      hi[j] = std::min(static_cast<long>(dims_[j]) - 1, static_cast<long>(c[j]) + rr);
    }
    const long ci = static_cast<long>(c[0]), cj = static_cast<long>(c[1]),
               ck = static_cast<long>(c[2]);
    for (long k = lo[2]; k <= hi[2]; ++k) {
      for (long j = lo[1]; j <= hi[1]; ++j) {
        const bool shell = std::labs(k - ck) == rr || std::labs(j - cj) == rr;
        auto scan = [&](long i) {
          scan_cell(flat({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                          static_cast<std::size_t>(k)}),
                    x, best);
        };
        if (shell) {
          for (long i = lo[0]; i <= hi[0]; ++i) scan(i);
        } else {
          if (ci - rr >= lo[0]) scan(ci - rr);
          if (rr > 0 && ci + rr <= hi[0]) scan(ci + rr);
        }
      }
    }
  }

  const PointCloud& cloud_;
  int dim_;
  std::array<double, 3> lo_{};
  std::array<std::size_t, 3> dims_{1, 1, 1};
  double h_ = 1.0;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

double brute_nearest_squared(const PointCloud& to, const double* x) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = to.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = squared_distance(x, to.coords.data() + i * to.dim, to.dim);
    if (d < best) best = d;
  }
  return best;
}

}  // namespace

int parallel_threads() { return omp_get_max_threads(); }

void evaluate_params(const ToricBasis& basis, std::span<const double> log_weights,
                     std::span<const Point> control_points, std::span<const double> params,
                     PointCloud& out, Execution exec) {
  const std::size_t k = std::max(1, basis.intrinsic_dim());
  const std::size_t count = params.size() / k;
  const int n = static_cast<int>(control_points.front().size());
  if (out.dim == 0) out.dim = n;
  const std::size_t base = out.coords.size();
  out.coords.resize(base + count * n);
  double* dst = out.coords.data() + base;

  if (exec == Execution::Serial) {
    std::vector<double> coef(basis.size());
    for (std::size_t i = 0; i < count; ++i) {
      evaluate_one(basis, log_weights, control_points, params.data() + i * k, k, coef, dst + i * n, n);
    }
    return;
  }

  std::exception_ptr failure;
#pragma omp parallel
  {
    std::vector<double> coef(basis.size());
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < count; ++i) {
      try {
        evaluate_one(basis, log_weights, control_points, params.data() + i * k, k, coef, dst + i * n, n);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double directed_hausdorff(const PointCloud& from, const PointCloud& to, HausdorffMethod method,
                          Execution exec) {
  const std::size_t n = from.size();
  if (method == HausdorffMethod::GridIndex && to.dim > 3) method = HausdorffMethod::BruteForce;

  double worst = 0.0;
  if (method == HausdorffMethod::BruteForce) {
    if (exec == Execution::Serial) {
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, brute_nearest_squared(to, from.point(i).data()));
    } else {
#pragma omp parallel for schedule(dynamic, 64) reduction(max : worst)
      for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, brute_nearest_squared(to, from.point(i).data()));
      }
    }
    return std::sqrt(worst);
  }

  const UniformGrid grid(to);
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, grid.nearest_squared(from.point(i).data()));
  } else {
#pragma omp parallel for schedule(dynamic, 64) reduction(max : worst)
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, grid.nearest_squared(from.point(i).data()));
    }
  }
  return std::sqrt(worst);
}

}  // namespace toric
