#pragma once

#include <span>
#include <vector>

#include "toric/patch.hpp"

// Hot loops of the sampling pipeline. Every kernel has a serial reference
// path and an OpenMP path; both produce bitwise-identical results because
// each output element is computed by the same scalar code and the only
// reduction is an exact max.
namespace toric {

enum class Execution { Serial, Parallel };

/// Points stored flat, `dim` doubles per point.
struct PointCloud {
  int dim = 0;
  std::vector<double> coords;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

/// Evaluates the blended patch at `params` (chart coordinates, `k` per
/// point) and appends the images to `out`.
void evaluate_params(const ToricBasis& basis, std::span<const double> log_weights,
                     std::span<const Point> control_points, std::span<const double> params,
                     PointCloud& out, Execution exec);

enum class HausdorffMethod { BruteForce, GridIndex };

/// max over x in `from` of min over y in `to` of |x - y|.
double directed_hausdorff(const PointCloud& from, const PointCloud& to, HausdorffMethod method,
                          Execution exec);

/// Number of threads the parallel path will use.
int parallel_threads();

}  // namespace toric
