#pragma once

#include <optional>
#include <span>
#include <vector>

#include "toric/rational.hpp"

// Exact linear algebra over Q and Z for small dense systems.
namespace toric::linalg {

using IntegerMatrix = std::vector<std::vector<Integer>>;

/// Rank of a rational matrix (rows may have any common length).
int rank(RationalMatrix matrix);

/// Some solution of A x = b, or nullopt if the system is inconsistent.
/// Free variables are set to zero.
std::optional<RationalVector> solve(const RationalMatrix& a,
                                    const RationalVector& b);

/// Basis of the rational nullspace {x : A x = 0}, one vector per free column.
/// `columns` is needed when A has no rows.
RationalMatrix nullspace(const RationalMatrix& a, std::size_t columns);

/// Z-basis of {x in Z^n : A x = 0} via column Hermite reduction with a
/// unimodular transform.
IntegerMatrix integer_kernel(const IntegerMatrix& a, std::size_t columns);

/// Scales a rational vector to the primitive integer vector on its ray.
std::vector<Integer> primitive_integer_vector(const RationalVector& v);

}  // namespace toric::linalg
