#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace toric {

using Rational = mpq_class;
using Integer = mpz_class;

using IntVector = std::vector<std::int64_t>;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Parses "p", "-p", "p/q" or a finite decimal such as "0.5" into a
/// canonical rational. Throws Error(ParseError) on anything else,
/// including a zero denominator.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& value);

inline bool is_integer(const Rational& value) {
  return value.get_den() == 1;
}

inline double to_double(const Rational& value) { return value.get_d(); }

static_assert(sizeof(long) == sizeof(std::int64_t),
              "GMP signed long is used for 64-bit lattice coordinates");

inline Rational to_rational(std::int64_t value) {
  return Rational(static_cast<long>(value));
}

}  // namespace toric
