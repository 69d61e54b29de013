#include "toric/rational.hpp"

#include <cctype>

#include "toric/error.hpp"

namespace toric {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_rational(std::string_view text, const char* why) {
  throw Error(ErrorCode::ParseError,
              "malformed rational \"" + std::string(text) + "\": " + why);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_rational(text, "expected p/q");
    Integer d(std::string(den), 10);
    if (d == 0) bad_rational(text, "zero denominator");
    result = Rational(Integer(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) bad_rational(text, "expected decimal");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer num(std::string(whole) + std::string(frac), 10);
    result = Rational(num, scale);
  } else {
    if (!all_digits(body)) bad_rational(text, "expected integer");
    result = Rational(Integer(std::string(body), 10));
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string format_rational(const Rational& value) {
  if (is_integer(value)) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace toric
