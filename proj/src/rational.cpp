#include "exactfit/rational.hpp"

#include <stdexcept>

namespace exactfit {

std::string rat_to_string(const Rat& r) { return r.str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.remove_prefix(1);
  }
  if (!all_digits(s))
    throw std::invalid_argument("not a rational literal: \"" + std::string(whole) + "\"");
  BigInt value{std::string(s)};
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rat rat_from_string(std::string_view s) {
  const std::string_view whole = s;
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(parse_integer(s, whole));
  BigInt num = parse_integer(s.substr(0, slash), whole);
  std::string_view den_text = s.substr(slash + 1);
  if (!all_digits(den_text))
    throw std::invalid_argument("denominator must be a positive integer: \"" + std::string(whole) + "\"");
  BigInt den{std::string(den_text)};
  if (den == 0)
    throw std::invalid_argument("zero denominator: \"" + std::string(whole) + "\"");
  return Rat(num) / Rat(den);
}

}  // namespace exactfit
