#include "oscint/rational.hpp"

#include <stdexcept>

namespace oscint {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

BigInt parse_int(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return BigInt(text);
}

}  // namespace

Rat parse_rat(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rat(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    if (!all_digits(frac)) throw std::invalid_argument("bad decimal '" + std::string(text) + "'");
    std::string_view whole = text.substr(0, dot);
    bool negative = !whole.empty() && whole.front() == '-';
    std::string digits = std::string(whole) + std::string(frac);
    if (whole.empty() || whole == "-" || whole == "+") digits = (negative ? "-0" : "0") + std::string(frac);
    BigInt num = parse_int(digits);
    BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    return Rat(num, den);
  }
  return Rat(parse_int(text));
}

std::string to_string(const Rat& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool is_canonical(const Rat& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den <= 0) return false;
  return boost::multiprecision::gcd(num, den) == 1 || (num == 0 && den == 1);
}

}  // namespace oscint
