#include "minrate/rational.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace minrate {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("empty rational");

  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw std::invalid_argument("malformed rational: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("malformed rational: " + s);
    for (std::size_t i = 0; i < digits.size(); ++i) {
      const char c = digits[i];
      if (!(std::isdigit(static_cast<unsigned char>(c)) || (i == 0 && (c == '-' || c == '+'))))
        throw std::invalid_argument("malformed rational: " + s);
    }
    if (digits[0] == '+') digits.erase(0, 1);
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac; ++i) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    const bool ok = std::isdigit(static_cast<unsigned char>(c)) || c == '/' || (i == 0 && c == '-');
    if (!ok) throw std::invalid_argument("malformed rational: " + s);
  }
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    if (slash == 0 || slash + 1 == s.size() || s.find('/', slash + 1) != std::string::npos)
      throw std::invalid_argument("malformed rational: " + s);
    if (s.substr(slash + 1).find('-') != std::string::npos) throw std::invalid_argument("malformed rational: " + s);
  }
  Rational r;
  try {
    r = Rational(s, 10);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

std::string to_decimal(const Rational& value, int significant) {
  if (value == 0) return "0";
  mpf_class f(value, 256);
  std::ostringstream out;
  out.precision(significant);
  out << f;
  return out.str();
}

std::optional<Rational> catch_up(const Affine& chaser, const Affine& target) {
  const Rational gap = target.at - chaser.at;
  const Rational closing = chaser.rate - target.rate;
  if (gap < 0 || closing <= 0) return std::nullopt;
  return Rational(gap / closing);
}

}  // namespace minrate
