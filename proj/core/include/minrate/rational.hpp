// Exact rational arithmetic shared by every module.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace minrate {

using Rational = mpq_class;

/// Parses "p/q", "p", or a finite decimal such as "2.5". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical exact form: "17/8", "3", "-1/2".
std::string to_string(const Rational& value);

/// Cosmetic decimal rendering with `significant` significant digits.
std::string to_decimal(const Rational& value, int significant = 12);

inline int sign(const Rational& value) { return sgn(value); }

/// A quantity moving linearly in a homotopy parameter: `at + theta * rate`.
/// Ordering is lexicographic, i.e. the order for all sufficiently small theta > 0.
struct Affine {
  Rational at;
  Rational rate;

  Affine() = default;
  Affine(Rational value, Rational slope = 0) : at(std::move(value)), rate(std::move(slope)) {}

  [[nodiscard]] Rational eval(const Rational& theta) const { return Rational(at + theta * rate); }

  Affine& operator+=(const Affine& o) {
    at += o.at;
    rate += o.rate;
    return *this;
  }
  Affine& operator-=(const Affine& o) {
    at -= o.at;
    rate -= o.rate;
    return *this;
  }
  friend Affine operator+(Affine a, const Affine& b) { return a += b; }
  friend Affine operator-(Affine a, const Affine& b) { return a -= b; }
  friend Affine operator*(const Affine& a, const Rational& s) {
    return Affine(Rational(a.at * s), Rational(a.rate * s));
  }
  friend Affine operator/(const Affine& a, const Rational& s) {
    return Affine(Rational(a.at / s), Rational(a.rate / s));
  }
  friend bool operator==(const Affine& a, const Affine& b) { return a.at == b.at && a.rate == b.rate; }
  friend std::strong_ordering operator<=>(const Affine& a, const Affine& b) {
    if (a.at != b.at) return a.at < b.at ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.rate != b.rate) return a.rate < b.rate ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// Smallest theta > 0 with a(theta) == b(theta) when a is currently below b but
/// catching up; nullopt if the two never meet ahead.
std::optional<Rational> catch_up(const Affine& chaser, const Affine& target);

}  // namespace minrate
