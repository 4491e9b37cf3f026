#pragma once

// Exact rationals and 2-vectors in the noncommutative plane.

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mrg {

using Rational = boost::multiprecision::cpp_rational;

struct Vec2Q {
  Rational x = 0;
  Rational y = 0;

  Vec2Q& operator+=(const Vec2Q& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend Vec2Q operator+(Vec2Q a, const Vec2Q& b) { return a += b; }
  friend Vec2Q operator-(const Vec2Q& a, const Vec2Q& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2Q operator-(const Vec2Q& a) { return {-a.x, -a.y}; }
  friend Vec2Q operator*(const Rational& c, const Vec2Q& a) { return {c * a.x, c * a.y}; }
  bool operator==(const Vec2Q&) const = default;
};

/// s ^ t = (theta/2) (s_x t_y - s_y t_x).
inline Rational wedge(const Vec2Q& s, const Vec2Q& t, const Rational& theta) {
  return theta * (s.x * t.y - s.y * t.x) / 2;
}

/// "0", "-3", "1/2".
inline std::string fraction_string(const Rational& q) { return q.str(); }

}  // namespace mrg
