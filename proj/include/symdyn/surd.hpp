#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace symdyn {

using Rational = mpq_class;

/// Exact element a + b·√2 of the field Q(√2).
///
/// Weights of the form 2^{-k/2} are irrational for odd k; keeping them in
/// Q(√2) lets every local-lemma margin be decided exactly, since the sign of
/// a + b√2 reduces to comparing a² with 2b².
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(Rational a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT
  QSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }
  QSqrt2(long a) : a_(a) {}  // NOLINT

  /// 2^{e/2} for any integer e.
  static QSqrt2 pow2_half(long e);

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }
  bool is_rational() const { return b_ == 0; }

  /// -1, 0 or +1, computed exactly.
  int sign() const;
  double to_double() const;

  QSqrt2 operator-() const { return {-a_, -b_}; }
  QSqrt2& operator+=(const QSqrt2& o);
  QSqrt2& operator-=(const QSqrt2& o);
  QSqrt2& operator*=(const QSqrt2& o);

  friend QSqrt2 operator+(QSqrt2 l, const QSqrt2& r) { return l += r; }
  friend QSqrt2 operator-(QSqrt2 l, const QSqrt2& r) { return l -= r; }
  friend QSqrt2 operator*(QSqrt2 l, const QSqrt2& r) { return l *= r; }
  friend bool operator==(const QSqrt2& l, const QSqrt2& r) {
    return l.a_ == r.a_ && l.b_ == r.b_;
  }

  /// Numeric order.
  friend int compare(const QSqrt2& l, const QSqrt2& r) { return (l - r).sign(); }

  QSqrt2 pow(unsigned long e) const;

  /// "a", "b*sqrt2" or "a + b*sqrt2" with a, b written as p/q.
  std::string to_string() const;
  static QSqrt2 parse(std::string_view text);

 private:
  Rational a_{0};
  Rational b_{0};
};

/// Structural (not numeric) order so QSqrt2 can key a map.
struct QSqrt2KeyLess {
  bool operator()(const QSqrt2& l, const QSqrt2& r) const {
    if (l.rational_part() != r.rational_part()) {
      return l.rational_part() < r.rational_part();
    }
    return l.sqrt2_part() < r.sqrt2_part();
  }
};

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

}  // namespace symdyn
