#include "symdyn/surd.hpp"

#include <cmath>
#include <string>

#include "symdyn/errors.hpp"

namespace symdyn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool is_integer_text(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto s = trim(text);
  auto slash = s.find('/');
  auto num = trim(s.substr(0, slash));
  auto den = slash == std::string_view::npos ? std::string_view{"1"} : trim(s.substr(slash + 1));
  if (!num.empty() && num.front() == '+') num.remove_prefix(1);
  if (!is_integer_text(num) || !is_integer_text(den) || den.front() == '-') {
    throw InputError("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

QSqrt2 QSqrt2::pow2_half(long e) {
  // 2^{e/2} = 2^{floor(e/2)} · (√2)^{e mod 2}
  long whole = e >= 0 ? e / 2 : -((-e + 1) / 2);
  bool half = (e - 2 * whole) == 1;
  Rational p(1);
  if (whole >= 0) {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), 2, static_cast<unsigned long>(whole));
    p = Rational(m);
  } else {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), 2, static_cast<unsigned long>(-whole));
    p = Rational(mpz_class(1), m);
  }
  return half ? QSqrt2(Rational(0), p) : QSqrt2(p);
}

int QSqrt2::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: |a| vs √2|b|
  Rational a2 = a_ * a_;
  Rational b2 = 2 * b_ * b_;
  int c = cmp(a2, b2);
  if (c == 0) return 0;  // impossible for rationals, kept for totality
  return c > 0 ? sa : sb;
}

double QSqrt2::to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(2.0); }

QSqrt2& QSqrt2::operator+=(const QSqrt2& o) {
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
  Rational a = a_ * o.a_ + 2 * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QSqrt2 QSqrt2::pow(unsigned long e) const {
  QSqrt2 result(1);
  QSqrt2 base = *this;
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

std::string QSqrt2::to_string() const {
  if (b_ == 0) return a_.get_str();
  std::string b_abs = Rational(abs(b_)).get_str() + "*sqrt2";
  if (a_ == 0) return (sgn(b_) < 0 ? "-" : "") + b_abs;
  return a_.get_str() + (sgn(b_) < 0 ? " - " : " + ") + b_abs;
}

QSqrt2 QSqrt2::parse(std::string_view text) {
  auto s = trim(text);
  auto pos = s.find("sqrt2");
  if (pos == std::string_view::npos) return QSqrt2(parse_rational(s));
  if (pos + 5 != s.size()) throw InputError("malformed surd '" + std::string(text) + "'");
  auto head = trim(s.substr(0, pos));
  if (head.empty() || head.back() != '*') {
    throw InputError("malformed surd '" + std::string(text) + "'");
  }
  head.remove_suffix(1);
  head = trim(head);
  // split "a + b" / "a - b" at the last binary sign
  std::size_t split = std::string_view::npos;
  for (std::size_t i = head.size(); i-- > 1;) {
    if ((head[i] == '+' || head[i] == '-') && head[i - 1] == ' ') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) return QSqrt2(Rational(0), parse_rational(head));
  Rational a = parse_rational(head.substr(0, split));
  Rational b = parse_rational(head.substr(split + 1));
  if (head[split] == '-') b = -b;
  return QSqrt2(a, b);
}

}  // namespace symdyn
