// Copyright 2026 The diophset Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact scalars: arbitrary-precision rationals and elements of real
// quadratic fields Q(sqrt(d)), with canonical forms and exact ordering.

#include <gmpxx.h>

#include <compare>
#include <cmath>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "diophset/error.hpp"

namespace diophset {

using Integer = mpz_class;

inline int sgn(const Integer& x) { return ::sgn(x); }

inline Integer isqrt(const Integer& x) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const Integer& x) {
  return x >= 0 && mpz_perfect_square_p(x.get_mpz_t()) != 0;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Exact root: returns true and sets `root` when x = root^k.
inline bool exact_root(const Integer& x, unsigned long k, Integer& root) {
  if (x < 0) return false;
  return mpz_root(root.get_mpz_t(), x.get_mpz_t(), k) != 0;
}

class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw Error(ErrorKind::kDivisionByZero, "rational with zero denominator");
    v_.get_num() = num;
    v_.get_den() = den;
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  const mpq_class& get() const { return v_; }
  Integer num() const { return v_.get_num(); }
  Integer den() const { return v_.get_den(); }

  int sign() const { return ::sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }
  Integer floor() const { return floor_div(v_.get_num(), v_.get_den()); }
  Integer ceil() const { return ceil_div(v_.get_num(), v_.get_den()); }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  double to_double() const { return v_.get_d(); }

  friend Rational operator+(const Rational& x, const Rational& y) { return Rational(mpq_class(x.v_ + y.v_)); }
  friend Rational operator-(const Rational& x, const Rational& y) { return Rational(mpq_class(x.v_ - y.v_)); }
  friend Rational operator*(const Rational& x, const Rational& y) { return Rational(mpq_class(x.v_ * y.v_)); }
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.sign() == 0) throw Error(ErrorKind::kDivisionByZero, "rational division by zero");
    return Rational(mpq_class(x.v_ / y.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& y) { v_ += y.v_; return *this; }
  Rational& operator-=(const Rational& y) { v_ -= y.v_; return *this; }

  friend bool operator==(const Rational& x, const Rational& y) { return x.v_ == y.v_; }
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
    int c = cmp(x.v_, y.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  /// Accepts "p", "p/q" and finite decimals such as "-0.125".
  static Rational parse(std::string_view text) {
    static const std::regex kFraction(R"(\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*)");
    static const std::regex kDecimal(R"(\s*([+-]?)(\d*)\.(\d+)\s*)");
    std::string s(text);
    std::smatch m;
    if (std::regex_match(s, m, kFraction)) {
      Integer num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str());
      Integer den = m[2].matched ? Integer(m[2].str()) : Integer(1);
      if (den == 0) throw Error(ErrorKind::kParse, "zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    if (std::regex_match(s, m, kDecimal)) {
      std::string digits = m[2].str() + m[3].str();
      Integer num(digits.empty() ? std::string("0") : digits);
      if (m[1].str() == "-") num = -num;
      return Rational(num, pow(Integer(10), m[3].str().size()));
    }
    throw Error(ErrorKind::kParse, "not a rational: '" + s + "'");
  }

 private:
  mpq_class v_;
};

namespace detail {

// sign(A + B*sqrt(d)) for integers A, B and d > 0.
inline int sign_surd(const Integer& A, const Integer& B, const Integer& d) {
  int sa = sgn(A), sb = sgn(B);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  int c = cmp(Integer(A * A), Integer(B * B * d));
  if (c > 0) return sa;
  if (c < 0) return sb;
  return 0;
}

// sign(A + B*sqrt(d1) + C*sqrt(d2)) using at most two squarings.
inline int sign_two_surds(const Integer& A, const Integer& B, const Integer& d1,
                          const Integer& C, const Integer& d2) {
  int left = sign_surd(A, B, d1);
  int right = -sgn(C);  // sign of -C*sqrt(d2)
  if (left != right) return left > right ? 1 : -1;
  if (left == 0) return 0;
  // Both sides share sign s: compare squares, (A + B sqrt d1)^2 vs C^2 d2.
  int t = sign_surd(Integer(A * A + B * B * d1 - C * C * d2), Integer(2 * A * B), d1);
  return left > 0 ? t : -t;
}

// Trial division bound for square-free normalization; radicands with a
// cofactor beyond kTrialLimit^3 that is not a perfect square are rejected.
inline constexpr unsigned long kTrialLimit = 1UL << 21;

// Splits d = s^2 * core with core square-free.
inline std::pair<Integer, Integer> square_free_split(Integer d) {
  Integer square_root(1), core(1);
  auto strip = [&](unsigned long p) {
    if (mpz_divisible_ui_p(d.get_mpz_t(), p) == 0) return;
    unsigned long e = 0;
    while (mpz_divisible_ui_p(d.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p);
      ++e;
    }
    square_root *= pow(Integer(p), e / 2);
    if (e % 2 == 1) core *= p;
  };
  strip(2);
  unsigned long p = 3;
  for (; p < kTrialLimit && mpz_cmp_ui(d.get_mpz_t(), p * p * p) >= 0; p += 2) strip(p);
  if (p >= kTrialLimit && mpz_cmp_ui(d.get_mpz_t(), p * p * p) >= 0 && !is_perfect_square(d)) {
    throw Error(ErrorKind::kUnsupportedField, "radicand cofactor " + d.get_str() + " too large to normalize");
  }
  // The cofactor has at most two prime factors, both larger than the cube
  // root bound: it is square-free unless it is a perfect square.
  if (d > 1 && is_perfect_square(d)) {
    square_root *= isqrt(d);
  } else {
    core *= d;
  }
  return {square_root, core};
}

}  // namespace detail

class Number;

/// (a + b*sqrt(d))/c in canonical form: d square-free and > 1, b != 0,
/// c > 0, gcd(a, b, c) = 1. Only constructible through Number.
class QuadIrr {
 public:
  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& c() const { return c_; }
  const Integer& d() const { return d_; }

  std::string str() const {
    std::string out = "(" + a_.get_str();
    out += (b_ < 0) ? "-" : "+";
    out += Integer(::abs(b_)).get_str() + "*sqrt(" + d_.get_str() + "))/" + c_.get_str();
    return out;
  }

  double to_double() const {
    return (a_.get_d() + b_.get_d() * std::sqrt(d_.get_d())) / c_.get_d();
  }

  friend bool operator==(const QuadIrr&, const QuadIrr&) = default;

 private:
  friend class Number;
  QuadIrr(Integer a, Integer b, Integer c, Integer d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

  Integer a_, b_, c_, d_;
};

/// A rational or a real quadratic irrational, always in canonical form.
class Number {
 public:
  Number() : v_(Rational(0)) {}
  Number(long n) : v_(Rational(n)) {}  // NOLINT(google-explicit-constructor)
  Number(const Integer& n) : v_(Rational(n)) {}  // NOLINT(google-explicit-constructor)
  Number(Rational r) : v_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Number(QuadIrr q) : v_(std::move(q)) {}  // NOLINT(google-explicit-constructor)

  /// Normalizes (a + b*sqrt(d))/c; collapses to a Rational when d is a
  /// perfect square or b = 0.
  static Number make(const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
    if (c == 0) throw Error(ErrorKind::kInvalidInput, "zero denominator c");
    if (d <= 0) throw Error(ErrorKind::kUnsupportedField, "d must be positive, got " + d.get_str());
    auto [s, core] = detail::square_free_split(d);
    return from_raw(a, Integer(b * s), c, core);
  }

  static Number sqrt(const Integer& d) { return make(0, 1, 1, d); }

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const QuadIrr& quad() const { return std::get<QuadIrr>(v_); }

  /// Square-free radicand of the field, or 1 for rationals.
  Integer field() const { return is_rational() ? Integer(1) : quad().d(); }

  int sign() const {
    if (is_rational()) return rational().sign();
    return detail::sign_surd(quad().a(), quad().b(), quad().d());
  }

  Integer floor() const {
    if (is_rational()) return rational().floor();
    const QuadIrr& x = quad();
    Integer t = isqrt(Integer(x.b() * x.b() * x.d()));
    // b*sqrt(d) is irrational, so its floor is isqrt(b^2 d) or -isqrt(b^2 d) - 1.
    Integer fl = x.b() > 0 ? t : Integer(-t - 1);
    return floor_div(Integer(x.a() + fl), x.c());
  }

  Integer ceil() const {
    if (is_rational()) return rational().ceil();
    return floor() + 1;
  }

  Number operator-() const { return from_raw(Integer(-raw().a), Integer(-raw().b), raw().c, raw().d); }

  friend Number operator+(const Number& x, const Number& y) {
    Integer d = common_field(x, y);
    Raw u = x.raw(), v = y.raw();
    return from_raw(Integer(u.a * v.c + v.a * u.c), Integer(u.b * v.c + v.b * u.c), Integer(u.c * v.c), d);
  }
  friend Number operator-(const Number& x, const Number& y) { return x + (-y); }
  friend Number operator*(const Number& x, const Number& y) {
    Integer d = common_field(x, y);
    Raw u = x.raw(), v = y.raw();
    return from_raw(Integer(u.a * v.a + u.b * v.b * d), Integer(u.a * v.b + u.b * v.a), Integer(u.c * v.c), d);
  }
  friend Number operator/(const Number& x, const Number& y) { return x * y.inv(); }

  Number inv() const {
    if (sign() == 0) throw Error(ErrorKind::kDivisionByZero, "inverse of zero");
    Raw r = raw();
    // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d)
    return from_raw(Integer(r.c * r.a), Integer(-r.c * r.b), Integer(r.a * r.a - r.b * r.b * r.d), r.d);
  }

  Number sub_int(const Integer& m) const { return *this - Number(m); }

  /// (a x + b) / (c x + d)
  Number mobius(const Integer& a, const Integer& b, const Integer& c, const Integer& d) const {
    Number den = Number(c) * *this + Number(d);
    if (den.sign() == 0) throw Error(ErrorKind::kDivisionByZero, "mobius denominator vanishes");
    return (Number(a) * *this + Number(b)) / den;
  }

  Number pow(unsigned long e) const {
    Number result(1), base = *this;
    while (e > 0) {
      if (e & 1UL) result = result * base;
      e >>= 1;
      if (e > 0) base = base * base;
    }
    return result;
  }

  Number abs() const { return sign() < 0 ? -*this : *this; }

  /// Exact comparison; fields may differ.
  friend std::strong_ordering operator<=>(const Number& x, const Number& y) {
    int s = compare_sign(x, y);
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend bool operator==(const Number& x, const Number& y) { return x.v_ == y.v_; }

  std::string str() const { return is_rational() ? rational().str() : quad().str(); }

  double to_double() const { return is_rational() ? rational().to_double() : quad().to_double(); }

  /// Parses canonical text "(a+b*sqrt(d))/c", rationals, decimals and the
  /// aliases "phi" and "silver".
  static Number parse(std::string_view text) {
    static const std::regex kQuad(
        R"(\s*\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\s*\(\s*(\d+)\s*\)\s*\)\s*(?:/\s*([+-]?\d+))?\s*)");
    std::string s(text);
    if (s == "phi") return make(1, 1, 2, 5);
    if (s == "silver") return make(1, 1, 1, 2);
    std::smatch m;
    if (std::regex_match(s, m, kQuad)) {
      auto to_int = [](std::string t) {
        if (!t.empty() && t.front() == '+') t.erase(0, 1);
        return Integer(t);
      };
      Integer a = to_int(m[1].str());
      Integer b = to_int(m[3].str());
      if (m[2].str() == "-") b = -b;
      Integer d = to_int(m[4].str());
      Integer c = m[5].matched ? to_int(m[5].str()) : Integer(1);
      if (c == 0) throw Error(ErrorKind::kParse, "zero denominator in '" + s + "'");
      if (d == 0) throw Error(ErrorKind::kParse, "sqrt(0) in '" + s + "'");
      return make(a, b, c, d);
    }
    try {
      return Number(Rational::parse(s));
    } catch (const Error&) {
      throw Error(ErrorKind::kParse, "not an exact number: '" + s + "'");
    }
  }

 private:
  struct Raw {
    Integer a, b, c, d;
  };

  Raw raw() const {
    if (is_rational()) return {rational().num(), 0, rational().den(), 1};
    const QuadIrr& q = quad();
    return {q.a(), q.b(), q.c(), q.d()};
  }

  static Integer common_field(const Number& x, const Number& y) {
    if (x.is_rational()) return y.field();
    if (y.is_rational()) return x.field();
    if (x.quad().d() != y.quad().d()) {
      throw Error(ErrorKind::kUnsupportedField,
                  "arithmetic across Q(sqrt(" + x.quad().d().get_str() + ")) and Q(sqrt(" +
                      y.quad().d().get_str() + "))");
    }
    return x.quad().d();
  }

  // d must already be square-free (or 1).
  static Number from_raw(Integer a, Integer b, Integer c, const Integer& d) {
    if (c == 0) throw Error(ErrorKind::kDivisionByZero, "zero denominator");
    if (d == 1) {
      a += b;
      b = 0;
    }
    if (b == 0) return Number(Rational(a, c));
    if (c < 0) {
      a = -a;
      b = -b;
      c = -c;
    }
    Integer g = gcd(gcd(a, b), c);
    if (g != 1) {
      a /= g;
      b /= g;
      c /= g;
    }
    return Number(QuadIrr(std::move(a), std::move(b), std::move(c), d));
  }

  static int compare_sign(const Number& x, const Number& y) {
    if (x.is_rational() || y.is_rational() || x.quad().d() == y.quad().d()) return (x - y).sign();
    // (a1 + b1 r1)/c1 - (a2 + b2 r2)/c2, scaled by c1 c2 > 0.
    const QuadIrr& u = x.quad();
    const QuadIrr& v = y.quad();
    return detail::sign_two_surds(Integer(u.a() * v.c() - v.a() * u.c()), Integer(u.b() * v.c()), u.d(),
                                  Integer(-v.b() * u.c()), v.d());
  }

  std::variant<Rational, QuadIrr> v_;
};

}  // namespace diophset
