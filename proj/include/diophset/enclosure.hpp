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

// Certified real enclosures with dyadic endpoints and directed rounding,
// the exponent type used in q^tau, and values that are either exact or
// enclosed.

#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <optional>
#include <regex>
#include <string>
#include <utility>
#include <variant>

#include "diophset/exactnum.hpp"

namespace diophset {

inline constexpr unsigned kDefaultPrecision = 64;
inline constexpr unsigned kDefaultMaxPrecision = 4096;

namespace detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Rational to_rational() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return Rational(q);
  }

 private:
  mpfr_t v_;
};

inline mpfr_prec_t bits_of(const Integer& x) {
  return static_cast<mpfr_prec_t>(mpz_sizeinbase(x.get_mpz_t(), 2)) + 2;
}

}  // namespace detail

inline Rational round_down(const Rational& x, unsigned prec) {
  detail::Mpfr m(prec);
  mpfr_set_q(m.get(), x.get().get_mpq_t(), MPFR_RNDD);
  return m.to_rational();
}

inline Rational round_up(const Rational& x, unsigned prec) {
  detail::Mpfr m(prec);
  mpfr_set_q(m.get(), x.get().get_mpq_t(), MPFR_RNDU);
  return m.to_rational();
}

/// lower <= value <= upper, both dyadic. `exhausted` marks results that hit
/// the precision ceiling before becoming decisive.
struct Enclosure {
  Rational lower;
  Rational upper;
  unsigned precision = kDefaultPrecision;
  bool exhausted = false;

  Rational width() const { return upper - lower; }
  bool contains(const Number& x) const { return Number(lower) <= x && x <= Number(upper); }
  bool contains(const Enclosure& inner) const { return lower <= inner.lower && inner.upper <= upper; }

  static Enclosure around(const Rational& x, unsigned prec) {
    return {round_down(x, prec), round_up(x, prec), prec, false};
  }

  std::string str() const { return "[" + lower.str() + "," + upper.str() + "]"; }
};

namespace detail {

inline Enclosure outward(const Rational& lo, const Rational& hi, unsigned prec) {
  return {round_down(lo, prec), round_up(hi, prec), prec, false};
}

}  // namespace detail

inline Enclosure operator+(const Enclosure& x, const Enclosure& y) {
  return detail::outward(x.lower + y.lower, x.upper + y.upper, std::max(x.precision, y.precision));
}

inline Enclosure operator-(const Enclosure& x, const Enclosure& y) {
  return detail::outward(x.lower - y.upper, x.upper - y.lower, std::max(x.precision, y.precision));
}

inline Enclosure operator*(const Enclosure& x, const Enclosure& y) {
  Rational p[4] = {x.lower * y.lower, x.lower * y.upper, x.upper * y.lower, x.upper * y.upper};
  auto [lo, hi] = std::minmax_element(std::begin(p), std::end(p));
  return detail::outward(*lo, *hi, std::max(x.precision, y.precision));
}

inline Enclosure inverse(const Enclosure& x) {
  if (x.lower.sign() <= 0 && x.upper.sign() >= 0) {
    throw Error(ErrorKind::kDivisionByZero, "enclosure " + x.str() + " contains zero");
  }
  return detail::outward(Rational(1) / x.upper, Rational(1) / x.lower, x.precision);
}

inline Enclosure operator/(const Enclosure& x, const Enclosure& y) { return x * inverse(y); }

/// Two-sided enclosure of an exact number at `prec` bits.
inline Enclosure enclose(const Number& x, unsigned prec) {
  if (x.is_rational()) return Enclosure::around(x.rational(), prec);
  const QuadIrr& q = x.quad();
  // Extra working bits absorb cancellation in a + b sqrt(d).
  mpfr_prec_t work = prec + detail::bits_of(q.a()) + detail::bits_of(q.b()) + detail::bits_of(q.d()) + 8;
  detail::Mpfr d(work), s(work);
  mpfr_set_z(d.get(), q.d().get_mpz_t(), MPFR_RNDN);  // exact at this precision
  mpfr_sqrt(s.get(), d.get(), MPFR_RNDD);
  Rational s_lo = s.to_rational();
  mpfr_sqrt(s.get(), d.get(), MPFR_RNDU);
  Rational s_hi = s.to_rational();
  Rational b(q.b()), a(q.a()), c(q.c());
  Rational t1 = b * s_lo, t2 = b * s_hi;
  Rational lo = (a + std::min(t1, t2)) / c;
  Rational hi = (a + std::max(t1, t2)) / c;
  return detail::outward(lo, hi, prec);
}

/// Exponent tau of q^tau: a rational t >= 1, or log(alpha)/log(n) with a
/// quadratic irrational alpha > 1 and an integer n >= 2.
class Exponent {
 public:
  static Exponent rational(const Rational& t) {
    if (t < Rational(1)) throw Error(ErrorKind::kInvalidInput, "exponent " + t.str() + " < 1");
    Exponent e;
    e.v_ = t;
    return e;
  }

  static Exponent log_ratio(const Number& alpha, const Integer& n) {
    if (alpha.is_rational()) {
      throw Error(ErrorKind::kInvalidInput, "log-ratio exponent needs an irrational base, got " + alpha.str());
    }
    if (alpha <= Number(1)) throw Error(ErrorKind::kInvalidInput, "log-ratio base must exceed 1");
    if (n < 2) throw Error(ErrorKind::kInvalidInput, "log-ratio denominator base must be >= 2");
    Exponent e;
    e.v_ = LogRatio{alpha.quad(), n};
    return e;
  }

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  const Rational& value() const { return std::get<Rational>(v_); }
  Number alpha() const { return Number(std::get<LogRatio>(v_).alpha); }
  const Integer& base() const { return std::get<LogRatio>(v_).n; }

  /// Exact sign of tau - 1.
  int compare_one() const {
    if (is_rational()) return (value() - Rational(1)).sign();
    auto c = alpha() <=> Number(base());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }

  Enclosure enclose(unsigned prec) const {
    if (is_rational()) return Enclosure::around(value(), prec);
    const auto& lr = std::get<LogRatio>(v_);
    mpfr_prec_t work = prec + 8;
    Enclosure a = diophset::enclose(Number(lr.alpha), work);
    detail::Mpfr x(work), n(std::max<mpfr_prec_t>(work, detail::bits_of(lr.n))), log_a(work), log_n(work);
    mpfr_set_z(n.get(), lr.n.get_mpz_t(), MPFR_RNDN);
    mpfr_set_q(x.get(), a.lower.get().get_mpq_t(), MPFR_RNDD);
    mpfr_log(log_a.get(), x.get(), MPFR_RNDD);
    Rational la_lo = log_a.to_rational();
    mpfr_set_q(x.get(), a.upper.get().get_mpq_t(), MPFR_RNDU);
    mpfr_log(log_a.get(), x.get(), MPFR_RNDU);
    Rational la_hi = log_a.to_rational();
    mpfr_log(log_n.get(), n.get(), MPFR_RNDD);
    Rational ln_lo = log_n.to_rational();
    mpfr_log(log_n.get(), n.get(), MPFR_RNDU);
    Rational ln_hi = log_n.to_rational();
    // alpha > 1 and n >= 2, so both logarithms are positive.
    return detail::outward(la_lo / ln_hi, la_hi / ln_lo, prec);
  }

  std::string str() const {
    if (is_rational()) return "t=" + value().str();
    const auto& lr = std::get<LogRatio>(v_);
    return "t=log(" + lr.alpha.str() + ")/log(" + lr.n.get_str() + ")";
  }

  /// Accepts "t=p/q", "t=log((a+b*sqrt(d))/c)/log(n)", and the same without
  /// the "t=" prefix.
  static Exponent parse(std::string_view text) {
    static const std::regex kLog(R"(\s*(?:t\s*=\s*)?log\s*\((.*)\)\s*/\s*log\s*\(\s*(\d+)\s*\)\s*)");
    static const std::regex kPrefix(R"(\s*t\s*=\s*(.*))");
    std::string s(text);
    std::smatch m;
    if (std::regex_match(s, m, kLog)) {
      Number alpha = Number::parse(m[1].str());
      return log_ratio(alpha, Integer(m[2].str()));
    }
    std::string body = std::regex_match(s, m, kPrefix) ? m[1].str() : s;
    Rational t;
    try {
      t = Rational::parse(body);
    } catch (const Error&) {
      throw Error(ErrorKind::kParse, "unsupported exponent '" + s + "'");
    }
    return rational(t);
  }

  friend bool operator==(const Exponent& x, const Exponent& y) { return x.v_ == y.v_; }

 private:
  struct LogRatio {
    QuadIrr alpha;
    Integer n;
    friend bool operator==(const LogRatio&, const LogRatio&) = default;
  };

  Exponent() = default;

  std::variant<Rational, LogRatio> v_;
};

/// Either an exact Number or a rigorous enclosure.
class CertifiedReal {
 public:
  CertifiedReal(Number exact) : v_(std::move(exact)) {}  // NOLINT(google-explicit-constructor)
  CertifiedReal(Enclosure e) : v_(std::move(e)) {}  // NOLINT(google-explicit-constructor)

  bool is_exact() const { return std::holds_alternative<Number>(v_); }
  const Number& exact() const { return std::get<Number>(v_); }

  Enclosure enclose(unsigned prec) const {
    if (is_exact()) return diophset::enclose(exact(), prec);
    return std::get<Enclosure>(v_);
  }

  bool exhausted() const { return !is_exact() && std::get<Enclosure>(v_).exhausted; }

  void mark_exhausted() {
    if (!is_exact()) std::get<Enclosure>(v_).exhausted = true;
  }

  std::string str() const { return is_exact() ? exact().str() : std::get<Enclosure>(v_).str(); }

 private:
  std::variant<Number, Enclosure> v_;
};

namespace detail {

inline bool same_field(const Number& x, const Number& y) {
  return x.is_rational() || y.is_rational() || x.field() == y.field();
}

template <class ExactOp, class EnclosureOp>
CertifiedReal combine(const CertifiedReal& x, const CertifiedReal& y, unsigned prec, ExactOp exact_op,
                      EnclosureOp enclosure_op) {
  if (x.is_exact() && y.is_exact() && same_field(x.exact(), y.exact())) return exact_op(x.exact(), y.exact());
  return enclosure_op(x.enclose(prec), y.enclose(prec));
}

}  // namespace detail

inline CertifiedReal add(const CertifiedReal& x, const CertifiedReal& y, unsigned prec) {
  return detail::combine(x, y, prec, [](const Number& a, const Number& b) { return a + b; },
                         [](const Enclosure& a, const Enclosure& b) { return a + b; });
}

inline CertifiedReal sub(const CertifiedReal& x, const CertifiedReal& y, unsigned prec) {
  return detail::combine(x, y, prec, [](const Number& a, const Number& b) { return a - b; },
                         [](const Enclosure& a, const Enclosure& b) { return a - b; });
}

inline CertifiedReal mul(const CertifiedReal& x, const CertifiedReal& y, unsigned prec) {
  return detail::combine(x, y, prec, [](const Number& a, const Number& b) { return a * b; },
                         [](const Enclosure& a, const Enclosure& b) { return a * b; });
}

inline CertifiedReal div(const CertifiedReal& x, const CertifiedReal& y, unsigned prec) {
  return detail::combine(x, y, prec, [](const Number& a, const Number& b) { return a / b; },
                         [](const Enclosure& a, const Enclosure& b) { return a / b; });
}

/// Exact ordering of x against y when decidable at this precision.
inline std::optional<std::strong_ordering> compare(const CertifiedReal& x, const Number& y) {
  if (x.is_exact()) return x.exact() <=> y;
  Enclosure e = x.enclose(kDefaultPrecision);
  if (Number(e.upper) < y) return std::strong_ordering::less;
  if (Number(e.lower) > y) return std::strong_ordering::greater;
  return std::nullopt;
}

/// Refines eval(prec) from `start` bits, doubling up to `max_prec`, until its
/// order against `target` is decided. Returns the ordering (if decided) and
/// the last value computed.
template <class Eval>
std::pair<std::optional<std::strong_ordering>, CertifiedReal> compare_refining(Eval eval, const Number& target,
                                                                              unsigned max_prec = kDefaultMaxPrecision,
                                                                              unsigned start = kDefaultPrecision) {
  unsigned prec = start;
  while (true) {
    CertifiedReal value = eval(prec);
    auto order = compare(value, target);
    if (order) return {order, value};
    if (prec >= max_prec) {
      value.mark_exhausted();
      return {std::nullopt, value};
    }
    prec = std::min(2 * prec, max_prec);
  }
}

/// q^t exactly, when it is rational or lies in a real quadratic field.
inline std::optional<Number> power_exact(const Integer& q, const Exponent& t) {
  if (q < 1) throw Error(ErrorKind::kInvalidInput, "power base must be >= 1");
  if (q == 1) return Number(1);
  if (t.is_rational()) {
    const Rational& v = t.value();
    if (!v.num().fits_ulong_p() || !v.den().fits_ulong_p()) return std::nullopt;
    unsigned long r = v.num().get_ui(), s = v.den().get_ui();
    // Guard against exact powers with astronomically many digits.
    if (static_cast<double>(mpz_sizeinbase(q.get_mpz_t(), 2)) * static_cast<double>(r) / static_cast<double>(s) >
        1 << 22) {
      return std::nullopt;
    }
    Integer w;
    if (exact_root(q, s, w)) return Number(pow(w, r));
    if (s % 2 == 0 && exact_root(q, s / 2, w)) {
      // q^(r/s) = w^(r/2) with r odd.
      return Number(pow(w, (r - 1) / 2)) * Number::sqrt(w);
    }
    return std::nullopt;
  }
  const Integer& n = t.base();
  Integer rest = q;
  unsigned long j = 0;
  while (rest % n == 0) {
    rest /= n;
    ++j;
  }
  if (rest != 1) return std::nullopt;
  return t.alpha().pow(j);  // n^tau = alpha
}

/// Rigorous two-sided enclosure of q^t; exact (zero width) when possible.
inline CertifiedReal power_enclosure(const Integer& q, const Exponent& t, unsigned prec) {
  if (auto exact = power_exact(q, t)) return *exact;
  Enclosure tau = t.enclose(prec + 16);
  mpfr_prec_t qbits = std::max<mpfr_prec_t>(prec + 16, detail::bits_of(q));
  detail::Mpfr base(qbits), lo_t(prec + 16), hi_t(prec + 16), out(prec);
  mpfr_set_z(base.get(), q.get_mpz_t(), MPFR_RNDN);  // exact at qbits
  mpfr_set_q(lo_t.get(), tau.lower.get().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_t.get(), tau.upper.get().get_mpq_t(), MPFR_RNDU);
  // q > 1, so q^t is increasing in t.
  mpfr_pow(out.get(), base.get(), lo_t.get(), MPFR_RNDD);
  Rational lo = out.to_rational();
  mpfr_pow(out.get(), base.get(), hi_t.get(), MPFR_RNDU);
  Rational hi = out.to_rational();
  return Enclosure{lo, hi, prec, false};
}

namespace detail {

inline std::string print_decimal(const mpq_class& x, int digits) {
  Mpfr m(256);
  mpfr_set_q(m.get(), x.get_mpq_t(), MPFR_RNDN);
  char* buf = nullptr;
  std::string fmt = "%#." + std::to_string(digits) + "Rg";
  mpfr_asprintf(&buf, fmt.c_str(), m.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace detail

/// Round-to-nearest decimal rendering with `digits` significant digits;
/// display only.
inline std::string to_decimal(const Number& x, int digits = 20) {
  if (x.is_rational()) return detail::print_decimal(x.rational().get(), digits);
  Enclosure e = enclose(x, 256);
  return detail::print_decimal((e.lower.get() + e.upper.get()) / 2, digits);
}

inline std::string to_decimal(const Enclosure& e, int digits = 20) {
  return detail::print_decimal((e.lower.get() + e.upper.get()) / 2, digits);
}

}  // namespace diophset
