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

// Excluded-interval covers of [0,1], measure brackets, touching points and
// isolation certificates.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "diophset/diocore.hpp"

namespace diophset {

struct Source {
  long p = 0;
  long q = 0;
  friend bool operator==(const Source&, const Source&) = default;
};

struct CoverOptions {
  unsigned threads = 1;
  unsigned precision = 128;
  unsigned max_precision = 1024;
};

/// gamma / q^(tau+1) for q = 1..Q: exact value when available, a dyadic
/// enclosure, and a double approximation.
class RadiusTable {
 public:
  struct Entry {
    std::optional<Number> exact;
    Rational lower;
    Rational upper;
    double approx = 0;
  };

  RadiusTable(const DiophParams& params, long Q, const CoverOptions& options)
      : params_(params), precision_(options.precision), max_precision_(options.max_precision) {
    entries_.resize(static_cast<std::size_t>(Q) + 1);
    unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(Q)));
    auto fill = [&](unsigned t) {
      for (long q = 1 + t; q <= Q; q += threads) entries_[static_cast<std::size_t>(q)] = compute(q);
    };
    if (threads == 1) {
      fill(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(fill, t);
      for (auto& th : pool) th.join();
    }
  }

  const Entry& at(long q) const { return entries_[static_cast<std::size_t>(q)]; }
  unsigned precision() const { return precision_; }
  unsigned max_precision() const { return max_precision_; }

  Enclosure enclose(long q, unsigned prec) const {
    const Entry& e = at(q);
    if (prec <= precision_) return {e.lower, e.upper, precision_, false};
    if (e.exact) return diophset::enclose(*e.exact, prec);
    return interval_radius(Integer(q), params_, prec).enclose(prec);
  }

 private:
  Entry compute(long q) const {
    CertifiedReal r = interval_radius(Integer(q), params_, precision_);
    Entry e;
    Enclosure enc = r.enclose(precision_);
    if (r.is_exact()) e.exact = r.exact();
    e.lower = enc.lower;
    e.upper = enc.upper;
    e.approx = ((enc.lower + enc.upper) / Rational(2)).to_double();
    return e;
  }

  DiophParams params_;
  unsigned precision_;
  unsigned max_precision_;
  std::vector<Entry> entries_;
};

/// A cover endpoint: p/q -/+ radius(q), or an edge of the guard band.
struct Endpoint {
  enum class Kind : std::uint8_t { kLeft, kRight, kBandLow, kBandHigh };
  Kind kind = Kind::kLeft;
  long p = 0;
  long q = 1;

  bool is_band() const { return kind == Kind::kBandLow || kind == Kind::kBandHigh; }
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

enum class Order { kLess, kEqual, kGreater, kUnknown };

/// Two consecutive pieces of a merged interval whose relative position could
/// not be decided; the union may have a small gap between them.
struct AmbiguousGap {
  Endpoint right_of_lower;
  Endpoint left_of_upper;
};

struct CoverInterval {
  Endpoint left;
  Endpoint right;
  std::size_t source_begin = 0;
  std::size_t source_end = 0;
  std::size_t gap_begin = 0;
  std::size_t gap_end = 0;
};

struct TouchingPoint {
  Number xi;
  Source left;   // xi is the right end of I(left)
  Source right;  // xi is the left end of I(right)
};

class IntervalCover {
 public:
  const DiophParams& params() const { return params_; }
  long Q() const { return Q_; }
  const Number& band_low() const { return band_low_; }
  const Number& band_high() const { return band_high_; }
  const std::vector<CoverInterval>& intervals() const { return intervals_; }
  const std::vector<AmbiguousGap>& ambiguous_gaps() const { return gaps_; }
  std::size_t unresolved_extrema() const { return unresolved_; }
  const RadiusTable& radii() const { return *radii_; }

  std::span<const Source> sources(const CoverInterval& i) const {
    return {sources_.data() + i.source_begin, i.source_end - i.source_begin};
  }

  std::optional<Number> exact_value(const Endpoint& e) const {
    switch (e.kind) {
      case Endpoint::Kind::kBandLow: return band_low_;
      case Endpoint::Kind::kBandHigh: return band_high_;
      default: break;
    }
    const auto& r = radii_->at(e.q);
    if (!r.exact) return std::nullopt;
    Number c(Rational(e.p, e.q));
    return e.kind == Endpoint::Kind::kLeft ? c - *r.exact : c + *r.exact;
  }

  Enclosure enclose(const Endpoint& e, unsigned prec) const {
    if (e.is_band()) return diophset::enclose(e.kind == Endpoint::Kind::kBandLow ? band_low_ : band_high_, prec);
    Enclosure r = radii_->enclose(e.q, prec);
    Rational c(e.p, e.q);
    if (e.kind == Endpoint::Kind::kLeft) return detail::outward(c - r.upper, c - r.lower, prec);
    return detail::outward(c + r.lower, c + r.upper, prec);
  }

  double approx(const Endpoint& e) const {
    switch (e.kind) {
      case Endpoint::Kind::kBandLow: return band_low_d_;
      case Endpoint::Kind::kBandHigh: return band_high_d_;
      case Endpoint::Kind::kLeft: return static_cast<double>(e.p) / static_cast<double>(e.q) - radii_->at(e.q).approx;
      case Endpoint::Kind::kRight: return static_cast<double>(e.p) / static_cast<double>(e.q) + radii_->at(e.q).approx;
    }
    return 0;
  }

  /// Exact order when both values are exact; otherwise refined enclosures.
  /// kEqual is only ever reported for exactly equal values.
  Order compare(const Endpoint& a, const Endpoint& b) const {
    if (a == b) return Order::kEqual;
    double x = approx(a), y = approx(b);
    double tol = 1e-14 * (std::fabs(x) + std::fabs(y) + 1e-300);
    if (x - y > tol) return Order::kGreater;
    if (y - x > tol) return Order::kLess;
    auto ea = exact_value(a), eb = exact_value(b);
    if (ea && eb) {
      auto o = *ea <=> *eb;
      return o < 0 ? Order::kLess : (o > 0 ? Order::kGreater : Order::kEqual);
    }
    for (unsigned prec = radii_->precision();; prec *= 2) {
      Enclosure u = enclose(a, prec), v = enclose(b, prec);
      if (u.upper < v.lower) return Order::kLess;
      if (u.lower > v.upper) return Order::kGreater;
      if (prec >= radii_->max_precision()) return Order::kUnknown;
    }
  }

 private:
  friend IntervalCover build_cover(const DiophParams&, long, const CoverOptions&);

  IntervalCover(const DiophParams& params, long Q, const CoverOptions& options)
      : params_(params), Q_(Q), radii_(std::make_shared<RadiusTable>(params, Q, options)) {
    Number delta = params.gamma() < Number(1) ? params.gamma() : Number(1);
    band_low_ = -delta;
    band_high_ = Number(1) + delta;
    band_low_d_ = band_low_.to_double();
    band_high_d_ = band_high_.to_double();
  }

  DiophParams params_;
  long Q_;
  std::shared_ptr<const RadiusTable> radii_;
  Number band_low_ = Number(0);
  Number band_high_ = Number(1);
  double band_low_d_ = 0;
  double band_high_d_ = 1;
  std::vector<CoverInterval> intervals_;
  std::vector<Source> sources_;
  std::vector<AmbiguousGap> gaps_;
  std::size_t unresolved_ = 0;
};

namespace detail {

/// Calls f(num, den) for every reduced fraction in [lo, lo+1) of order Q, in
/// increasing order.
template <class F>
void farey_unit(long shift, long Q, F&& f) {
  long a = 0, b = 1, c = 1, d = Q;
  f(shift, 1L);
  while (c < d) {
    f(shift * d + c, d);
    long k = (Q + b) / d;
    long e = k * c - a, g = k * d - b;
    a = c;
    b = d;
    c = e;
    d = g;
  }
}

}  // namespace detail

/// Union of I(p,q), q <= Q, restricted to the band [-delta, 1 + delta] with
/// delta = min(gamma, 1). Intervals are processed in order of their centers;
/// the stack keeps merged pieces sorted and disjoint.
inline IntervalCover build_cover(const DiophParams& params, long Q, const CoverOptions& options = {}) {
  if (Q < 1) throw Error(ErrorKind::kInvalidInput, "Q must be >= 1");
  IntervalCover cover(params, Q, options);
  if (params.kind() == DiophParams::Kind::kUnconstrained) return cover;

  auto& stack = cover.intervals_;
  auto& sources = cover.sources_;
  auto& gaps = cover.gaps_;
  const RadiusTable& radii = *cover.radii_;
  const double lo = cover.band_low_d_, hi = cover.band_high_d_;

  auto pick = [&](const Endpoint& a, const Endpoint& b, bool want_min) {
    Order o = cover.compare(a, b);
    if (o == Order::kUnknown) ++cover.unresolved_;
    bool a_first = (o == Order::kLess || o == Order::kEqual || o == Order::kUnknown);
    return (a_first == want_min) ? a : b;
  };

  auto add = [&](long p, long q) {
    double c = static_cast<double>(p) / static_cast<double>(q);
    double r = radii.at(q).approx * (1 + 1e-9) + 1e-12;
    if (c + r <= lo || c - r >= hi) return;
    CoverInterval cur{{Endpoint::Kind::kLeft, p, q}, {Endpoint::Kind::kRight, p, q},
                      sources.size(), sources.size() + 1, gaps.size(), gaps.size()};
    sources.push_back({p, q});
    while (!stack.empty()) {
      CoverInterval& top = stack.back();
      Order o = cover.compare(top.right, cur.left);
      if (o == Order::kLess || o == Order::kEqual) break;
      if (o == Order::kUnknown) gaps.push_back({top.right, cur.left});
      CoverInterval merged{pick(top.left, cur.left, true), pick(top.right, cur.right, false), top.source_begin,
                           cur.source_end, std::min(top.gap_begin, cur.gap_begin), gaps.size()};
      stack.pop_back();
      cur = merged;
    }
    stack.push_back(cur);
  };

  for (long shift = -1; shift <= 1; ++shift) detail::farey_unit(shift, Q, add);
  add(2, 1);

  // Clip to the band.
  Endpoint low{Endpoint::Kind::kBandLow, 0, 1}, high{Endpoint::Kind::kBandHigh, 0, 1};
  std::vector<CoverInterval> clipped;
  clipped.reserve(stack.size());
  for (CoverInterval iv : stack) {
    Order r = cover.compare(iv.right, low);
    Order l = cover.compare(iv.left, high);
    if (r == Order::kLess || r == Order::kEqual || l == Order::kGreater || l == Order::kEqual) continue;
    if (cover.compare(iv.left, low) != Order::kGreater) iv.left = low;
    if (cover.compare(iv.right, high) != Order::kLess) iv.right = high;
    clipped.push_back(iv);
  }
  stack = std::move(clipped);
  return cover;
}

/// Rigorous upper bound for the integral of 2 gamma (x+1)/x^(tau+1) over
/// [X, inf), which dominates the measure removed by every q > X.
inline Rational tail_integral_upper(const DiophParams& params, const Rational& X, unsigned prec = 256) {
  if (params.tau().compare_one() <= 0) throw Error(ErrorKind::kInvalidInput, "tail diverges for tau = 1");
  Enclosure tau = params.tau().enclose(prec);
  for (unsigned p = prec; tau.lower <= Rational(1); p *= 2) tau = params.tau().enclose(p);
  Enclosure g = enclose(params.gamma(), prec);
  detail::Mpfr x(prec), t(prec), e(prec), a(prec), b(prec), s(prec);
  // Every factor decreases in tau, so the lower end of tau bounds from above.
  mpfr_set_q(t.get(), tau.lower.get().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(x.get(), X.get().get_mpq_t(), MPFR_RNDD);
  mpfr_si_sub(e.get(), 1, t.get(), MPFR_RNDU);     // 1 - tau (>= exact)
  mpfr_pow(a.get(), x.get(), e.get(), MPFR_RNDU);  // X^(1-tau), X >= 1
  mpfr_sub_ui(s.get(), t.get(), 1, MPFR_RNDD);     // tau - 1 (<= exact)
  mpfr_div(a.get(), a.get(), s.get(), MPFR_RNDU);
  mpfr_neg(e.get(), t.get(), MPFR_RNDU);
  mpfr_pow(b.get(), x.get(), e.get(), MPFR_RNDU);
  mpfr_div(b.get(), b.get(), t.get(), MPFR_RNDU);
  mpfr_add(a.get(), a.get(), b.get(), MPFR_RNDU);
  mpfr_set_q(s.get(), g.upper.get().get_mpq_t(), MPFR_RNDU);
  mpfr_mul(a.get(), a.get(), s.get(), MPFR_RNDU);
  mpfr_mul_ui(a.get(), a.get(), 2, MPFR_RNDU);
  return a.to_rational();
}

struct MeasureBounds {
  Rational lower;
  Rational upper;
  Rational covered_inner;  // lower bound for |cover ∩ [0,1]|
  Rational covered_outer;  // upper bound for |cover ∩ [0,1]|
  Rational tail;           // bound used for q > Q
  bool tail_diverges = false;
};

/// Lebesgue measure of D ∩ [0,1]: upper = 1 - |cover ∩ [0,1]|, lower
/// subtracts the measure that q > Q can still remove, bounded by the
/// integral from Q + 1/2 (the summand is convex in q).
inline MeasureBounds measure_bounds(const IntervalCover& cover) {
  MeasureBounds out;
  const DiophParams& params = cover.params();
  if (params.kind() == DiophParams::Kind::kUnconstrained) {
    out.lower = out.upper = Rational(1);
    return out;
  }
  if (params.kind() == DiophParams::Kind::kEmpty) {
    out.covered_inner = out.covered_outer = Rational(1);
    return out;
  }
  const unsigned prec = cover.radii().precision();
  detail::Mpfr inner(prec), outer(prec), l_lo(prec), l_hi(prec), r_lo(prec), r_hi(prec), tmp(prec);
  mpfr_set_zero(inner.get(), 1);
  mpfr_set_zero(outer.get(), 1);
  auto load = [&](detail::Mpfr& lo, detail::Mpfr& hi, const Endpoint& e) {
    Enclosure enc = cover.enclose(e, prec);
    mpfr_set_q(lo.get(), enc.lower.get().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.get(), enc.upper.get().get_mpq_t(), MPFR_RNDU);
  };
  auto clamp01 = [](detail::Mpfr& v) {
    if (mpfr_cmp_si(v.get(), 0) < 0) mpfr_set_si(v.get(), 0, MPFR_RNDN);
    if (mpfr_cmp_si(v.get(), 1) > 0) mpfr_set_si(v.get(), 1, MPFR_RNDN);
  };
  for (const auto& iv : cover.intervals()) {
    if (cover.approx(iv.right) < -0.5 || cover.approx(iv.left) > 1.5) continue;
    load(l_lo, l_hi, iv.left);
    load(r_lo, r_hi, iv.right);
    for (auto* v : {&l_lo, &l_hi, &r_lo, &r_hi}) clamp01(*v);
    mpfr_sub(tmp.get(), r_lo.get(), l_hi.get(), MPFR_RNDD);
    if (mpfr_sgn(tmp.get()) > 0) mpfr_add(inner.get(), inner.get(), tmp.get(), MPFR_RNDD);
    mpfr_sub(tmp.get(), r_hi.get(), l_lo.get(), MPFR_RNDU);
    if (mpfr_sgn(tmp.get()) > 0) mpfr_add(outer.get(), outer.get(), tmp.get(), MPFR_RNDU);
  }
  for (const auto& g : cover.ambiguous_gaps()) {
    load(r_lo, r_hi, g.right_of_lower);
    load(l_lo, l_hi, g.left_of_upper);
    mpfr_sub(tmp.get(), l_hi.get(), r_lo.get(), MPFR_RNDU);
    if (mpfr_sgn(tmp.get()) > 0) mpfr_sub(inner.get(), inner.get(), tmp.get(), MPFR_RNDD);
  }
  if (cover.unresolved_extrema() > 0) {
    // Each undecided min/max moves an endpoint by less than 2^-(max_prec-2).
    mpfr_set_ui_2exp(tmp.get(), 2 * cover.unresolved_extrema(), -static_cast<long>(cover.radii().max_precision()) + 2,
                     MPFR_RNDU);
    mpfr_sub(inner.get(), inner.get(), tmp.get(), MPFR_RNDD);
    mpfr_add(outer.get(), outer.get(), tmp.get(), MPFR_RNDU);
  }
  out.covered_inner = std::max(Rational(0), inner.to_rational());
  out.covered_outer = std::min(Rational(1), outer.to_rational());
  out.upper = Rational(1) - out.covered_inner;
  if (params.tau().compare_one() <= 0) {
    out.tail_diverges = true;
    out.lower = Rational(0);
    return out;
  }
  out.tail = tail_integral_upper(params, Rational(cover.Q()) + Rational(1, 2));
  out.lower = std::max(Rational(0), Rational(1) - out.covered_outer - out.tail);
  return out;
}

/// Points where two consecutive merged intervals meet exactly.
inline std::vector<TouchingPoint> find_touching_points(const IntervalCover& cover) {
  std::vector<TouchingPoint> out;
  const auto& ivs = cover.intervals();
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
    const Endpoint& r = ivs[i].right;
    const Endpoint& l = ivs[i + 1].left;
    if (r.is_band() || l.is_band()) continue;
    if (cover.compare(r, l) != Order::kEqual) continue;
    out.push_back({*cover.exact_value(r), {r.p, r.q}, {l.p, l.q}});
  }
  return out;
}

/// Adjacent pieces whose separation could not be decided; never confirmed.
inline std::vector<AmbiguousGap> unconfirmed_candidates(const IntervalCover& cover) { return cover.ambiguous_gaps(); }

/// True when every point of [0,1] outside the cover is a rational touching
/// point (rationals are never members), so D ∩ [0,1] is empty.
inline bool proves_empty(const IntervalCover& cover) {
  const auto& ivs = cover.intervals();
  if (ivs.empty()) return false;
  if (!cover.ambiguous_gaps().empty()) return false;
  auto order_vs = [&](const Endpoint& e, const Number& x) -> std::optional<std::strong_ordering> {
    if (auto v = cover.exact_value(e)) return *v <=> x;
    for (unsigned prec = cover.radii().precision(); prec <= cover.radii().max_precision(); prec *= 2) {
      Enclosure enc = cover.enclose(e, prec);
      if (Number(enc.upper) < x) return std::strong_ordering::less;
      if (Number(enc.lower) > x) return std::strong_ordering::greater;
    }
    return std::nullopt;
  };
  // [0, first.left] must be empty or {0}.
  auto first = order_vs(ivs.front().left, Number(0));
  if (!first || *first > 0) return false;
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
    auto r_vs_one = order_vs(ivs[i].right, Number(1));
    if (!r_vs_one) return false;
    if (*r_vs_one > 0) return true;  // the rest lies beyond 1
    Order o = cover.compare(ivs[i].right, ivs[i + 1].left);
    if (o == Order::kGreater) continue;
    if (o != Order::kEqual) return false;
    if (!cover.exact_value(ivs[i].right)->is_rational()) return false;
  }
  auto last = order_vs(ivs.back().right, Number(1));
  return last && *last >= 0;
}

struct IsolationCertificate {
  Number xi;
  DiophParams params;
  Source left;
  Source right;
  Number left_radius;   // xi - left.p/left.q
  Number right_radius;  // right.p/right.q - xi
  MembershipVerdict membership;
};

struct Rejection {
  std::string clause;  // "left-identity", "right-identity", "membership"
  std::string detail;
};

struct Incomplete {
  std::string reason;
};

struct CertificationResult {
  enum class Kind { kCertified, kRejected, kIncomplete };
  std::variant<IsolationCertificate, Rejection, Incomplete> value = Incomplete{"not run"};

  Kind kind() const { return static_cast<Kind>(value.index()); }
  bool ok() const { return kind() == Kind::kCertified; }
  const IsolationCertificate& certificate() const { return std::get<IsolationCertificate>(value); }
  const Rejection& rejection() const { return std::get<Rejection>(value); }
  const Incomplete& incomplete() const { return std::get<Incomplete>(value); }
};

inline std::string_view to_string(CertificationResult::Kind kind) {
  switch (kind) {
    case CertificationResult::Kind::kCertified: return "certified";
    case CertificationResult::Kind::kRejected: return "rejected";
    case CertificationResult::Kind::kIncomplete: return "incomplete";
  }
  return "?";
}

namespace detail {

// side = -1: xi - p/q == radius(q); side = +1: p/q - xi == radius(q).
// Returns the radius on success, a rejection, or an incomplete marker.
inline std::variant<Number, Rejection, Incomplete> check_boundary(const Number& xi, const DiophParams& params,
                                                                  const Source& s, int side, unsigned max_prec) {
  std::string clause = side < 0 ? "left-identity" : "right-identity";
  if (s.q <= 0) return Rejection{clause, "q must be positive"};
  Number center(Rational(s.p, s.q));
  Number dist = side < 0 ? xi - center : center - xi;
  std::string where = std::to_string(s.p) + "/" + std::to_string(s.q);
  if (dist.sign() <= 0) return Rejection{clause, "xi is not on the required side of " + where};
  CertifiedReal r = interval_radius(Integer(s.q), params, kDefaultPrecision);
  if (r.is_exact()) {
    if (r.exact() == dist) return r.exact();
    return Rejection{clause, "distance " + dist.str() + " != radius " + r.exact().str()};
  }
  auto [order, value] =
      compare_refining([&](unsigned prec) { return interval_radius(Integer(s.q), params, prec); }, dist, max_prec);
  if (order) return Rejection{clause, "radius at " + where + " differs from the distance (enclosure " + value.str() + ")"};
  return Incomplete{clause + " at " + where + " has no exact form"};
}

}  // namespace detail

/// Two-interval isolation: xi is the right end of I(left) and the left end of
/// I(right), and xi is a member. Identities are checked exactly.
inline CertificationResult certify_isolated(const Number& xi, const DiophParams& params, const Source& left,
                                            const Source& right, unsigned max_precision = kDefaultMaxPrecision) {
  if (xi.is_rational()) return {Rejection{"membership", "rational xi is never a member"}};
  auto l = detail::check_boundary(xi, params, left, -1, max_precision);
  if (auto* rej = std::get_if<Rejection>(&l)) return {*rej};
  auto r = detail::check_boundary(xi, params, right, +1, max_precision);
  if (auto* rej = std::get_if<Rejection>(&r)) return {*rej};
  if (auto* inc = std::get_if<Incomplete>(&l)) return {*inc};
  if (auto* inc = std::get_if<Incomplete>(&r)) return {*inc};
  MembershipOptions opts;
  opts.max_precision = max_precision;
  MembershipVerdict v = is_member(xi, params, opts);
  switch (v.kind()) {
    case VerdictKind::kNotMember:
      return {Rejection{"membership", "criterion fails at k=" + std::to_string(v.not_member().witness_k)}};
    case VerdictKind::kUnknown: return {Incomplete{"membership undecided: " + v.unknown().reason}};
    case VerdictKind::kMember: break;
  }
  return {IsolationCertificate{xi, params, left, right, std::get<Number>(l), std::get<Number>(r), std::move(v)}};
}

/// Re-runs every check of a certificate.
inline bool validate_certificate(const IsolationCertificate& cert) {
  CertificationResult again = certify_isolated(cert.xi, cert.params, cert.left, cert.right);
  return again.ok() && again.certificate().left_radius == cert.left_radius &&
         again.certificate().right_radius == cert.right_radius;
}

/// Smallest-q sources (q <= Q) whose intervals end exactly at xi from the
/// left and start exactly at xi from the right.
inline std::optional<std::pair<Source, Source>> find_touching_at(const Number& xi, const DiophParams& params, long Q) {
  if (params.kind() != DiophParams::Kind::kProper) return std::nullopt;
  const double x = xi.to_double();
  const double g = params.gamma().to_double();
  Enclosure tau_enc = params.tau().enclose(64);
  const double tau = ((tau_enc.lower + tau_enc.upper) / Rational(2)).to_double();
  std::optional<Source> left, right;
  for (long q = 1; q <= Q && !(left && right); ++q) {
    double qd = static_cast<double>(q);
    double r = g / std::pow(qd, tau + 1);
    double base = std::floor(x * qd);
    for (double pd : {base, base + 1}) {
      double dist = x - pd / qd;
      bool is_left = dist > 0;
      if (is_left ? left.has_value() : right.has_value()) continue;
      if (std::fabs(std::fabs(dist) - r) > 1e-9 * r + 1e-15) continue;
      Source s{static_cast<long>(pd), q};
      auto check = detail::check_boundary(xi, params, s, is_left ? -1 : +1, 256);
      if (!std::holds_alternative<Number>(check)) continue;
      (is_left ? left : right) = s;
    }
  }
  if (left && right) return std::make_pair(*left, *right);
  return std::nullopt;
}

/// One row per merged interval: exact or symbolic endpoints, 20-digit
/// display decimals, and the contributing p/q list.
inline std::string endpoint_text(const IntervalCover& cover, const Endpoint& e) {
  if (auto v = cover.exact_value(e)) return v->str();
  return std::to_string(e.p) + "/" + std::to_string(e.q) + (e.kind == Endpoint::Kind::kLeft ? "-" : "+") +
         "gamma/" + std::to_string(e.q) + "^(tau+1)";
}

inline std::string endpoint_decimal(const IntervalCover& cover, const Endpoint& e) {
  if (auto v = cover.exact_value(e)) return to_decimal(*v);
  return to_decimal(cover.enclose(e, 128));
}

inline void write_cover_csv(const IntervalCover& cover, std::ostream& out) {
  out << "left,right,left_decimal,right_decimal,sources\n";
  for (const auto& iv : cover.intervals()) {
    out << '"' << endpoint_text(cover, iv.left) << "\",\"" << endpoint_text(cover, iv.right) << "\","
        << endpoint_decimal(cover, iv.left) << ',' << endpoint_decimal(cover, iv.right) << ",\"";
    bool first = true;
    for (const auto& s : cover.sources(iv)) {
      out << (first ? "" : ";") << s.p << '/' << s.q;
      first = false;
    }
    out << "\"\n";
  }
}

}  // namespace diophset
