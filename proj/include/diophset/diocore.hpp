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

// Membership in the Diophantine set
//
//   D(gamma, tau) = { xi : |xi q - p| >= gamma / q^tau  for all p, q >= 1 }.
//
// is_member() decides it through the continued fraction of xi: xi is a member
// iff for every k >= 0
//
//   q_{k+1} / q_k^tau + 1 / (a'_{k+2} q_k^(tau-1)) <= 1 / gamma,
//
// with a'_k the complete quotients. For tau > 1 the infinite family is closed
// by a tail bound: the left side is at most (A + 2) / q_k^(tau-1) once a_{k+1}
// runs inside the period (A = largest period quotient), and q_k increases.
//
// brute_force_member() checks the definition directly and is kept independent
// of the continued-fraction path so it can serve as an oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "diophset/contfrac.hpp"
#include "diophset/enclosure.hpp"

namespace diophset {

class DiophParams {
 public:
  enum class Kind {
    kProper,         // 0 < gamma < 1/2
    kEmpty,          // gamma >= 1/2: no member at all
    kUnconstrained,  // gamma = 0: every real is a member
  };

  DiophParams(Number gamma, Exponent tau) : gamma_(std::move(gamma)), tau_(std::move(tau)) {
    if (gamma_.sign() < 0) throw Error(ErrorKind::kInvalidInput, "gamma must be >= 0, got " + gamma_.str());
    if (tau_.compare_one() < 0) throw Error(ErrorKind::kInvalidInput, "tau < 1: " + tau_.str());
  }

  const Number& gamma() const { return gamma_; }
  const Exponent& tau() const { return tau_; }

  Kind kind() const {
    if (gamma_.sign() == 0) return Kind::kUnconstrained;
    if (gamma_ >= Number(Rational(1, 2))) return Kind::kEmpty;
    return Kind::kProper;
  }

  bool is_empty() const { return kind() == Kind::kEmpty; }

  Number inverse_gamma() const { return gamma_.inv(); }

  std::string str() const { return "gamma=" + gamma_.str() + " tau=" + tau_.str(); }

 private:
  Number gamma_;
  Exponent tau_;
};

inline std::string_view to_string(DiophParams::Kind kind) {
  switch (kind) {
    case DiophParams::Kind::kProper: return "proper";
    case DiophParams::Kind::kEmpty: return "empty";
    case DiophParams::Kind::kUnconstrained: return "unconstrained";
  }
  return "unknown";
}

/// Left side of the membership criterion at index k.
inline CertifiedReal lemma_lhs(const CFExpansion& cf, std::size_t k, const DiophParams& params,
                               unsigned prec = kDefaultPrecision) {
  Convergent ck = cf.convergent(static_cast<long>(k));
  Convergent next = cf.convergent(static_cast<long>(k) + 1);
  Number tail = cf.complete_quotient(k + 2);
  CertifiedReal q_pow = power_enclosure(ck.q, params.tau(), prec);
  // 1 / (a' q^(tau-1)) = q / (a' q^tau)
  CertifiedReal first = div(Number(next.q), q_pow, prec);
  CertifiedReal second = div(Number(ck.q), mul(tail, q_pow, prec), prec);
  return add(first, second, prec);
}

inline CertifiedReal lemma_lhs(const Number& xi, std::size_t k, const DiophParams& params,
                               unsigned prec = kDefaultPrecision) {
  return lemma_lhs(CFExpansion::expand(xi), k, params, prec);
}

/// Tail bound at index K: (A + 2) / q_K^(tau-1) <= 1/gamma closes every k >= K.
struct TailCertificate {
  std::size_t K = 0;
  Integer A;
  Integer q_K;
  CertifiedReal bound = Number(0);
  bool trivial = false;  // gamma = 0: nothing to bound
};

struct Member {
  TailCertificate certificate;
  std::vector<std::size_t> equality_ks;  // k < K where the criterion holds with equality
};

struct NotMember {
  std::size_t witness_k = 0;
  Convergent convergent;           // (p_k, q_k) violating the definition
  std::optional<CertifiedReal> lhs;  // absent for rational xi (left side is infinite)
  bool rational_source = false;
};

struct Unknown {
  std::size_t checked_up_to_k = 0;  // every k below this passed
  std::string reason;
  bool bounded_type_candidate = false;
};

enum class VerdictKind { kMember, kNotMember, kUnknown };

inline std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kMember: return "Member";
    case VerdictKind::kNotMember: return "NotMember";
    case VerdictKind::kUnknown: return "Unknown";
  }
  return "?";
}

struct MembershipVerdict {
  std::variant<Member, NotMember, Unknown> value;

  VerdictKind kind() const { return static_cast<VerdictKind>(value.index()); }
  const Member& member() const { return std::get<Member>(value); }
  const NotMember& not_member() const { return std::get<NotMember>(value); }
  const Unknown& unknown() const { return std::get<Unknown>(value); }

  /// Line-oriented key=value record, stable for diffing.
  std::string to_record() const {
    std::ostringstream out;
    out << "kind=" << to_string(kind()) << "\n";
    if (const auto* m = std::get_if<Member>(&value)) {
      const auto& c = m->certificate;
      out << "tail.K=" << c.K << "\n";
      out << "tail.A=" << c.A.get_str() << "\n";
      out << "tail.q_K=" << c.q_K.get_str() << "\n";
      out << "tail.bound=" << c.bound.str() << "\n";
      out << "tail.trivial=" << (c.trivial ? "true" : "false") << "\n";
      out << "equality_k=";
      for (std::size_t i = 0; i < m->equality_ks.size(); ++i) out << (i ? "," : "") << m->equality_ks[i];
      out << "\n";
    } else if (const auto* n = std::get_if<NotMember>(&value)) {
      out << "witness.k=" << n->witness_k << "\n";
      out << "witness.p=" << n->convergent.p.get_str() << "\n";
      out << "witness.q=" << n->convergent.q.get_str() << "\n";
      out << "witness.lhs=" << (n->lhs ? n->lhs->str() : std::string("inf")) << "\n";
      out << "rational_source=" << (n->rational_source ? "true" : "false") << "\n";
    } else {
      const auto& u = unknown();
      out << "checked_up_to_k=" << u.checked_up_to_k << "\n";
      out << "reason=" << u.reason << "\n";
      out << "bounded_type_candidate=" << (u.bounded_type_candidate ? "true" : "false") << "\n";
    }
    return out.str();
  }
};

struct MembershipOptions {
  unsigned max_precision = kDefaultMaxPrecision;
  std::size_t max_k = 20000;       // hard cap on indices examined when tau > 1
  std::size_t tau_one_max_k = 200;  // indices examined when tau = 1
};

inline MembershipVerdict is_member(const Number& xi, const DiophParams& params, const MembershipOptions& options = {}) {
  CFExpansion cf = CFExpansion::expand(xi);
  if (cf.is_finite()) {
    std::size_t last = cf.last_index();
    return {NotMember{last, cf.convergent(static_cast<long>(last)), std::nullopt, true}};
  }
  if (params.kind() == DiophParams::Kind::kUnconstrained) {
    TailCertificate trivial;
    trivial.A = cf.max_period_quotient();
    trivial.q_K = 1;
    trivial.trivial = true;
    return {Member{trivial, {}}};
  }

  const Number inverse_gamma = params.inverse_gamma();
  const bool tail_available = params.tau().compare_one() > 0;
  const Integer A = cf.max_period_quotient();
  const std::size_t preperiod = cf.preperiod().size();
  const std::size_t limit = tail_available ? options.max_k : options.tau_one_max_k;
  std::vector<std::size_t> equalities;

  for (std::size_t k = 0;; ++k) {
    Convergent ck = cf.convergent(static_cast<long>(k));
    if (tail_available && k >= preperiod) {
      auto tail_bound = [&](unsigned prec) {
        // (A + 2) / q^(tau - 1) = (A + 2) q / q^tau
        return div(Number(Integer((A + 2) * ck.q)), power_enclosure(ck.q, params.tau(), prec), prec);
      };
      auto [order, bound] = compare_refining(tail_bound, inverse_gamma, options.max_precision);
      if (order && *order <= 0) {
        return {Member{TailCertificate{k, A, ck.q, bound, false}, equalities}};
      }
    }
    if (k >= limit) {
      Unknown u;
      u.checked_up_to_k = k;
      if (tail_available) {
        u.reason = "index cap reached before the tail bound closed";
      } else {
        u.reason = "tau = 1: no tail bound; every checked index passed";
        u.bounded_type_candidate = true;  // periodic expansions have bounded quotients
      }
      return {u};
    }
    auto lhs = [&](unsigned prec) { return lemma_lhs(cf, k, params, prec); };
    auto [order, value] = compare_refining(lhs, inverse_gamma, options.max_precision);
    if (!order) {
      return {Unknown{k, "precision exhausted deciding index " + std::to_string(k), false}};
    }
    if (*order > 0) return {NotMember{k, ck, value, false}};
    if (*order == 0) equalities.push_back(k);
  }
}

/// Result of a direct scan of the definition over q = 1..Q.
struct BruteForceResult {
  enum class Kind { kExcluded, kConsistent, kUndecided };
  Kind kind = Kind::kConsistent;
  Integer p;       // violating numerator (kExcluded)
  Integer q;       // violating or undecided denominator
  Integer checked;  // every q' <= checked with no event
};

inline std::string_view to_string(BruteForceResult::Kind kind) {
  switch (kind) {
    case BruteForceResult::Kind::kExcluded: return "excluded";
    case BruteForceResult::Kind::kConsistent: return "consistent";
    case BruteForceResult::Kind::kUndecided: return "undecided";
  }
  return "?";
}

namespace detail {

// Exact test of |q xi - p| < gamma / q^tau: returns true/false, or nullopt
// when the enclosure of q^tau stays too wide.
inline std::optional<bool> violates(const Number& xi, const Integer& p, const Integer& q, const DiophParams& params,
                                    unsigned max_prec) {
  Number dist = (Number(q) * xi - Number(p)).abs();
  if (dist.sign() == 0) return params.gamma().sign() > 0;
  auto eval = [&](unsigned prec) { return mul(dist, power_enclosure(q, params.tau(), prec), prec); };
  auto [order, value] = compare_refining(eval, params.gamma(), max_prec);
  if (!order) return std::nullopt;
  return *order < 0;
}

struct FloatModel {
  bool usable = false;
  double xi = 0, xi_err = 0, gamma = 0, tau = 0;
};

inline FloatModel float_model(const Number& xi, const DiophParams& params) {
  FloatModel m;
  constexpr double kExactLimit = 9007199254740992.0;  // 2^53
  auto fits = [&](const Integer& v) { return std::fabs(v.get_d()) < kExactLimit; };
  if (xi.is_rational()) {
    const Rational& r = xi.rational();
    if (!fits(r.num()) || !fits(r.den())) return m;
    m.xi = r.to_double();
    m.xi_err = std::fabs(m.xi) * 0x1p-50;
  } else {
    const QuadIrr& x = xi.quad();
    if (!fits(x.a()) || !fits(x.b()) || !fits(x.c()) || !fits(x.d())) return m;
    m.xi = x.to_double();
    m.xi_err = (std::fabs(x.a().get_d()) + 2 * std::fabs(x.b().get_d()) * std::sqrt(x.d().get_d())) /
               x.c().get_d() * 0x1p-48;
  }
  m.gamma = params.gamma().to_double();
  if (params.tau().is_rational()) {
    m.tau = params.tau().value().to_double();
  } else {
    m.tau = std::log(params.tau().alpha().to_double()) / std::log(params.tau().base().get_d());
  }
  m.usable = std::isfinite(m.xi) && std::isfinite(m.gamma) && std::isfinite(m.tau);
  return m;
}

inline BruteForceResult scan_range(const Number& xi, const DiophParams& params, long q_begin, long q_end,
                                   unsigned max_prec) {
  const FloatModel fm = float_model(xi, params);
  const Number half(Rational(1, 2));
  for (long qi = q_begin; qi <= q_end; ++qi) {
    if (fm.usable && qi < (1L << 40)) {
      double q = static_cast<double>(qi);
      double x = q * fm.xi;
      double nearest = std::nearbyint(x);
      double dist = std::fabs(x - nearest);
      double err = q * fm.xi_err + std::fabs(x) * 0x1p-51 + 0x1p-60;
      double thr = fm.gamma / std::pow(q, fm.tau);
      // The float model is good to far better than 1e-9 relative on thr.
      if (dist - err > thr * (1 + 1e-9) && std::fabs(std::fabs(x - std::floor(x)) - 0.5) > err) continue;
    }
    Integer q(qi);
    Number scaled = Number(q) * xi;
    Integer p = (scaled + half).floor();
    std::vector<Integer> candidates{p};
    if ((scaled - Number(p)).abs() == half) candidates.push_back(p - 1);  // half-integer tie
    for (const auto& cand : candidates) {
      auto v = violates(xi, cand, q, params, max_prec);
      if (!v) return {BruteForceResult::Kind::kUndecided, cand, q, Integer(qi - 1)};
      if (*v) return {BruteForceResult::Kind::kExcluded, cand, q, Integer(qi - 1)};
    }
  }
  return {BruteForceResult::Kind::kConsistent, 0, 0, Integer(q_end)};
}

}  // namespace detail

/// Scans q = 1..Q with p = round(q xi). The first violating or undecidable q
/// is reported; splitting the range over `threads` workers gives the same
/// result as a sequential scan.
inline BruteForceResult brute_force_member(const Number& xi, const DiophParams& params, long Q = 10000,
                                           unsigned threads = 1, unsigned max_prec = kDefaultMaxPrecision) {
  if (Q < 1) throw Error(ErrorKind::kInvalidInput, "Q must be >= 1");
  if (params.kind() == DiophParams::Kind::kUnconstrained) return {BruteForceResult::Kind::kConsistent, 0, 0, Q};
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(Q)));
  if (threads == 1) return detail::scan_range(xi, params, 1, Q, max_prec);
  std::vector<BruteForceResult> parts(threads);
  std::vector<std::thread> workers;
  long chunk = (Q + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    long lo = 1 + static_cast<long>(t) * chunk;
    long hi = std::min(Q, lo + chunk - 1);
    workers.emplace_back([&, t, lo, hi] {
      parts[t] = lo <= hi ? detail::scan_range(xi, params, lo, hi, max_prec)
                          : BruteForceResult{BruteForceResult::Kind::kConsistent, 0, 0, hi};
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& part : parts) {
    if (part.kind != BruteForceResult::Kind::kConsistent) {
      BruteForceResult r = part;
      r.checked = r.q - 1;
      return r;
    }
  }
  return {BruteForceResult::Kind::kConsistent, 0, 0, Q};
}

/// Variant for a point only known through an enclosure: reports an exclusion
/// only when every point of the enclosure is excluded by the same (p, q).
inline BruteForceResult brute_force_member(const Enclosure& xi, const DiophParams& params, long Q,
                                           unsigned max_prec = kDefaultMaxPrecision) {
  if (Q < 1) throw Error(ErrorKind::kInvalidInput, "Q must be >= 1");
  if (params.kind() == DiophParams::Kind::kUnconstrained) return {BruteForceResult::Kind::kConsistent, 0, 0, Q};
  for (long qi = 1; qi <= Q; ++qi) {
    Integer q(qi);
    Rational lo = Rational(q) * xi.lower, hi = Rational(q) * xi.upper;
    std::vector<Integer> candidates{(lo + Rational(1, 2)).floor()};
    Integer other = (hi + Rational(1, 2)).floor();
    if (other != candidates.front()) candidates.push_back(other);
    unsigned prec = kDefaultPrecision;
    bool decided = false;
    while (!decided) {
      CertifiedReal thr = div(params.gamma(), power_enclosure(q, params.tau(), prec), prec);
      Enclosure t = thr.enclose(prec);
      bool all_clear = true;
      for (const auto& p : candidates) {
        Rational dlo = std::max({Rational(0), Rational(p) - hi, lo - Rational(p)});
        Rational dhi = std::max((Rational(p) - lo).abs(), (hi - Rational(p)).abs());
        if (Number(dhi) < Number(t.lower) || (thr.is_exact() && Number(dhi) < thr.exact())) {
          return {BruteForceResult::Kind::kExcluded, p, q, Integer(qi - 1)};
        }
        bool clear = thr.is_exact() ? Number(dlo) >= thr.exact() : dlo >= t.upper;
        if (!clear) all_clear = false;
      }
      if (all_clear) {
        decided = true;
      } else if (thr.is_exact() || prec >= max_prec) {
        return {BruteForceResult::Kind::kUndecided, candidates.front(), q, Integer(qi - 1)};
      } else {
        prec *= 2;
      }
    }
  }
  return {BruteForceResult::Kind::kConsistent, 0, 0, Q};
}

/// Open interval |xi - p/q| < gamma / q^(tau+1), contained in the complement.
struct ExcludedInterval {
  Integer p;
  Integer q;
  Rational center;
  CertifiedReal radius = Number(0);

  CertifiedReal left(unsigned prec = kDefaultPrecision) const { return sub(Number(center), radius, prec); }
  CertifiedReal right(unsigned prec = kDefaultPrecision) const { return add(Number(center), radius, prec); }
};

/// gamma / q^(tau+1), exact when q^tau is.
inline CertifiedReal interval_radius(const Integer& q, const DiophParams& params, unsigned prec = kDefaultPrecision) {
  return div(params.gamma(), mul(Number(q), power_enclosure(q, params.tau(), prec), prec), prec);
}

inline ExcludedInterval excluded_interval(const Integer& p, const Integer& q, const DiophParams& params,
                                          unsigned prec = kDefaultPrecision) {
  if (q <= 0) throw Error(ErrorKind::kInvalidInput, "q must be positive");
  return {p, q, Rational(p, q), interval_radius(q, params, prec)};
}

/// Membership is invariant under integer translation.
inline Number translate(const Number& xi, const Integer& k) { return xi + Number(k); }

}  // namespace diophset
