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

// Explicit families of isolated points.
//
// theorem1(n): alpha = (n + sqrt(n^2 + 4)) / 2, gamma = 1/alpha and
// tau = log(alpha)/log(n), so that n^tau = alpha and alpha = [n; (n)]. The
// instance carries every identity of the isolation argument, checked in
// Q(sqrt(n^2 + 4)), plus an independent gapscan certificate.
//
// theorem2_transform(): alpha' = (m alpha + 1) / ((2m + 1) alpha + 2) with
// m = floor(3 2^tau / gamma), and a grid search for parameters isolating
// alpha'.

#include <atomic>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "diophset/gapscan.hpp"

namespace diophset {

struct NamedCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Theorem1Instance {
  long n = 0;
  Number alpha = Number(0);
  Number gamma = Number(0);
  Exponent tau = Exponent::rational(1);
  Integer p1;
  Integer q1;
  std::size_t k_tail = 0;  // prefix checked term by term before the tail certificate
  std::vector<NamedCheck> checks;
  CertificationResult certification;

  DiophParams params() const { return DiophParams(gamma, tau); }

  bool checks_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.passed; });
  }
  bool certified() const { return checks_pass() && certification.ok(); }
};

inline Theorem1Instance theorem1(long n) {
  if (n <= 1) throw Error(ErrorKind::kHypothesisViolation, "theorem1 needs n >= 2, got " + std::to_string(n));
  if (n > 3000000000L) throw Error(ErrorKind::kInvalidInput, "n too large");
  Theorem1Instance inst;
  inst.n = n;
  const Integer N(n);
  inst.alpha = Number::make(N, 1, 2, N * N + 4);
  inst.gamma = inst.alpha.inv();
  inst.tau = Exponent::log_ratio(inst.alpha, N);
  const Number& alpha = inst.alpha;
  const Number& gamma = inst.gamma;
  DiophParams params(gamma, inst.tau);
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    inst.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  check("alpha = n + 1/alpha", alpha == Number(N) + alpha.inv());
  auto n_tau = power_exact(N, inst.tau);
  check("n^tau = alpha", n_tau && *n_tau == alpha);
  check("gamma < 1/2", gamma < Number(Rational(1, 2)));
  check("tau > 1", inst.tau.compare_one() > 0);

  CFExpansion cf = CFExpansion::expand(alpha);
  check("alpha = [n; (n)]", cf.a0() == N && cf.preperiod().empty() && cf.period() == std::vector<Integer>{N},
        cf.str());
  Convergent c1 = cf.convergent(1);
  inst.p1 = c1.p;
  inst.q1 = c1.q;
  check("p1 = n^2 + 1, q1 = n", c1.p == N * N + 1 && c1.q == N);

  // k = 0: alpha - n = 1/alpha = gamma.
  check("k=0: alpha - n = gamma", alpha - Number(N) == gamma);
  // k = 1: p1/q1 - alpha = gamma / q1^(tau+1), with q1^tau = n^tau = alpha.
  CertifiedReal r1 = interval_radius(c1.q, params);
  Number dist1 = Number(Rational(c1.p, c1.q)) - alpha;
  check("k=1: p1/q1 - alpha = gamma/q1^(tau+1)", r1.is_exact() && r1.exact() == dist1, dist1.str());
  check("k=1: 1/n - 1/alpha = 1/(n alpha^2)",
        Number(Rational(1, N)) - alpha.inv() == (Number(N) * alpha * alpha).inv());
  // k >= 1 chain: q_k^(1-tau) (p_k/q_k + 1/alpha) <= n^(1-tau) (p1/q1 + 1/alpha),
  // and the right side is (n^2+1)/alpha + n/alpha^2 = alpha = 1/gamma.
  Number chain = Number(N * N + 1) / alpha + Number(N) / (alpha * alpha);
  check("chain: (n^2+1)/alpha + n/alpha^2 = alpha = 1/gamma", chain == alpha && chain == gamma.inv());

  MembershipVerdict verdict = is_member(alpha, params);
  bool member = verdict.kind() == VerdictKind::kMember;
  check("criterion holds (tail certificate)", member, verdict.to_record());
  inst.k_tail = member ? std::max<std::size_t>(verdict.member().certificate.K, 2) : 2;
  bool prefix_ok = true;
  Rational first(c1.p, c1.q);
  for (std::size_t k = 1; k <= inst.k_tail; ++k) {
    Convergent ck = cf.convergent(static_cast<long>(k));
    Convergent next = cf.convergent(static_cast<long>(k) + 1);
    prefix_ok = prefix_ok && Rational(ck.p, ck.q) <= first && ck.q >= c1.q && next.q == ck.p;
  }
  check("p_k/q_k <= p1/q1, q_k >= q1, q_{k+1} = p_k for 1 <= k <= K", prefix_ok,
        "K=" + std::to_string(inst.k_tail));

  inst.certification = certify_isolated(alpha, params, {n, 1}, {n * n + 1, n});
  return inst;
}

struct GridPoint {
  Number gamma;
  Exponent tau;
};

struct SearchResult {
  std::size_t index = 0;
  GridPoint point;
  IsolationCertificate certificate;
};

struct SearchOptions {
  long Q = 1000;
  unsigned threads = 1;
};

namespace detail {

/// a > b, decided exactly or by refinement; undecided counts as false.
inline bool exponent_greater(const Exponent& a, const Exponent& b) {
  if (a == b) return false;
  if (a.is_rational() && b.is_rational()) return a.value() > b.value();
  for (unsigned prec = 64; prec <= 1024; prec *= 2) {
    Enclosure x = a.enclose(prec), y = b.enclose(prec);
    if (x.lower > y.upper) return true;
    if (x.upper < y.lower) return false;
  }
  return false;
}

inline std::optional<SearchResult> try_grid_point(const Number& xi, const GridPoint& g, std::size_t index,
                                                  const SearchOptions& options) {
  DiophParams params(g.gamma, g.tau);
  if (params.kind() != DiophParams::Kind::kProper) return std::nullopt;
  auto touch = find_touching_at(xi, params, options.Q);
  if (!touch) return std::nullopt;
  CertificationResult r = certify_isolated(xi, params, touch->first, touch->second);
  if (!r.ok()) return std::nullopt;
  return SearchResult{index, g, r.certificate()};
}

}  // namespace detail

/// gamma' in {k/64 : 1 <= k < 32} by tau' in base + {j/16 : 1 <= j <= 32},
/// gamma-major. base is tau_min, or a rational upper bound of it when tau_min
/// is a log ratio.
inline std::vector<GridPoint> default_grid(const Exponent& tau_min) {
  Rational base = tau_min.is_rational() ? tau_min.value() : tau_min.enclose(64).upper;
  std::vector<GridPoint> grid;
  for (long k = 1; k < 32; ++k) {
    for (long j = 1; j <= 32; ++j) {
      grid.push_back({Number(Rational(k, 64)), Exponent::rational(base + Rational(j, 16))});
    }
  }
  return grid;
}

/// First grid point (by index) with tau' > tau_min whose cover isolates xi by
/// two touching intervals. An empty result refutes nothing.
inline std::optional<SearchResult> search_isolation_params(const Number& xi, const Exponent& tau_min,
                                                           const std::vector<GridPoint>& grid,
                                                           const SearchOptions& options = {}) {
  if (xi.is_rational()) return std::nullopt;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> best{none};
  std::vector<std::optional<SearchResult>> found(grid.size());
  unsigned threads = std::max(1u, options.threads);
  auto worker = [&](unsigned t) {
    for (std::size_t i = t; i < grid.size(); i += threads) {
      if (i > best.load()) return;
      if (!detail::exponent_greater(grid[i].tau, tau_min)) continue;
      if (auto r = detail::try_grid_point(xi, grid[i], i, options)) {
        found[i] = std::move(r);
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (best.load() == none) return std::nullopt;
  return found[best.load()];
}

/// floor(3 2^tau / gamma): exact when 2^tau is, else by enclosures until
/// both ends share a floor.
inline Integer theorem2_multiplier(const DiophParams& params, unsigned max_prec = kDefaultMaxPrecision) {
  if (params.gamma().sign() <= 0) throw Error(ErrorKind::kInvalidInput, "gamma must be positive");
  auto value = [&](unsigned prec) {
    return div(mul(Number(3), power_enclosure(2, params.tau(), prec), prec), params.gamma(), prec);
  };
  for (unsigned prec = kDefaultPrecision;; prec *= 2) {
    CertifiedReal v = value(prec);
    if (v.is_exact()) return v.exact().floor();
    Enclosure e = v.enclose(prec);
    Integer lo = e.lower.floor();
    if (e.upper.floor() == lo) return lo;
    if (prec >= max_prec) {
      throw Error(ErrorKind::kIndeterminateFloor, "floor(3*2^tau/gamma) undecided at " + std::to_string(prec) +
                                                       " bits: " + e.str());
    }
  }
}

struct Theorem2Instance {
  Number alpha = Number(0);
  Number gamma = Number(0);
  Exponent tau = Exponent::rational(1);
  VerdictKind membership = VerdictKind::kUnknown;
  std::string warning;
  Integer m;
  Number alpha_prime = Number(0);
  Integer determinant;
  std::optional<std::pair<std::size_t, std::size_t>> tails;  // first indices with equal complete quotients
  std::optional<SearchResult> search;
  bool searched = false;
};

struct Theorem2Options {
  bool search = false;
  SearchOptions search_options;
  unsigned max_precision = kDefaultMaxPrecision;
};

inline Theorem2Instance theorem2_transform(const Number& alpha, const Number& gamma, const Exponent& tau,
                                           const Theorem2Options& options = {}) {
  if (alpha.is_rational()) throw Error(ErrorKind::kHypothesisViolation, "alpha must be irrational");
  DiophParams params(gamma, tau);
  Theorem2Instance inst;
  inst.alpha = alpha;
  inst.gamma = gamma;
  inst.tau = tau;
  MembershipVerdict v = is_member(alpha, params);
  inst.membership = v.kind();
  if (v.kind() == VerdictKind::kNotMember) {
    throw Error(ErrorKind::kHypothesisViolation,
                "alpha is not in D(gamma, tau): criterion fails at k=" + std::to_string(v.not_member().witness_k));
  }
  if (v.kind() == VerdictKind::kUnknown) inst.warning = "membership not decided: " + v.unknown().reason;
  inst.m = theorem2_multiplier(params, options.max_precision);
  const Integer& m = inst.m;
  inst.determinant = m * 2 - (2 * m + 1);
  inst.alpha_prime = equivalent_by(alpha, m, 1, 2 * m + 1, 2);
  inst.tails = tails_agree(CFExpansion::expand(alpha), CFExpansion::expand(inst.alpha_prime), 50);
  if (options.search) {
    inst.searched = true;
    inst.search = search_isolation_params(inst.alpha_prime, tau, default_grid(tau), options.search_options);
  }
  return inst;
}

}  // namespace diophset
