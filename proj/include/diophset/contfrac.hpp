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

// Regular continued fractions of rationals and quadratic irrationals.
//
// An expansion is stored as [a0; preperiod..., (period...)]. Quotients with
// index k >= 1 + |preperiod| repeat with the period; rationals have an empty
// period and a finite quotient list ending in a quotient >= 2.
//
// Convergents follow the usual recurrence
//   p_k = a_k p_{k-1} + p_{k-2},  q_k = a_k q_{k-1} + q_{k-2},
// seeded with p_{-2} = 0, q_{-2} = 1, p_{-1} = 1, q_{-1} = 0.

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "diophset/exactnum.hpp"

namespace diophset {

struct Convergent {
  Integer p;
  Integer q;
  friend bool operator==(const Convergent&, const Convergent&) = default;
};

inline constexpr std::size_t kDefaultExpansionSteps = 100000;

class CFExpansion {
 public:
  /// Expands x. For quadratic irrationals the period is found by the first
  /// repeated complete quotient; k_max bounds the number of steps.
  static CFExpansion expand(const Number& x, std::size_t k_max = kDefaultExpansionSteps) {
    CFExpansion cf;
    cf.source_ = x;
    cf.cache_ = std::make_shared<Cache>();
    if (x.is_rational()) {
      Integer num = x.rational().num(), den = x.rational().den();
      cf.a0_ = floor_div(num, den);
      cf.complete_.push_back(x);
      Integer r = num - cf.a0_ * den;
      while (r != 0) {
        // complete quotient den / r
        num = den;
        den = r;
        cf.complete_.push_back(Number(Rational(num, den)));
        Integer a = floor_div(num, den);
        cf.preperiod_.push_back(a);
        r = num - a * den;
      }
      return cf;
    }
    std::unordered_map<std::string, std::size_t> seen;
    Number y = x;
    cf.a0_ = y.floor();
    cf.complete_.push_back(y);
    std::vector<Integer> quotients;
    for (std::size_t k = 1; k <= k_max; ++k) {
      y = (y - Number(y.floor())).inv();
      std::string key = y.str();
      if (auto it = seen.find(key); it != seen.end()) {
        std::size_t i = it->second;
        cf.preperiod_.assign(quotients.begin(), quotients.begin() + static_cast<std::ptrdiff_t>(i - 1));
        cf.period_.assign(quotients.begin() + static_cast<std::ptrdiff_t>(i - 1), quotients.end());
        return cf;
      }
      seen.emplace(std::move(key), k);
      quotients.push_back(y.floor());
      cf.complete_.push_back(y);
    }
    throw Error(ErrorKind::kPeriodNotFound,
                "no period within " + std::to_string(k_max) + " steps for " + x.str() +
                    "; partial expansion has " + std::to_string(quotients.size()) + " quotients");
  }

  const Integer& a0() const { return a0_; }
  const std::vector<Integer>& preperiod() const { return preperiod_; }
  const std::vector<Integer>& period() const { return period_; }
  const Number& source() const { return source_; }
  bool is_finite() const { return period_.empty(); }

  /// Index of the last quotient of a finite expansion.
  std::size_t last_index() const {
    if (!is_finite()) throw Error(ErrorKind::kInvalidInput, "infinite expansion has no last index");
    return preperiod_.size();
  }

  /// Partial quotient a_k.
  const Integer& quotient(std::size_t k) const {
    if (k == 0) return a0_;
    if (k <= preperiod_.size()) return preperiod_[k - 1];
    if (is_finite()) throw Error(ErrorKind::kIndexOutOfRange, "quotient index " + std::to_string(k));
    return period_[(k - 1 - preperiod_.size()) % period_.size()];
  }

  /// Largest partial quotient of the period.
  Integer max_period_quotient() const {
    Integer best = 0;
    for (const auto& a : period_) best = std::max(best, a);
    return best;
  }

  /// Complete quotient a'_k = [a_k; a_{k+1}, ...].
  Number complete_quotient(std::size_t k) const {
    if (k < complete_.size()) return complete_[k];
    if (is_finite()) throw Error(ErrorKind::kIndexOutOfRange, "complete quotient index " + std::to_string(k));
    std::size_t start = 1 + preperiod_.size();
    return complete_[start + (k - start) % period_.size()];
  }

  /// (p_k, q_k) for k >= -1.
  Convergent convergent(long k) const {
    if (k < -1) throw Error(ErrorKind::kIndexOutOfRange, "convergent index " + std::to_string(k));
    if (is_finite() && k > static_cast<long>(last_index())) {
      throw Error(ErrorKind::kIndexOutOfRange, "convergent index " + std::to_string(k));
    }
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& rows = cache_->rows;
    while (static_cast<long>(rows.size()) < k + 3) {
      long j = static_cast<long>(rows.size()) - 2;  // index of the row being added
      const Integer& a = quotient(static_cast<std::size_t>(j));
      const Convergent& r1 = rows[rows.size() - 1];
      const Convergent& r2 = rows[rows.size() - 2];
      rows.push_back({a * r1.p + r2.p, a * r1.q + r2.q});
    }
    return rows[static_cast<std::size_t>(k + 2)];
  }

  /// "[a0; a1, a2, (b1, b2)]"; "[a0]" for integers.
  std::string str() const {
    std::string out = "[" + a0_.get_str();
    if (preperiod_.empty() && period_.empty()) return out + "]";
    out += "; ";
    bool first = true;
    for (const auto& a : preperiod_) {
      if (!first) out += ", ";
      out += a.get_str();
      first = false;
    }
    if (!period_.empty()) {
      if (!first) out += ", ";
      out += "(";
      for (std::size_t i = 0; i < period_.size(); ++i) {
        if (i > 0) out += ", ";
        out += period_[i].get_str();
      }
      out += ")";
    }
    return out + "]";
  }

  static CFExpansion parse(std::string_view text);

 private:
  struct Cache {
    std::mutex mutex;
    std::vector<Convergent> rows{{0, 1}, {1, 0}};
  };

  CFExpansion() = default;

  Integer a0_;
  std::vector<Integer> preperiod_;
  std::vector<Integer> period_;
  Number source_;
  std::vector<Number> complete_;
  std::shared_ptr<Cache> cache_;
};

namespace detail {

// Last two convergents (p_m, q_m), (p_{m-1}, q_{m-1}) of [a_0; a_1, ..., a_m].
inline std::pair<Convergent, Convergent> finite_convergents(const std::vector<Integer>& quotients) {
  Convergent prev{1, 0}, prev2{0, 1};
  for (const auto& a : quotients) {
    Convergent next{a * prev.p + prev2.p, a * prev.q + prev2.q};
    prev2 = prev;
    prev = next;
  }
  return {prev, prev2};
}

inline void require_positive(const std::vector<Integer>& quotients, const char* what) {
  for (const auto& a : quotients) {
    if (a < 1) throw Error(ErrorKind::kInvalidInput, std::string(what) + " quotient " + a.get_str() + " < 1");
  }
}

}  // namespace detail

/// [overline{b_1, ..., b_m}], the purely periodic value with this period.
inline Number from_purely_periodic(const std::vector<Integer>& period) {
  if (period.empty()) throw Error(ErrorKind::kInvalidInput, "empty period");
  detail::require_positive(period, "period");
  auto [last, before] = detail::finite_convergents(period);
  // y = (P y + P') / (Q y + Q')  =>  Q y^2 + (Q' - P) y - P' = 0, take y > 1.
  // Made primitive first so the discriminant stays the intrinsic one.
  Integer qa = last.q, qb = before.q - last.p, qc = -before.p;
  Integer g = gcd(gcd(qa, qb), qc);
  qa /= g;
  qb /= g;
  qc /= g;
  Number y = Number::make(Integer(-qb), 1, Integer(2 * qa), Integer(qb * qb - 4 * qa * qc));
  if (y.is_rational()) throw Error(ErrorKind::kInvalidInput, "period does not define an irrational");
  return y;
}

/// [a0; preperiod..., (period...)].
inline Number from_periodic(const Integer& a0, const std::vector<Integer>& preperiod,
                            const std::vector<Integer>& period) {
  if (period.empty()) throw Error(ErrorKind::kInvalidInput, "empty period");
  detail::require_positive(preperiod, "preperiod");
  Number y = from_purely_periodic(period);
  std::vector<Integer> head{a0};
  head.insert(head.end(), preperiod.begin(), preperiod.end());
  auto [last, before] = detail::finite_convergents(head);
  return y.mobius(last.p, before.p, last.q, before.q);
}

inline CFExpansion CFExpansion::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') s += ch;
  }
  auto fail = [&]() { return Error(ErrorKind::kParse, "bad continued fraction '" + std::string(text) + "'"); };
  if (s.size() < 3 || s.front() != '[' || s.back() != ']') throw fail();
  s = s.substr(1, s.size() - 2);
  auto read_int = [&](std::string_view tok) {
    if (tok.empty()) throw fail();
    std::size_t i = (tok.front() == '-') ? 1 : 0;
    if (i == tok.size()) throw fail();
    for (std::size_t j = i; j < tok.size(); ++j) {
      if (tok[j] < '0' || tok[j] > '9') throw fail();
    }
    return Integer(std::string(tok));
  };
  std::size_t semi = s.find(';');
  Integer a0 = read_int(std::string_view(s).substr(0, semi));
  std::vector<Integer> pre, period;
  if (semi != std::string::npos) {
    std::string rest = s.substr(semi + 1);
    std::size_t open = rest.find('(');
    std::string pre_text = rest.substr(0, open);
    std::string per_text;
    if (open != std::string::npos) {
      if (rest.back() != ')') throw fail();
      per_text = rest.substr(open + 1, rest.size() - open - 2);
      if (!pre_text.empty()) {
        if (pre_text.back() != ',') throw fail();
        pre_text.pop_back();
      }
    }
    auto split = [&](const std::string& list, std::vector<Integer>& out) {
      std::size_t pos = 0;
      while (pos <= list.size()) {
        std::size_t comma = list.find(',', pos);
        out.push_back(read_int(std::string_view(list).substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    };
    if (!pre_text.empty()) split(pre_text, pre);
    if (open != std::string::npos) split(per_text, period);
    if (pre.empty() && open == std::string::npos) throw fail();
  }
  detail::require_positive(pre, "preperiod");
  if (!period.empty()) return expand(from_periodic(a0, pre, period));
  auto [last, before] = [&] {
    std::vector<Integer> all{a0};
    all.insert(all.end(), pre.begin(), pre.end());
    return detail::finite_convergents(all);
  }();
  (void)before;
  return expand(Number(Rational(last.p, last.q)));
}

/// (a x + b) / (c x + d) for a unimodular matrix.
inline Number equivalent_by(const Number& x, const Integer& a, const Integer& b, const Integer& c,
                            const Integer& d) {
  Integer det = a * d - b * c;
  if (det != 1 && det != -1) {
    throw Error(ErrorKind::kInvalidInput, "matrix determinant " + det.get_str() + " is not +-1");
  }
  return x.mobius(a, b, c, d);
}

/// Smallest (i, j) with i, j <= max_index such that the tails from a'_i of x
/// and from a'_j of y coincide.
inline std::optional<std::pair<std::size_t, std::size_t>> tails_agree(const CFExpansion& x, const CFExpansion& y,
                                                                      std::size_t max_index = 50) {
  std::unordered_map<std::string, std::size_t> first_seen;
  for (std::size_t j = 0; j <= max_index; ++j) {
    if (y.is_finite() && j > y.last_index()) break;
    first_seen.emplace(y.complete_quotient(j).str(), j);
  }
  for (std::size_t i = 0; i <= max_index; ++i) {
    if (x.is_finite() && i > x.last_index()) break;
    if (auto it = first_seen.find(x.complete_quotient(i).str()); it != first_seen.end()) {
      return std::make_pair(i, it->second);
    }
  }
  return std::nullopt;
}

}  // namespace diophset
