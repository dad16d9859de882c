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

#include <gtest/gtest.h>

#include <cmath>

#include "diophset/construct.hpp"
#include "test_support.hpp"

namespace diophset {
namespace {

const Number kSilver = Number::make(1, 1, 1, 2);
const Number kPhi = Number::make(1, 1, 2, 5);

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidInput;
}

TEST(Theorem1, NEqualsTwo) {
  Theorem1Instance t = theorem1(2);
  EXPECT_EQ(t.alpha, kSilver);
  EXPECT_EQ(t.gamma, Number::make(-1, 1, 1, 2));
  EXPECT_EQ(t.tau.str(), "t=log((1+1*sqrt(2))/1)/log(2)");
  for (const auto& c : t.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.detail;
  ASSERT_TRUE(t.certified());
  EXPECT_EQ(t.certification.certificate().left, (Source{2, 1}));
  EXPECT_EQ(t.certification.certificate().right, (Source{5, 2}));
}

TEST(Theorem1, NEqualsThree) {
  Theorem1Instance t = theorem1(3);
  EXPECT_EQ(t.alpha, Number::make(3, 1, 2, 13));
  EXPECT_EQ(t.p1, 10);
  EXPECT_EQ(t.q1, 3);
  EXPECT_TRUE(t.certified());
}

TEST(Theorem1, HypothesisViolation) {
  for (long n : {1L, 0L, -4L}) {
    EXPECT_EQ(kind_of([&] { theorem1(n); }), ErrorKind::kHypothesisViolation) << n;
  }
}

TEST(Theorem1, BatchCertifiesIndependently) {
  std::optional<Number> prev_gamma;
  std::optional<Enclosure> prev_tau;
  for (long n = 2; n <= 10; ++n) {
    Theorem1Instance t = theorem1(n);
    ASSERT_TRUE(t.certified()) << n;
    // The checker, not the generator, is the authority.
    CertificationResult again =
        certify_isolated(t.alpha, DiophParams(t.gamma, t.tau), t.certification.certificate().left,
                         t.certification.certificate().right);
    ASSERT_TRUE(again.ok()) << n;
    EXPECT_TRUE(validate_certificate(again.certificate()));
    EXPECT_EQ(power_exact(n, t.tau), t.alpha);
    Enclosure tau = t.tau.enclose(128);
    EXPECT_GT(tau.lower, Rational(1));
    if (prev_gamma) {
      EXPECT_LT(t.gamma, *prev_gamma);
      EXPECT_LT(tau.upper, prev_tau->lower);
    }
    prev_gamma = t.gamma;
    prev_tau = tau;
  }
  // tau_n -> 1 from above.
  Integer big(1000000);
  Enclosure far = Exponent::log_ratio(Number::make(big, 1, 2, big * big + 4), big).enclose(64);
  EXPECT_GT(far.lower, Rational(1));
  EXPECT_LT(far.upper, Rational(1001, 1000));
}

TEST(Theorem2, GoldenRatio) {
  Theorem2Instance t = theorem2_transform(kPhi, Number(Rational(3, 10)), Exponent::rational(1));
  EXPECT_EQ(t.m, 20);
  EXPECT_EQ(t.alpha_prime, (Number(20) * kPhi + Number(1)) / (Number(41) * kPhi + Number(2)));
  EXPECT_EQ(t.determinant, -1);
  EXPECT_EQ(t.membership, VerdictKind::kUnknown);
  EXPECT_FALSE(t.warning.empty());
  ASSERT_TRUE(t.tails.has_value());
}

TEST(Theorem2, SilverExactFloor) {
  Theorem1Instance t1 = theorem1(2);
  Theorem2Instance t = theorem2_transform(t1.alpha, t1.gamma, t1.tau);
  // 3 * 2^tau / gamma = 3 alpha^2 = 9 + 6 sqrt 2.
  EXPECT_EQ(t.m, 17);
  EXPECT_EQ(t.membership, VerdictKind::kMember);
  EXPECT_TRUE(t.warning.empty());
  EXPECT_EQ(t.determinant, -1);
}

TEST(Theorem2, IrrationalExponentUsesEnclosures) {
  Theorem1Instance t1 = theorem1(3);
  Integer m = theorem2_multiplier(DiophParams(t1.gamma, t1.tau));
  double tau = std::log(t1.alpha.to_double()) / std::log(3.0);
  EXPECT_EQ(m, static_cast<long>(std::floor(3 * std::pow(2.0, tau) / t1.gamma.to_double())));
}

TEST(Theorem2, RefutedMembershipIsHypothesisViolation) {
  EXPECT_EQ(kind_of([] { theorem2_transform(kPhi, Number(Rational(2, 5)), Exponent::rational(1)); }),
            ErrorKind::kHypothesisViolation);
  EXPECT_EQ(kind_of([] { theorem2_transform(Number(Rational(1, 3)), Number(Rational(1, 10)), Exponent::rational(2)); }),
            ErrorKind::kHypothesisViolation);
}

TEST(Theorem2, RandomInputsAreUnimodularAndEquivalent) {
  testing::Generator gen(404);
  int done = 0;
  while (done < 50) {
    Number alpha = gen.quad_irr();
    Rational gamma = gen.rational_in(Rational(1, 1000), Rational(1, 100), 1000);
    Rational tau = gen.rational_in(Rational(3, 2), Rational(3), 8);
    Theorem2Instance t;
    try {
      t = theorem2_transform(alpha, Number(gamma), Exponent::rational(tau));
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::kHypothesisViolation);
      continue;
    }
    ++done;
    EXPECT_EQ(t.determinant, -1);
    EXPECT_EQ(t.m * 2 - (2 * t.m + 1), -1);
    ASSERT_TRUE(t.tails.has_value()) << alpha.str();
    EXPECT_LE(t.tails->first, 50u);
  }
}

TEST(Search, SelfConsistency) {
  Theorem1Instance t1 = theorem1(2);
  std::vector<GridPoint> grid = {{Number(Rational(1, 64)), Exponent::rational(2)},
                                 {Number(Rational(1, 3)), Exponent::rational(Rational(3, 2))},
                                 {t1.gamma, t1.tau},
                                 {Number(Rational(1, 5)), Exponent::rational(3)}};
  auto r = search_isolation_params(t1.alpha, Exponent::rational(1), grid);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->index, 2u);
  EXPECT_EQ(r->point.gamma, t1.gamma);
  EXPECT_EQ(r->certificate.left, (Source{2, 1}));
  SearchOptions parallel;
  parallel.threads = 3;
  auto p = search_isolation_params(t1.alpha, Exponent::rational(1), grid, parallel);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->index, 2u);
  // tau' must exceed tau_min.
  EXPECT_FALSE(search_isolation_params(t1.alpha, t1.tau, grid).has_value());
}

TEST(Search, EmptyParamsFindNothing) {
  Theorem1Instance t1 = theorem1(2);
  std::vector<GridPoint> grid;
  for (long k = 32; k < 40; ++k) grid.push_back({Number(Rational(k, 64)), t1.tau});
  grid.push_back({Number(Rational(1, 2)), Exponent::rational(2)});
  EXPECT_FALSE(search_isolation_params(t1.alpha, Exponent::rational(1), grid).has_value());
}

TEST(Search, DefaultGridShape) {
  std::vector<GridPoint> grid = default_grid(Exponent::rational(1));
  ASSERT_EQ(grid.size(), 31u * 32u);
  EXPECT_EQ(grid.front().gamma, Number(Rational(1, 64)));
  EXPECT_EQ(grid.front().tau, Exponent::rational(Rational(17, 16)));
  EXPECT_EQ(grid.back().gamma, Number(Rational(31, 64)));
  EXPECT_EQ(grid.back().tau, Exponent::rational(3));
  std::vector<GridPoint> pell = default_grid(theorem1(2).tau);
  EXPECT_GT(pell.front().tau.value(), Rational(127155, 100000) + Rational(1, 16));
}

TEST(Search, ExploratoryGoldenTransform) {
  Theorem2Options opts;
  opts.search = true;
  opts.search_options.Q = 200;
  Theorem2Instance t = theorem2_transform(kPhi, Number(Rational(3, 10)), Exponent::rational(1), opts);
  EXPECT_TRUE(t.searched);
  // No ground truth: the result is recorded, either way.
  if (t.search) EXPECT_TRUE(validate_certificate(t.search->certificate));
}

}  // namespace
}  // namespace diophset
