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

#include "diophset/diocore.hpp"
#include "test_support.hpp"

namespace diophset {
namespace {

const Number kSilver = Number::make(1, 1, 1, 2);
const Number kPhi = Number::make(1, 1, 2, 5);

// alpha = (n + sqrt(n^2 + 4)) / 2, gamma = 1/alpha, tau = log(alpha)/log(n).
DiophParams pell_params(long n) {
  Number alpha = Number::make(n, 1, 2, n * n + 4);
  return DiophParams(alpha.inv(), Exponent::log_ratio(alpha, n));
}

DiophParams rational_params(Rational gamma, Rational tau) {
  return DiophParams(Number(gamma), Exponent::rational(tau));
}

TEST(Params, Classification) {
  EXPECT_EQ(rational_params(Rational(1, 2), 2).kind(), DiophParams::Kind::kEmpty);
  EXPECT_EQ(rational_params(Rational(3, 5), 1).kind(), DiophParams::Kind::kEmpty);
  EXPECT_EQ(rational_params(Rational(49, 100), 1).kind(), DiophParams::Kind::kProper);
  EXPECT_EQ(rational_params(0, 1).kind(), DiophParams::Kind::kUnconstrained);
  EXPECT_EQ(pell_params(2).kind(), DiophParams::Kind::kProper);
  EXPECT_THROW(rational_params(-1, 2), Error);
  // tau < 1 through the log-ratio form: log(phi)/log(2) < 1.
  EXPECT_THROW(DiophParams(Number(Rational(1, 10)), Exponent::log_ratio(kPhi, 2)), Error);
  EXPECT_THROW(Exponent::rational(Rational(9, 10)), Error);
}

TEST(LemmaLhs, PellEqualityAtZero) {
  for (long n = 2; n <= 10; ++n) {
    DiophParams params = pell_params(n);
    Number alpha = Number::make(n, 1, 2, n * n + 4);
    CertifiedReal lhs = lemma_lhs(alpha, 0, params);
    ASSERT_TRUE(lhs.is_exact()) << n;
    EXPECT_EQ(lhs.exact(), params.inverse_gamma());
    EXPECT_EQ(lhs.exact(), Number(n) + alpha.inv());
  }
}

TEST(LemmaLhs, GoldenRatioIndexOne) {
  DiophParams params = rational_params(Rational(3, 10), 1);
  CertifiedReal lhs = lemma_lhs(kPhi, 1, params);
  ASSERT_TRUE(lhs.is_exact());
  EXPECT_EQ(lhs.exact(), Number(2) + kPhi.inv());
  EXPECT_EQ(lhs.exact(), Number::make(3, 1, 2, 5));
}

TEST(LemmaLhs, RationalTailUnsupported) {
  EXPECT_THROW(lemma_lhs(Number(Rational(5, 2)), 0, rational_params(Rational(1, 10), 2)), Error);
}

TEST(IsMember, PellPointIsMember) {
  MembershipVerdict v = is_member(kSilver, pell_params(2));
  ASSERT_EQ(v.kind(), VerdictKind::kMember) << v.to_record();
  const Member& m = v.member();
  EXPECT_EQ(m.certificate.K, 3u);  // q_3 = 12 is the first with 4 / q^(tau-1) <= alpha
  EXPECT_EQ(m.equality_ks, (std::vector<std::size_t>{0, 1}));
}

TEST(IsMember, GoldenRatioWitness) {
  MembershipVerdict v = is_member(kPhi, rational_params(Rational(2, 5), 1));
  ASSERT_EQ(v.kind(), VerdictKind::kNotMember);
  EXPECT_EQ(v.not_member().witness_k, 1u);
  EXPECT_EQ(v.not_member().convergent, (Convergent{2, 1}));
  ASSERT_TRUE(v.not_member().lhs->is_exact());
  EXPECT_EQ(v.not_member().lhs->exact(), Number(2) + kPhi.inv());
  EXPECT_GT(v.not_member().lhs->exact(), Number(Rational(5, 2)));
}

TEST(IsMember, GoldenRatioTauOneUnknown) {
  MembershipVerdict v = is_member(kPhi, rational_params(Rational(3, 10), 1));
  ASSERT_EQ(v.kind(), VerdictKind::kUnknown);
  EXPECT_TRUE(v.unknown().bounded_type_candidate);
  EXPECT_EQ(v.unknown().checked_up_to_k, MembershipOptions{}.tau_one_max_k);
}

TEST(IsMember, RationalIsNeverMember) {
  MembershipVerdict v = is_member(Number(Rational(1, 2)), pell_params(2));
  ASSERT_EQ(v.kind(), VerdictKind::kNotMember);
  EXPECT_TRUE(v.not_member().rational_source);
  EXPECT_EQ(v.not_member().convergent, (Convergent{1, 2}));
}

TEST(IsMember, EmptyAndUnconstrained) {
  testing::Generator gen(3);
  for (int i = 0; i < 30; ++i) {
    Number x = gen.quad_irr();
    MembershipVerdict v = is_member(x, rational_params(Rational(1, 2), 2));
    ASSERT_EQ(v.kind(), VerdictKind::kNotMember);
    EXPECT_LE(v.not_member().witness_k, 1u);
    EXPECT_EQ(is_member(x, rational_params(0, 2)).kind(), VerdictKind::kMember);
  }
}

TEST(IsMember, ExactTieWithRationalExponent) {
  // tau = 3/2 makes 2^tau = 2 sqrt 2 exact, so lhs at k = 1 is exact too.
  // Set gamma at the k = 0 value for xi = 1 + sqrt 2: equality there only.
  DiophParams probe = rational_params(Rational(1, 10), Rational(3, 2));
  CertifiedReal lhs1 = lemma_lhs(kSilver, 1, probe);
  ASSERT_TRUE(lhs1.is_exact());
  Number lhs0 = lemma_lhs(kSilver, 0, probe).exact();
  ASSERT_GT(lhs0, lhs1.exact());
  DiophParams params(lhs0.inv(), Exponent::rational(Rational(3, 2)));
  MembershipVerdict v = is_member(kSilver, params);
  ASSERT_EQ(v.kind(), VerdictKind::kMember) << v.to_record();
  EXPECT_EQ(v.member().equality_ks, (std::vector<std::size_t>{0}));
  EXPECT_EQ(is_member(kSilver, DiophParams(lhs1.exact().inv(), Exponent::rational(Rational(3, 2)))).kind(),
            VerdictKind::kNotMember);
}

TEST(Record, StableText) {
  MembershipVerdict v = is_member(kPhi, rational_params(Rational(2, 5), 1));
  EXPECT_EQ(v.to_record(),
            "kind=NotMember\nwitness.k=1\nwitness.p=2\nwitness.q=1\nwitness.lhs=(3+1*sqrt(5))/2\n"
            "rational_source=false\n");
}

TEST(BruteForce, RationalExcludedAtItsDenominator) {
  BruteForceResult r = brute_force_member(Number(Rational(3, 7)), rational_params(Rational(1, 10), 1), 100);
  EXPECT_EQ(r.kind, BruteForceResult::Kind::kExcluded);
  EXPECT_EQ(r.p, 3);
  EXPECT_EQ(r.q, 7);
}

TEST(BruteForce, GoldenRatioMatchesWitness) {
  BruteForceResult r = brute_force_member(kPhi, rational_params(Rational(2, 5), 1), 10);
  EXPECT_EQ(r.kind, BruteForceResult::Kind::kExcluded);
  EXPECT_EQ(r.p, 2);
  EXPECT_EQ(r.q, 1);
}

TEST(BruteForce, PellPointConsistent) {
  BruteForceResult r = brute_force_member(kSilver, pell_params(2), 10000);
  EXPECT_EQ(r.kind, BruteForceResult::Kind::kConsistent);
  EXPECT_EQ(r.checked, 10000);
}

TEST(BruteForce, PartitioningIsDeterministic) {
  testing::Generator gen(5);
  for (int i = 0; i < 20; ++i) {
    Number x = gen.quad_irr();
    DiophParams params = rational_params(Rational(gen.uniform(1, 49), 100), Rational(gen.uniform(8, 24), 8));
    BruteForceResult a = brute_force_member(x, params, 3000, 1);
    BruteForceResult b = brute_force_member(x, params, 3000, 4);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.q, b.q);
  }
}

TEST(BruteForce, EnclosureInput) {
  DiophParams params = rational_params(Rational(2, 5), 1);
  BruteForceResult r = brute_force_member(enclose(kPhi, 64), params, 10);
  EXPECT_EQ(r.kind, BruteForceResult::Kind::kExcluded);
  EXPECT_EQ(r.q, 1);
  // A wide enclosure straddling an interval boundary cannot be decided.
  Enclosure wide{Rational(1, 2), Rational(3, 4), 64, false};
  EXPECT_EQ(brute_force_member(wide, rational_params(Rational(1, 10), 2), 5).kind,
            BruteForceResult::Kind::kUndecided);
  // 1 + sqrt 2 lies on the boundary at q = 1, which no enclosure can resolve.
  BruteForceResult tie = brute_force_member(enclose(kSilver, 128), pell_params(2), 200);
  EXPECT_EQ(tie.kind, BruteForceResult::Kind::kUndecided);
  EXPECT_EQ(tie.q, 1);
  EXPECT_EQ(brute_force_member(enclose(kSilver, 128), rational_params(Rational(2, 5), 2), 200).kind,
            BruteForceResult::Kind::kConsistent);
}

TEST(BruteForce, EmptyParamsExcludeAtQOne) {
  testing::Generator gen(9);
  for (Rational gamma : {Rational(1, 2), Rational(3, 5)}) {
    for (int i = 0; i < 40; ++i) {
      Number x = gen.quad_irr();
      BruteForceResult r = brute_force_member(x, rational_params(gamma, 2), 1);
      EXPECT_EQ(r.kind, BruteForceResult::Kind::kExcluded) << x.str();
      EXPECT_EQ(r.q, 1);
    }
  }
}

TEST(ExcludedInterval, Examples) {
  ExcludedInterval i0 = excluded_interval(0, 1, rational_params(Rational(2, 5), 2));
  EXPECT_EQ(i0.left().exact(), Number(Rational(-2, 5)));
  EXPECT_EQ(i0.right().exact(), Number(Rational(2, 5)));

  DiophParams pell = pell_params(2);
  Number gamma = pell.gamma();
  ExcludedInterval i1 = excluded_interval(2, 1, pell);
  ASSERT_TRUE(i1.radius.is_exact());
  EXPECT_EQ(i1.radius.exact(), gamma);
  EXPECT_EQ(i1.right().exact(), kSilver);
  ExcludedInterval i2 = excluded_interval(5, 2, pell);
  ASSERT_TRUE(i2.radius.is_exact());
  EXPECT_EQ(i2.radius.exact(), Number(Rational(3, 2)) - Number::sqrt(2));
  EXPECT_EQ(i2.left().exact(), kSilver);
  EXPECT_THROW(excluded_interval(1, 0, pell), Error);
}

TEST(ExcludedInterval, RadiusIsEnclosedOtherwise) {
  DiophParams pell = pell_params(2);
  ExcludedInterval i = excluded_interval(12, 5, pell);
  EXPECT_FALSE(i.radius.is_exact());
  Enclosure r = i.radius.enclose(64);
  double approx = (std::sqrt(2.0) - 1) / std::pow(5.0, std::log(1 + std::sqrt(2.0)) / std::log(2.0) + 1);
  EXPECT_LE(r.lower.to_double(), approx * (1 + 1e-12));
  EXPECT_GE(r.upper.to_double(), approx * (1 - 1e-12));
}

TEST(Translate, VerdictInvariant) {
  EXPECT_EQ(translate(kSilver, -2), Number::make(-1, 1, 1, 2));
  EXPECT_EQ(translate(kPhi, 0), kPhi);
  DiophParams pell = pell_params(2);
  EXPECT_EQ(is_member(translate(kSilver, -2), pell).kind(), VerdictKind::kMember);
  DiophParams p = rational_params(Rational(1, 10), 2);
  EXPECT_EQ(brute_force_member(translate(kPhi, 5), p, 1000).kind, brute_force_member(kPhi, p, 1000).kind);
  testing::Generator gen(21);
  for (int i = 0; i < 40; ++i) {
    Number x = gen.quad_irr();
    DiophParams params = rational_params(Rational(gen.uniform(1, 49), 100), Rational(gen.uniform(9, 24), 8));
    VerdictKind base = is_member(x, params).kind();
    for (long k = -3; k <= 3; ++k) EXPECT_EQ(is_member(translate(x, k), params).kind(), base);
  }
}

TEST(Properties, LemmaAgreesWithDefinition) {
  testing::Generator gen(77);
  int members = 0, non_members = 0;
  for (int i = 0; i < 60; ++i) {
    Number x = gen.quad_irr();
    Rational gamma = gen.rational_in(Rational(0), Rational(1, 2), 40);
    Rational tau = gen.rational_in(Rational(1), Rational(3), 8);
    if (i % 5 == 0) tau = Rational(1) + Rational(gen.uniform(1, 8), 8);
    DiophParams params = rational_params(gamma, tau);
    MembershipVerdict v = is_member(x, params);
    if (v.kind() == VerdictKind::kNotMember) {
      ++non_members;
      CFExpansion cf = CFExpansion::expand(x);
      long Q = cf.convergent(static_cast<long>(v.not_member().witness_k) + 1).q.get_si();
      BruteForceResult r = brute_force_member(x, params, Q);
      EXPECT_EQ(r.kind, BruteForceResult::Kind::kExcluded) << x.str() << " " << params.str();
    } else if (v.kind() == VerdictKind::kMember) {
      ++members;
      EXPECT_EQ(brute_force_member(x, params, 10000).kind, BruteForceResult::Kind::kConsistent)
          << x.str() << " " << params.str();
      // Tail soundness: the criterion keeps holding past K.
      CFExpansion cf = CFExpansion::expand(x);
      for (std::size_t k = v.member().certificate.K; k <= v.member().certificate.K + 10; ++k) {
        auto [order, value] = compare_refining([&](unsigned prec) { return lemma_lhs(cf, k, params, prec); },
                                               params.inverse_gamma());
        ASSERT_TRUE(order.has_value());
        EXPECT_TRUE(*order <= 0);
      }
    }
  }
  EXPECT_GT(members, 0);
  EXPECT_GT(non_members, 0);
}

}  // namespace
}  // namespace diophset
