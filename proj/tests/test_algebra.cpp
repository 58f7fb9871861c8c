#include <gtest/gtest.h>

#include <random>

#include "sft/algebra.hpp"
#include "support/generators.hpp"

using namespace sft;

namespace {

TablePtr odd_table(int orbits) {
  auto t = std::make_shared<SymbolTable>(-2);
  for (int i = 0; i < orbits; ++i) t->add_orbit("g" + std::to_string(i + 1), -1, -1, 1);
  return t;
}

SymbolKey q(std::uint32_t i) { return {SymbolKind::Q, i}; }
SymbolKey p(std::uint32_t i) { return {SymbolKind::P, i}; }

}  // namespace

TEST(KoszulSign, IdentityIsPlus) {
  std::vector<int> deg = {1, 3, 2, 5};
  std::vector<std::size_t> id = {0, 1, 2, 3};
  EXPECT_EQ(koszul_sign(deg, id), 1);
}

TEST(KoszulSign, OddSwapIsMinus) {
  std::vector<int> deg = {1, 3};
  std::vector<std::size_t> sw = {1, 0};
  EXPECT_EQ(koszul_sign(deg, sw), -1);
}

TEST(KoszulSign, MixedSwapIsPlus) {
  std::vector<int> deg = {1, 2};
  std::vector<std::size_t> sw = {1, 0};
  EXPECT_EQ(koszul_sign(deg, sw), 1);
}

TEST(KoszulSign, RejectsNonPermutation) {
  std::vector<int> deg = {1, 1};
  std::vector<std::size_t> bad = {0, 0};
  EXPECT_THROW(koszul_sign(deg, bad), PreconditionError);
}

TEST(KoszulSign, ComposesMultiplicatively) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 7;
    std::vector<int> deg(n);
    for (auto& d : deg) d = static_cast<int>(rng() % 5) - 2;
    std::vector<std::size_t> s(n), t(n);
    std::iota(s.begin(), s.end(), 0);
    std::iota(t.begin(), t.end(), 0);
    std::shuffle(s.begin(), s.end(), rng);
    std::shuffle(t.begin(), t.end(), rng);
    // apply s, then t to the rearranged sequence
    std::vector<int> deg_s(n);
    for (std::size_t i = 0; i < n; ++i) deg_s[i] = deg[s[i]];
    std::vector<std::size_t> st(n);
    for (std::size_t i = 0; i < n; ++i) st[i] = s[t[i]];
    EXPECT_EQ(koszul_sign(deg, st), koszul_sign(deg, s) * koszul_sign(deg_s, t));
  }
}

TEST(Normalize, OddSwap) {
  auto t = odd_table(2);
  std::vector<Factor> w = {{q(1), 1}, {q(0), 1}};
  auto r = normalize(*t, w);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->sign, -1);
  EXPECT_EQ(r->monomial, Monomial({{q(0), 1}, {q(1), 1}}, 0));
}

TEST(Normalize, OddSquareVanishes) {
  auto t = odd_table(1);
  std::vector<Factor> w = {{q(0), 1}, {q(0), 1}};
  EXPECT_FALSE(normalize(*t, w));
}

TEST(Normalize, HbarCommutes) {
  auto t = odd_table(1);
  std::vector<Factor> w = {{{SymbolKind::Hbar, 0}, 1}, {q(0), 1}};
  auto r = normalize(*t, w);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->sign, 1);
  EXPECT_EQ(r->monomial, Monomial({{q(0), 1}}, 1));
}

TEST(Normalize, RejectsPBeforeQOfSameOrbit) {
  auto t = odd_table(1);
  std::vector<Factor> w = {{p(0), 1}, {q(0), 1}};
  EXPECT_THROW(normalize(*t, w), PreconditionError);
}

TEST(Normalize, Idempotent) {
  std::mt19937_64 rng(11);
  auto t = std::make_shared<SymbolTable>(2);
  for (int i = 0; i < 4; ++i) t->add_orbit("g" + std::to_string(i), i % 3 - 1, i % 3 - 1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Factor> w;
    int len = static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) w.push_back({q(static_cast<std::uint32_t>(rng() % 4)), 1});
    auto r = normalize(*t, w);
    if (!r) continue;
    auto again = normalize(*t, r->monomial.factors(), r->monomial.hbar());
    ASSERT_TRUE(again);
    EXPECT_EQ(again->sign, 1);
    EXPECT_EQ(again->monomial, r->monomial);
  }
}

TEST(Mul, Unit) {
  std::mt19937_64 rng(3);
  auto t = odd_table(3);
  TruncationContext ctx;
  auto b = gen::random_series(rng, t, 5, 1, 0, 2);
  EXPECT_EQ(mul(GradedSeries(t, 1), b, ctx), b);
}

TEST(Mul, OddGeneratorsAnticommute) {
  auto t = odd_table(2);
  TruncationContext ctx;
  auto q1 = GradedSeries::symbol(t, q(0));
  auto q2 = GradedSeries::symbol(t, q(1));
  EXPECT_EQ(mul(q1, q2, ctx), -mul(q2, q1, ctx));
  EXPECT_FALSE(mul(q1, q2, ctx).is_zero());
}

TEST(Mul, SquareOfOddSumVanishes) {
  auto t = odd_table(2);
  TruncationContext ctx;
  auto s = GradedSeries::symbol(t, q(0)) + GradedSeries::symbol(t, q(1));
  // oracle: the four words q1q1, q1q2, q2q1, q2q2 normalized one by one
  GradedSeries oracle(t);
  for (std::uint32_t i = 0; i < 2; ++i) {
    for (std::uint32_t j = 0; j < 2; ++j) {
      std::vector<Factor> w = {{q(i), 1}, {q(j), 1}};
      if (auto r = normalize(*t, w)) oracle.add_term(r->monomial, r->sign);
    }
  }
  EXPECT_TRUE(oracle.is_zero());
  EXPECT_EQ(mul(s, s, ctx), oracle);
}

TEST(Mul, EvenSquare) {
  auto t = std::make_shared<SymbolTable>(0);
  t->add_orbit("x", 0, 0, 1);
  TruncationContext ctx;
  auto x = GradedSeries::symbol(t, q(0));
  auto s = x + GradedSeries(t, 1);
  auto sq = mul(s, s, ctx);
  EXPECT_EQ(sq.coefficient(Monomial({{q(0), 2}}, 0)), 1);
  EXPECT_EQ(sq.coefficient(Monomial({{q(0), 1}}, 0)), 2);
  EXPECT_EQ(sq.coefficient(Monomial{}), 1);
}

TEST(Mul, RespectsTruncation) {
  auto t = odd_table(3);
  TruncationContext ctx;
  ctx.max_p_degree = 1;
  auto a = GradedSeries::symbol(t, p(0));
  auto b = GradedSeries::symbol(t, p(1));
  EXPECT_TRUE(mul(a, b, ctx).is_zero());
  ctx.max_p_degree = 2;
  EXPECT_FALSE(mul(a, b, ctx).is_zero());
}

TEST(Truncation, UnderflowIsAnError) {
  auto t = odd_table(1);
  TruncationContext ctx;
  auto a = GradedSeries::hbar_power(t, -1);
  EXPECT_THROW(mul(a, a, ctx), TruncationUnderflow);
}

TEST(Series, EmptyIsZeroAndPrintsZero) {
  auto t = odd_table(1);
  GradedSeries z(t);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.to_string(), "0");
}

TEST(Series, PrintsCanonicalText) {
  auto t = odd_table(3);
  GradedSeries s(t);
  s.add_term(Monomial({{q(0), 1}, {q(1), 1}, {p(2), 1}}, -1), 1);
  s.add_term(Monomial({{q(0), 1}}, 0), Rational(-3, 4));
  EXPECT_EQ(s.to_string(), "-3/4*q[g1] + (1/h)*q[g1]*q[g2]*p[g3]");
}

class MulProperties : public ::testing::TestWithParam<int> {};

TEST_P(MulProperties, AssociativeCommutativeAndAdditive) {
  std::mt19937_64 rng(1000 + GetParam());
  auto t = std::make_shared<SymbolTable>(GetParam() % 2 ? -2 : 2);
  std::uniform_int_distribution<int> deg(-2, 2);
  for (int i = 0; i < 4; ++i) {
    int d = deg(rng);
    t->add_orbit("g" + std::to_string(i), d, d, 1);
  }
  TruncationContext ctx;
  ctx.max_p_degree = 6;
  ctx.max_hbar = 6;
  for (int trial = 0; trial < 40; ++trial) {
    auto a = gen::random_series(rng, t, 3, 2, -1, 1);
    auto b = gen::random_series(rng, t, 3, 2, 0, 1);
    auto c = gen::random_series(rng, t, 3, 2, 0, 1);
    TruncationContext wide = ctx;
    wide.min_hbar = -3;
    EXPECT_EQ(mul(mul(a, b, wide), c, wide), mul(a, mul(b, c, wide), wide));

    auto ha = gen::homogeneous_part(a);
    auto hb = gen::homogeneous_part(b);
    if (ha.is_zero() || hb.is_zero()) continue;
    int da = *ha.homogeneous_degree();
    int db = *hb.homogeneous_degree();
    Rational sign = (da & db & 1) ? -1 : 1;
    auto prod = mul(ha, hb, wide);
    EXPECT_EQ(prod, mul(hb, ha, wide) * sign);
    for (const auto& [m, coef] : prod.terms()) {
      EXPECT_EQ(m.degree(*t), da + db);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(RandomTables, MulProperties, ::testing::Range(0, 6));
