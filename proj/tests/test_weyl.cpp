#include <gtest/gtest.h>

#include <random>

#include "sft/weyl.hpp"
#include "support/generators.hpp"

using namespace sft;

namespace {

OrbitSystem odd_system(int count, int kappa = 1) {
  std::vector<Orbit> os;
  for (int i = 1; i <= count; ++i) os.push_back({"g" + std::to_string(i), 0, kappa});
  return OrbitSystem(2, os);
}

Monomial mono(std::vector<Factor> f, int h) { return Monomial(std::move(f), h); }
SymbolKey Q(std::uint32_t i) { return {SymbolKind::Q, i}; }
SymbolKey P(std::uint32_t i) { return {SymbolKind::P, i}; }

TruncationContext default_ctx() { return TruncationContext{}; }

}  // namespace

TEST(Star, OddCommutationRelation) {
  OrbitSystem s(2, {{"g1", 0, 2}});
  auto r = star(s.p("g1"), s.q("g1"), default_ctx());
  GradedSeries expected(s.table());
  expected.add_term(mono({{Q(0), 1}, {P(0), 1}}, 0), -1);
  expected.add_term(mono({}, 1), 2);
  EXPECT_EQ(r, expected);
}

TEST(Star, Unit) {
  std::mt19937_64 rng(5);
  auto s = odd_system(3);
  auto F = gen::random_series(rng, s.table(), 6, 1, -1, 2);
  EXPECT_EQ(star(s.one(), F, default_ctx()), F);
  EXPECT_EQ(star(F, s.one(), default_ctx()), F);
}

TEST(Star, EvenDoubleContraction) {
  OrbitSystem s(3, {{"g1", 2, 1}});
  auto r = star(s.p("g1"), s.q("g1", 2), default_ctx());
  // hand oracle: p q q = (q p + h) q = q (q p + h) + h q = q^2 p + 2 h q
  GradedSeries expected(s.table());
  expected.add_term(mono({{Q(0), 2}, {P(0), 1}}, 0), 1);
  expected.add_term(mono({{Q(0), 1}}, 1), 2);
  EXPECT_EQ(r, expected);
}

TEST(Star, UnderflowIsReported) {
  auto s = odd_system(1);
  auto a = s.hbar(-1) * Rational(1);
  EXPECT_THROW(star(a, a, default_ctx()), TruncationUnderflow);
}

TEST(CommutationRelation, AllParitiesAndKappas) {
  for (int n : {2, 3, 4}) {
    for (int cz : {-1, 0, 1, 2}) {
      for (int kappa : {1, 2, 3}) {
        OrbitSystem s(n, {{"g", cz, kappa}});
        int dp = n - 3 - cz, dq = n - 3 + cz;
        Rational sign = ((dp & dq & 1) != 0) ? -1 : 1;
        TruncationContext ctx;
        auto pq = star(s.p("g"), s.q("g"), ctx);
        auto qp = star(s.q("g"), s.p("g"), ctx);
        EXPECT_EQ(pq - qp * sign, s.hbar(1) * Rational(kappa)) << n << " " << cz << " " << kappa;
      }
    }
  }
}

TEST(ActRight, SingleDerivative) {
  auto s = odd_system(1);
  EXPECT_EQ(act_right(s.p("g1"), s.q("g1"), default_ctx()), s.hbar(1));
}

TEST(ActRight, ConstantIsAnnihilated) {
  auto s = odd_system(2);
  auto F = s.p("g1") + star(s.q("g2"), s.p("g1"), default_ctx());
  EXPECT_TRUE(act_right(F, s.one(), default_ctx()).is_zero());
}

TEST(ActRight, CubicVertexOnTwoInputs) {
  auto s = odd_system(3);
  TruncationContext ctx;
  auto F = s.hbar(-1) * Rational(1);
  F = star(star(star(F, s.q("g3"), ctx), s.p("g1"), ctx), s.p("g2"), ctx);
  auto g = star(s.q("g1"), s.q("g2"), ctx);
  auto oracle = star_by_transposition(F, g, ctx).filter(
      [](const Monomial& m) { return !m.has_kind(SymbolKind::P); });
  auto r = act_right(F, g, ctx);
  EXPECT_EQ(r, oracle);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.terms().begin()->first, mono({{Q(2), 1}}, 1));
  EXPECT_EQ(abs(r.terms().begin()->second), 1);
}

TEST(ActLeft, SingleDerivative) {
  auto s = odd_system(1);
  EXPECT_EQ(act_left(s.p("g1"), s.q("g1"), default_ctx()), s.hbar(1));
}

TEST(ActLeft, UnitAgainstQTerms) {
  auto s = odd_system(2);
  auto H = s.q("g1") + star(s.q("g2"), s.p("g1"), default_ctx());
  EXPECT_TRUE(act_left(s.one(), H, default_ctx()).is_zero());
}

TEST(ActLeft, OneContraction) {
  auto s = odd_system(2);
  TruncationContext ctx;
  auto g = star(s.p("g1"), s.p("g2"), ctx);
  auto H = s.q("g1");
  // with q1 p2 instead, the leftover p2 p2 vanishes for odd p2
  EXPECT_TRUE(act_left(g, star(s.q("g1"), s.p("g2"), ctx), ctx).is_zero());
  auto oracle = star_by_transposition(g, H, ctx).filter(
      [](const Monomial& m) { return !m.has_kind(SymbolKind::Q); });
  auto r = act_left(g, H, ctx);
  EXPECT_EQ(r, oracle);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.terms().begin()->first, mono({{P(1), 1}}, 1));
}

TEST(MasterH, ZeroPasses) {
  auto s = odd_system(1);
  EXPECT_TRUE(check_master_H(s.zero(), default_ctx()).passed());
}

TEST(MasterH, CubicVertexPasses) {
  auto s = odd_system(3);
  TruncationContext ctx;
  auto H = star(star(s.q("g1"), s.q("g2"), ctx), s.p("g3"), ctx).shift_hbar(-1);
  auto r = check_master_H(H, ctx);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.notes.empty());
}

TEST(MasterH, CrossedCylindersFail) {
  auto s = odd_system(2);
  TruncationContext ctx;
  auto H = (star(s.q("g1"), s.p("g2"), ctx) + star(s.q("g2"), s.p("g1"), ctx)).shift_hbar(-1);
  auto r = check_master_H(H, ctx);
  EXPECT_EQ(r.status, Status::Fail);
  EXPECT_GT(r.witness_count, 0u);
  // oracle: brute-force transposition product
  TruncationContext wide = ctx;
  wide.min_hbar = -2;
  auto hh = star_by_transposition(H, H, wide);
  EXPECT_EQ(r.witness_count, hh.size());
}

TEST(MasterChain, ZeroBoundaryMatchesMasterH) {
  std::mt19937_64 rng(17);
  auto s = odd_system(3);
  TruncationContext ctx;
  for (int i = 0; i < 20; ++i) {
    auto H = gen::random_series(rng, s.table(), 3, 1, -1, 1);
    auto a = check_master_H(H, ctx);
    auto b = check_master_chain(H, {}, ctx);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.witness_count, b.witness_count);
  }
}

TEST(MasterChain, ExactCoefficientNeedsItsBoundary) {
  auto s = odd_system(1);
  auto t = s.table();
  auto c = t->intern_coefficient("c", 0);
  auto e = t->intern_coefficient("e", -1);
  TruncationContext ctx;
  // H = (1/h) c * q1: no contractions, so H*H = 0 and dH must vanish by itself
  auto H = star(GradedSeries::symbol(t, c), s.q("g1"), ctx).shift_hbar(-1);
  CoefficientMap d = [&](const Monomial& m) {
    GradedSeries out(t);
    if (m.exponent(c) == 1) out.add_term(Monomial({{e, 1}}, 0), 1);
    return out;
  };
  EXPECT_EQ(check_master_chain(H, d, ctx).status, Status::Fail);
  EXPECT_TRUE(check_master_chain(H, {}, ctx).passed());
}

TEST(MasterF, Trivial) {
  OrbitSystem s(2, {{"a+", 0, 1, true, Side::Plus}, {"a-", 0, 1, true, Side::Minus}});
  TruncationContext ctx;
  EXPECT_TRUE(check_master_F(s, s.zero(), s.zero(), s.zero(), ctx).passed());
  auto Hp = star(s.q("a+"), s.p("a+"), ctx).shift_hbar(-1);
  EXPECT_TRUE(check_master_F(s, s.zero(), Hp, s.zero(), ctx).passed());
}

TEST(MasterF, TrivialCylinderWithZeroHamiltonians) {
  OrbitSystem s(2, {{"a+", 0, 1, true, Side::Plus}, {"a-", 0, 1, true, Side::Minus}});
  TruncationContext ctx;
  auto F = star(s.q("a-"), s.p("a+"), ctx).shift_hbar(-1);
  EXPECT_TRUE(check_master_F(s, F, s.zero(), s.zero(), ctx).passed());
}

TEST(MasterF, RejectsConstantTerm) {
  OrbitSystem s(2, {{"a+", 0, 1, true, Side::Plus}, {"a-", 0, 1, true, Side::Minus}});
  auto F = s.hbar(-1) * Rational(1);
  EXPECT_THROW(check_master_F(s, F, s.zero(), s.zero(), default_ctx()), PreconditionError);
}

class StarProperties : public ::testing::TestWithParam<int> {};

TEST_P(StarProperties, AgreesWithTranspositionOracleAndIsAssociative) {
  std::mt19937_64 rng(2000 + GetParam());
  auto s = gen::random_orbit_system(rng, 3);
  TruncationContext ctx;
  ctx.min_hbar = -3;
  ctx.max_hbar = 64;
  ctx.max_p_degree = 64;
  for (int trial = 0; trial < 15; ++trial) {
    auto a = gen::random_series(rng, s.table(), 3, 2, -1, 1);
    auto b = gen::random_series(rng, s.table(), 3, 2, 0, 1);
    auto c = gen::random_series(rng, s.table(), 3, 2, 0, 1);
    EXPECT_EQ(star(a, b, ctx), star_by_transposition(a, b, ctx));
    EXPECT_EQ(star(star(a, b, ctx), c, ctx), star(a, star(b, c, ctx), ctx));

    auto pa = gen::random_series(rng, s.table(), 3, 2, 0, 1, false);
    auto pb = gen::random_series(rng, s.table(), 3, 2, 0, 1, false);
    EXPECT_EQ(star(pa, pb, ctx), mul(pa, pb, ctx));

    auto ha = gen::homogeneous_part(a);
    auto hb = gen::homogeneous_part(b);
    if (!ha.is_zero() && !hb.is_zero()) {
      auto comm = supercommutator(ha, hb, ctx);
      for (const auto& [m, coef] : comm.terms()) {
        EXPECT_GE(m.hbar(), ha.min_hbar() + hb.min_hbar() + 1);
      }
    }
  }
}

TEST_P(StarProperties, RepresentationProperty) {
  std::mt19937_64 rng(3000 + GetParam());
  auto s = gen::random_orbit_system(rng, 3);
  TruncationContext ctx;
  ctx.max_hbar = 64;
  ctx.max_p_degree = 64;
  for (int trial = 0; trial < 15; ++trial) {
    auto F = gen::random_series(rng, s.table(), 3, 2, 0, 1);
    auto G = gen::random_series(rng, s.table(), 3, 2, 0, 1);
    auto g = gen::random_series(rng, s.table(), 3, 2, 0, 1, false);
    EXPECT_EQ(act_right(star(F, G, ctx), g, ctx), act_right(F, act_right(G, g, ctx), ctx));
  }
}

INSTANTIATE_TEST_SUITE_P(RandomSystems, StarProperties, ::testing::Range(0, 8));

namespace {

// Copies a single-end Hamiltonian onto the + or - orbits of a cobordism system.
GradedSeries relabel(const GradedSeries& H, const OrbitSystem& target, const std::string& suffix) {
  GradedSeries out(target.table());
  const SymbolTable& src = *H.table();
  for (const auto& [m, c] : H.terms()) {
    std::vector<Factor> f;
    for (const auto& x : m.factors()) {
      auto idx = target.require_variable(src.name(x.key) + suffix);
      f.push_back({{x.key.kind, idx}, x.exp});
    }
    auto n = normalize(*target.table(), f, m.hbar());
    out.add_term(n->monomial, n->sign * c);
  }
  return out;
}

}  // namespace

TEST(MasterF, TrivialCobordismIntertwinesEqualHamiltonians) {
  std::mt19937_64 rng(99);
  int flipped_failures = 0;
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    std::vector<Orbit> base, cob;
    for (int i = 1; i <= 3; ++i) {
      int cz = static_cast<int>(rng() % 3) - 1;
      int kappa = 1 + static_cast<int>(rng() % 2);
      base.push_back({"g" + std::to_string(i), cz, kappa});
      cob.push_back({"g" + std::to_string(i) + "+", cz, kappa, true, Side::Plus});
      cob.push_back({"g" + std::to_string(i) + "-", cz, kappa, true, Side::Minus});
    }
    OrbitSystem single(n, base);
    OrbitSystem s(n, cob);
    TruncationContext ctx;
    ctx.max_p_degree = 3;
    ctx.max_hbar = 2;
    auto H = gen::random_series(rng, single.table(), 2, 1, -1, 0);
    GradedSeries F(s.table());
    for (int i = 1; i <= 3; ++i) {
      auto g = "g" + std::to_string(i);
      auto term = star(s.q(g + "-"), s.p(g + "+"), TruncationContext::unbounded()).shift_hbar(-1);
      F += term * (Rational(1) / base[i - 1].kappa);
    }
    auto r = check_master_F(s, F, relabel(H, s, "+"), relabel(H, s, "-"), ctx);
    EXPECT_TRUE(r.passed()) << H.to_string() << " n=" << n << " first witness "
                            << (r.witnesses.empty() ? "" : r.witnesses[0].item);
    auto bad = check_master_F(s, -F, relabel(H, s, "+"), relabel(H, s, "-"), ctx);
    if (!bad.passed()) ++flipped_failures;
  }
  EXPECT_GT(flipped_failures, 10);
}
