#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "sft/surface.hpp"

using namespace sft;

namespace {

std::vector<Letter> random_word(std::mt19937_64& rng, const Surface& s, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> letter(0, static_cast<int>(s.letter_count()) - 1);
  std::vector<Letter> w;
  int target = len(rng);
  while (static_cast<int>(w.size()) < target) {
    auto l = static_cast<Letter>(letter(rng));
    if (!w.empty() && l == inverse_letter(w.back())) continue;
    w.push_back(l);
  }
  return w;
}

std::vector<Letter> inverse_word(const std::vector<Letter>& w) {
  std::vector<Letter> out(w.rbegin(), w.rend());
  for (auto& l : out) l = inverse_letter(l);
  return out;
}

std::vector<Letter> concat(std::vector<Letter> a, const std::vector<Letter>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Plain Dehn algorithm on linear words: free reduction and removal of more
// than half of a relator until nothing changes.
bool trivial_in_group(std::vector<Letter> w, const std::vector<Letter>& rel) {
  const int rl = static_cast<int>(rel.size());
  auto reduce_free = [](std::vector<Letter>& v) {
    std::vector<Letter> out;
    for (Letter l : v) {
      if (!out.empty() && out.back() == inverse_letter(l)) out.pop_back();
      else out.push_back(l);
    }
    v = out;
  };
  std::vector<std::vector<Letter>> rels;
  for (int r = 0; r < rl; ++r) {
    std::vector<Letter> rot;
    for (int t = 0; t < rl; ++t) rot.push_back(rel[(r + t) % rl]);
    rels.push_back(rot);
    rels.push_back(inverse_word(rot));
  }
  for (bool changed = true; changed;) {
    changed = false;
    reduce_free(w);
    for (const auto& r : rels) {
      for (int len = rl; len > rl / 2 && !changed; --len) {
        for (std::size_t s = 0; s + len <= w.size() && !changed; ++s) {
          if (!std::equal(r.begin(), r.begin() + len, w.begin() + static_cast<long>(s))) continue;
          std::vector<Letter> rest(r.begin() + len, r.end());
          auto repl = inverse_word(rest);
          std::vector<Letter> out(w.begin(), w.begin() + static_cast<long>(s));
          out.insert(out.end(), repl.begin(), repl.end());
          out.insert(out.end(), w.begin() + static_cast<long>(s) + len, w.end());
          w = out;
          changed = true;
        }
      }
      if (changed) break;
    }
  }
  return w.empty();
}

// Sufficient test for conjugacy: some rotations differ by a piece of a relator.
bool conjugate_by_piece(const std::vector<Letter>& u, const std::vector<Letter>& v,
                        const std::vector<Letter>& rel) {
  const int rl = static_cast<int>(rel.size());
  std::vector<std::vector<Letter>> conjugators{{}};
  for (int r = 0; r < rl; ++r) {
    for (int len = 1; len <= rl / 2; ++len) {
      std::vector<Letter> g;
      for (int t = 0; t < len; ++t) g.push_back(rel[(r + t) % rl]);
      conjugators.push_back(g);
      conjugators.push_back(inverse_word(g));
    }
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::vector<Letter> ur(u.begin() + static_cast<long>(i), u.end());
    ur.insert(ur.end(), u.begin(), u.begin() + static_cast<long>(i));
    for (const auto& g : conjugators) {
      auto w = concat(concat(concat(g, ur), inverse_word(g)), inverse_word(v));
      if (trivial_in_group(w, rel)) return true;
    }
  }
  return false;
}

// Exponent sums of a_i, b_i.
std::vector<long> homology(const Surface& s, std::span<const Letter> w) {
  std::vector<long> h(s.rank(), 0);
  for (Letter l : w) h[l / 2] += (l & 1) ? -1 : 1;
  return h;
}

long intersection_form(const Surface& s, const std::vector<long>& x, const std::vector<long>& y) {
  long out = 0;
  for (int i = 0; i < s.spec().genus; ++i) out += x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i];
  return out;
}

// Bracket computed from arbitrary cyclically reduced representatives.
Vec1<CyclicWord> bracket_from(const Surface& s, const std::vector<Letter>& x,
                              const std::vector<Letter>& y) {
  Vec1<CyclicWord> out;
  for (const auto& lp : linked_pairs(s, x, y)) {
    std::vector<Letter> w;
    for (std::size_t t = 0; t < x.size(); ++t) w.push_back(x[(lp.i + t) % x.size()]);
    for (std::size_t t = 0; t < y.size(); ++t) w.push_back(y[(lp.j + t) % y.size()]);
    if (auto c = s.reduce(w)) add_to(out, *c, lp.sign);
  }
  return out;
}

Vec2<CyclicWord> cobracket_from(const Surface& s, const std::vector<Letter>& x) {
  Vec2<CyclicWord> out;
  const std::size_t L = x.size();
  for (const auto& lp : self_linked_pairs(s, x)) {
    std::vector<Letter> u, v;
    for (std::size_t t = lp.i; t % L != lp.j % L || u.empty(); ++t) u.push_back(x[t % L]);
    for (std::size_t t = lp.j; t % L != lp.i % L || v.empty(); ++t) v.push_back(x[t % L]);
    auto cu = s.reduce(u), cv = s.reduce(v);
    if (cu && cv) add_to(out, {*cu, *cv}, lp.sign);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- words

TEST(Words, CancellingPairIsTrivial) {
  Surface s({2, 0});
  EXPECT_FALSE(s.reduce("a1 A1").has_value());
}

TEST(Words, RotationIsCanonicalized) {
  Surface s({2, 0});
  EXPECT_EQ(s.reduce("b1 a1"), s.reduce("a1 b1"));
  EXPECT_EQ(s.render(*s.reduce("b1 a1")), "a1 b1");
}

TEST(Words, RelatorIsTrivial) {
  Surface s({2, 0});
  EXPECT_FALSE(s.reduce("a1 b1 A1 B1 a2 b2 A2 B2").has_value());
  EXPECT_FALSE(s.reduce("b2 A2 B2 a1 b1 A1 B1 a2").has_value());
  EXPECT_FALSE(s.reduce("b2 a2 B2 A2 b1 a1 B1 A1").has_value());
}

TEST(Words, MoreThanHalfRelatorShortens) {
  Surface s({2, 0});
  // a1 b1 A1 B1 = (a2 b2 A2 B2)^-1, so the word is conjugate to a2.
  EXPECT_EQ(s.render(*s.reduce("a1 b1 A1 B1 a2")), "a2");
}

TEST(Words, UnknownLetterIsRejected) {
  Surface s({2, 0});
  EXPECT_THROW(s.parse("a1 x7"), PreconditionError);
  EXPECT_THROW(s.parse("a3"), PreconditionError);
  EXPECT_EQ(s.parse("a1b1A2"), s.parse("a1 b1 A2"));
}

TEST(Words, FreeSurfaceKeepsLongWords) {
  Surface s({2, 1});
  auto w = s.reduce("a1 b1 A1 B1 a2 b2 A2 B2");
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->length(), 8u);
}

TEST(Words, BoundaryGeneratorsExist) {
  Surface s({1, 3});
  EXPECT_EQ(s.rank(), 4u);
  EXPECT_TRUE(s.find_letter("c2").has_value());
  EXPECT_FALSE(s.find_letter("c3").has_value());
  EXPECT_EQ(s.vertex_order().size(), 8u);
}

TEST(Words, TorusClassesAreLatticeVectors) {
  Surface t({1, 0});
  auto w = t.require("b1 a1 a1 B1 a1");
  EXPECT_EQ(t.torus_vector(w), (std::pair<long, long>{3, 0}));
  EXPECT_EQ(t.root_power(w), 3);
  EXPECT_FALSE(t.reduce("a1 b1 A1 B1").has_value());
}

TEST(Words, InverseAndRootPower) {
  Surface s({2, 0});
  auto w = s.require("a1 b1 a1 b1");
  EXPECT_EQ(s.root_power(w), 2);
  EXPECT_EQ(s.inverse(s.inverse(w)), w);
  EXPECT_EQ(s.inverse(s.require("a1")), s.require("A1"));
}

TEST(Words, ClassCountsForFreeGroup) {
  // One-holed torus: classes are cyclically reduced necklaces in a free group of rank 2.
  Surface s({1, 1});
  std::set<std::vector<Letter>> necklaces;
  std::function<void(std::vector<Letter>&)> grow = [&](std::vector<Letter>& w) {
    if (!w.empty() && w.front() != inverse_letter(w.back())) {
      auto best = w;
      for (std::size_t r = 1; r < w.size(); ++r) {
        std::vector<Letter> rot(w.begin() + static_cast<long>(r), w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
        best = std::min(best, rot);
      }
      necklaces.insert(best);
    }
    if (w.size() == 4) return;
    for (Letter l = 0; l < 4; ++l) {
      if (!w.empty() && l == inverse_letter(w.back())) continue;
      w.push_back(l);
      grow(w);
      w.pop_back();
    }
  };
  std::vector<Letter> w;
  grow(w);
  EXPECT_EQ(s.classes(4).size(), necklaces.size());
}

TEST(WordsProperty, RelatorInsertionsDoNotChangeTheClass) {
  std::mt19937_64 rng(11);
  for (int g : {2, 3}) {
    Surface s({g, 0});
    const auto& R = s.relator();
    for (int trial = 0; trial < 300; ++trial) {
      auto w = random_word(rng, s, 1, 7);
      auto base = s.reduce(w);
      auto v = w;
      // Conjugate a rotated relator into a random slot, then conjugate the whole word.
      std::size_t rot = rng() % R.size();
      std::vector<Letter> r(R.begin() + static_cast<long>(rot), R.end());
      r.insert(r.end(), R.begin(), R.begin() + static_cast<long>(rot));
      if (rng() % 2) r = inverse_word(r);
      auto g1 = random_word(rng, s, 0, 3);
      std::size_t at = rng() % (v.size() + 1);
      std::vector<Letter> ins = concat(concat(g1, r), inverse_word(g1));
      v.insert(v.begin() + static_cast<long>(at), ins.begin(), ins.end());
      auto g2 = random_word(rng, s, 0, 3);
      v = concat(concat(g2, v), inverse_word(g2));
      EXPECT_EQ(s.reduce(v), base) << s.render(w) << " vs " << s.render(v);
    }
  }
}

TEST(WordsProperty, DistinctClassesAreNotConjugate) {
  Surface s({2, 0});
  auto cls = s.classes(3);
  for (std::size_t i = 0; i < cls.size(); ++i) {
    for (std::size_t j = i + 1; j < cls.size(); ++j) {
      if (cls[i].length() != cls[j].length()) continue;
      EXPECT_FALSE(conjugate_by_piece(cls[i].letters(), cls[j].letters(), s.relator()))
          << s.render(cls[i]) << " ~ " << s.render(cls[j]);
    }
  }
}

TEST(WordsProperty, CanonicalWordIsConjugateToInput) {
  std::mt19937_64 rng(12);
  Surface s({2, 0});
  for (int trial = 0; trial < 200; ++trial) {
    auto w = free_cyclic_reduce(random_word(rng, s, 1, 8));
    if (w.empty()) continue;
    auto c = s.reduce(w);
    if (!c) {
      EXPECT_TRUE(trivial_in_group(w, s.relator()));
      continue;
    }
    EXPECT_LE(c->length(), w.size());
    EXPECT_TRUE(conjugate_by_piece(w, c->letters(), s.relator()) ||
                conjugate_by_piece(c->letters(), w, s.relator()))
        << s.render(w) << " -> " << s.render(*c);
  }
}

// ---------------------------------------------------------------- bracket

TEST(Bracket, DisjointSimpleCurves) {
  Surface s({2, 0});
  EXPECT_TRUE(goldman_bracket(s, s.require("a1"), s.require("a2")).empty());
  EXPECT_TRUE(linked_pairs(s, s.require("a1").letters(), s.require("a2").letters()).empty());
}

TEST(Bracket, DualCurvesMeetOnce) {
  Surface s({2, 0});
  auto a1 = s.require("a1"), b1 = s.require("b1");
  auto lp = linked_pairs(s, a1.letters(), b1.letters());
  ASSERT_EQ(lp.size(), 1u);
  auto br = goldman_bracket(s, a1, b1);
  ASSERT_EQ(br.size(), 1u);
  EXPECT_EQ(s.render(br.begin()->first), "a1 b1");
  EXPECT_EQ(br.begin()->second, -1);
  EXPECT_EQ(goldman_bracket(s, b1, a1).begin()->second, 1);
}

TEST(Bracket, EqualArgumentsGiveZero) {
  Surface s({2, 0});
  for (const auto& w : s.classes(3)) EXPECT_TRUE(goldman_bracket(s, w, w).empty()) << s.render(w);
}

TEST(Bracket, SignSumIsIntersectionNumber) {
  std::mt19937_64 rng(21);
  for (SurfaceSpec spec : {SurfaceSpec{2, 0}, SurfaceSpec{2, 1}, SurfaceSpec{3, 0}, SurfaceSpec{1, 2}}) {
    Surface s(spec);
    for (int trial = 0; trial < 150; ++trial) {
      auto x = free_cyclic_reduce(random_word(rng, s, 1, 7));
      auto y = free_cyclic_reduce(random_word(rng, s, 1, 7));
      if (x.empty() || y.empty()) continue;
      long sum = 0;
      for (const auto& lp : linked_pairs(s, x, y)) sum += lp.sign;
      EXPECT_EQ(sum, -intersection_form(s, homology(s, x), homology(s, y)))
          << s.render(x) << " , " << s.render(y);
    }
  }
}

TEST(Bracket, TorusLinkedPairsMatchStraightLines) {
  Surface t({1, 0});
  for (long m = -3; m <= 3; ++m) {
    for (long n = -3; n <= 3; ++n) {
      for (long p = -3; p <= 3; ++p) {
        for (long q = -3; q <= 3; ++q) {
          if ((m == 0 && n == 0) || (p == 0 && q == 0)) continue;
          auto x = *t.torus_class(m, n), y = *t.torus_class(p, q);
          EXPECT_EQ(linked_pair_bracket(t, x, y), torus_bracket_oracle(t, m, n, p, q))
              << m << "," << n << " " << p << "," << q;
          EXPECT_TRUE(linked_pair_cobracket(t, x).empty());
        }
      }
    }
  }
}

TEST(Bracket, TorusOracleExamples) {
  Surface t({1, 0});
  auto r = torus_bracket_oracle(t, 1, 0, 0, 1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(t.torus_vector(r.begin()->first), (std::pair<long, long>{1, 1}));
  EXPECT_EQ(abs(r.begin()->second), 1);
  EXPECT_TRUE(torus_bracket_oracle(t, 1, 0, 2, 0).empty());
  auto r2 = torus_bracket_oracle(t, 1, 0, 1, 1);
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_EQ(t.torus_vector(r2.begin()->first), (std::pair<long, long>{2, 1}));
  EXPECT_THROW(torus_bracket_oracle(t, 0, 0, 1, 0), PreconditionError);
}

TEST(Bracket, TorusJacobiOnLatticeVectors) {
  Surface t({1, 0});
  auto ops = string_bialgebra(t);
  CheckReport r;
  check_jacobi(ops, *t.torus_class(1, 0), *t.torus_class(0, 1), *t.torus_class(1, 1), r);
  EXPECT_TRUE(r.passed());
}

TEST(Bracket, TorusOracleIsBilinearInDirection) {
  Surface t({1, 0});
  // [k x, y] has k times the coefficient of [x, y] when y is primitive.
  for (long k = 1; k <= 3; ++k) {
    auto a = torus_bracket_oracle(t, k, 0, 0, 1);
    auto b = torus_bracket_oracle(t, 1, 0, 0, 1);
    EXPECT_EQ(a.begin()->second, k * b.begin()->second);
  }
}

TEST(BracketProperty, AntisymmetricAndRepresentativeIndependent) {
  std::mt19937_64 rng(22);
  Surface s({2, 0});
  const auto& R = s.relator();
  for (int trial = 0; trial < 120; ++trial) {
    auto xw = free_cyclic_reduce(random_word(rng, s, 1, 5));
    auto yw = free_cyclic_reduce(random_word(rng, s, 1, 5));
    auto x = s.reduce(xw), y = s.reduce(yw);
    if (!x || !y) continue;
    auto xy = goldman_bracket(s, *x, *y);
    auto yx = goldman_bracket(s, *y, *x);
    add_scaled(yx, xy, 1);
    EXPECT_TRUE(yx.empty());
    // Another representative of x: conjugate, with a relator spliced in.
    auto g = random_word(rng, s, 1, 2);
    std::vector<Letter> alt = concat(concat(g, xw), inverse_word(g));
    std::size_t at = rng() % alt.size();
    alt.insert(alt.begin() + static_cast<long>(at), R.begin(), R.end());
    alt = free_cyclic_reduce(alt);
    EXPECT_EQ(bracket_from(s, alt, yw), xy) << s.render(xw) << " / " << s.render(alt);
    EXPECT_EQ(cobracket_from(s, alt), turaev_cobracket(s, *x)) << s.render(alt);
  }
}

// ---------------------------------------------------------------- cobracket

TEST(Cobracket, SimpleCurvesHaveNone) {
  Surface s({2, 0});
  for (const char* w : {"a1", "b2", "a1 b1", "a1 b1 A1 B1", "a1 a2"}) {
    EXPECT_TRUE(turaev_cobracket(s, s.require(w)).empty()) << w;
    EXPECT_TRUE(self_linked_pairs(s, s.require(w).letters()).empty()) << w;
  }
}

TEST(Cobracket, TermsComeInOppositePairs) {
  Surface s({2, 0});
  int nonzero = 0;
  for (const auto& w : s.classes(4)) {
    auto lp = self_linked_pairs(s, w.letters());
    EXPECT_EQ(lp.size() % 2, 0u);
    auto d = turaev_cobracket(s, w);
    for (const auto& [uv, c] : d) {
      auto it = d.find({uv.second, uv.first});
      ASSERT_NE(it, d.end());
      EXPECT_EQ(it->second, -c);
    }
    long terms = 0;
    for (const auto& [uv, c] : d) terms += Rational(abs(c)).get_num().get_si();
    EXPECT_LE(terms, static_cast<long>(lp.size()));
    if (!d.empty()) ++nonzero;
  }
  EXPECT_GT(nonzero, 0);
}

TEST(Cobracket, LoopAroundPuncture) {
  // a1 followed by the boundary loop: one crossing, cut into a1 and a1 b1 A1 B1.
  Surface s({1, 1});
  auto w = s.require("a1 a1 b1 A1 B1");
  auto lp = self_linked_pairs(s, w.letters());
  ASSERT_EQ(lp.size(), 2u);
  EXPECT_EQ(lp[0].sign, -lp[1].sign);
  auto d = turaev_cobracket(s, w);
  ASSERT_EQ(d.size(), 2u);
  auto a = s.require("a1"), c = s.require("a1 b1 A1 B1");
  ASSERT_NE(d.find({a, c}), d.end());
  EXPECT_EQ(abs(d.at({a, c})), 1);
  EXPECT_EQ(d.at({c, a}), -d.at({a, c}));
}

TEST(Cobracket, ParallelPiecesCancel) {
  Surface s({1, 1});
  for (const char* w : {"a1 a1 b1 b1", "a1 b1 A1 b1"}) {
    auto c = s.require(w);
    EXPECT_EQ(self_linked_pairs(s, c.letters()).size(), 2u) << w;
    EXPECT_TRUE(turaev_cobracket(s, c).empty()) << w;
  }
}

// ---------------------------------------------------------------- axioms

TEST(Axioms, GoldmanTuraevIsAnInvolutiveLieBialgebra) {
  Surface s({2, 0});
  auto r = check_bialgebra_axioms(string_bialgebra(s), s.classes(2));
  EXPECT_TRUE(r.passed()) << (r.witnesses.empty() ? "" : r.witnesses[0].item);
}

TEST(Axioms, BoundarySurfaces) {
  for (SurfaceSpec spec : {SurfaceSpec{1, 1}, SurfaceSpec{1, 2}, SurfaceSpec{2, 1}}) {
    Surface s(spec);
    StringCheckOptions o;
    o.max_word = 3;
    o.pair_word = 2;
    o.samples = 150;
    auto r = check_string_identities(s, o);
    EXPECT_TRUE(r.passed()) << spec.genus << "," << spec.boundary << " "
                            << (r.witnesses.empty() ? "" : r.witnesses[0].item);
  }
}

TEST(Axioms, ClosedSurfaces) {
  for (SurfaceSpec spec : {SurfaceSpec{2, 0}, SurfaceSpec{1, 0}, SurfaceSpec{3, 0}}) {
    Surface s(spec);
    StringCheckOptions o;
    o.max_word = 3;
    o.pair_word = 2;
    o.samples = 200;
    o.seed = 5;
    auto r = check_string_identities(s, o);
    EXPECT_TRUE(r.passed()) << spec.genus << " " << (r.witnesses.empty() ? "" : r.witnesses[0].item);
  }
}

// ---------------------------------------------------------------- multi-strings

TEST(MultiString, UnitAndProductSigns) {
  Surface s({2, 0});
  auto x = StringSum::single(s.require("a1"));
  auto y = StringSum::single(s.require("b1"));
  EXPECT_EQ(multi_product(StringSum::unit(), y), y);
  EXPECT_EQ(multi_product(y, StringSum::unit()), y);
  StringSum cross(2);
  cross.add({s.require("a1"), s.require("b1")}, 1);
  EXPECT_EQ(multi_product(x, y), cross * -1);
  EXPECT_EQ(multi_product(x, y), multi_product(y, x) * -1);
  EXPECT_TRUE(multi_product(x, x).is_zero());
}

TEST(MultiString, DoubleSwapIsIdentity) {
  Surface s({2, 0});
  auto a = s.require("a1"), b = s.require("b1"), c = s.require("a2");
  StringSum t1(2), t2(2);
  t1.add({a, b, c}, 1);
  t2.add({b, a, c}, 1);
  EXPECT_EQ(t2, t1 * -1);
  StringSum t3(2);
  t3.add({a, b, c}, 1);
  t3.add({b, a, c}, 1);
  EXPECT_TRUE(t3.is_zero());
  StringSum odd(3);
  odd.add({b, a}, 1);
  odd.add({a, b}, -1);
  EXPECT_TRUE(odd.is_zero());
}

TEST(MultiString, OperatorsOnUnitAndSingles) {
  Surface s({2, 0});
  EXPECT_TRUE(delta_op(StringSum::unit(), s).is_zero());
  EXPECT_TRUE(nabla_op(StringSum::unit(), s).is_zero());
  for (const auto& w : s.classes(3)) EXPECT_TRUE(nabla_op(StringSum::single(w), s).is_zero());
  EXPECT_TRUE(delta_op(StringSum::single(s.require("a1")), s).is_zero());
}

TEST(MultiString, NablaOfTwoStrings) {
  Surface s({2, 0});
  auto a1 = s.require("a1"), b1 = s.require("b1");
  StringSum t(2);
  t.add({a1, b1}, 1);
  // k = 2, r2 = 2: sign (-1)^{3} times [a1, b1] = -(a1 b1)
  auto expected = StringSum::single(s.require("a1 b1")) * 1;
  EXPECT_EQ(nabla_op(t, s), expected);
  EXPECT_EQ(nabla_op(multi_product(StringSum::single(a1), StringSum::single(b1)), s), expected * -1);
}

TEST(MultiString, DeltaOfSingleIsCobracket) {
  Surface s({2, 0});
  for (const auto& w : s.classes(4)) {
    StringSum expected(2);
    for (const auto& [uv, c] : turaev_cobracket(s, w)) expected.add({uv.first, uv.second}, c);
    EXPECT_EQ(delta_op(StringSum::single(w), s), expected);
  }
}

TEST(MultiStringProperty, OperatorsRespectRelabeling) {
  std::mt19937_64 rng(31);
  Surface s({2, 0});
  auto cls = s.classes(3);
  for (int trial = 0; trial < 100; ++trial) {
    StringTuple t;
    int k = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) t.push_back(cls[rng() % cls.size()]);
    auto perm = t;
    std::size_t i = rng() % k, j = rng() % k;
    if (i == j) continue;
    std::swap(perm[i], perm[j]);
    EXPECT_EQ(delta_tuple(perm, s), delta_tuple(t, s) * -1);
    EXPECT_EQ(nabla_tuple(perm, s), nabla_tuple(t, s) * -1);
  }
}

TEST(MultiStringProperty, DeltaAndNablaSquareToZero) {
  std::mt19937_64 rng(32);
  Surface s({2, 0});
  auto cls = s.classes(3);
  for (int trial = 0; trial < 100; ++trial) {
    StringSum x = StringSum::unit();
    int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) x = multi_product(x, StringSum::single(cls[rng() % cls.size()]));
    EXPECT_TRUE(delta_op(delta_op(x, s), s).is_zero());
    EXPECT_TRUE(nabla_op(nabla_op(x, s), s).is_zero());
    auto anti = delta_op(nabla_op(x, s), s);
    anti += nabla_op(delta_op(x, s), s);
    EXPECT_TRUE(anti.is_zero());
  }
}

// ---------------------------------------------------------------- master-L

namespace {

struct StringSetup {
  Surface surface{SurfaceSpec{2, 0}};
  ClassDictionary dict{surface};
  OrbitSystem sys{2, {{"g1", 0, 1, true, Side::Plus}, {"g2", 0, 1, true, Side::Plus}}};

  GradedSeries cls(const std::string& name, const std::string& word) {
    dict.add(name, surface.require(word));
    auto key = sys.table()->intern_coefficient(name, -1);
    return GradedSeries::symbol(sys.table(), key);
  }
};

}  // namespace

TEST(MasterL, ZeroPotential) {
  StringSetup st;
  TruncationContext ctx;
  EXPECT_TRUE(check_master_L(st.sys, st.dict, st.sys.zero(), st.sys.zero(), st.sys.zero(), ctx).passed());
}

TEST(MasterL, SimpleClassIsMaurerCartan) {
  StringSetup st;
  TruncationContext ctx;
  auto L = mul(st.sys.p("g1"), st.cls("x", "a1"), TruncationContext::unbounded()) +
           mul(st.sys.p("g2"), st.cls("y", "a2"), TruncationContext::unbounded());
  EXPECT_TRUE(check_master_L(st.sys, st.dict, L, st.sys.zero(), st.sys.zero(), ctx).passed());
}

TEST(MasterL, IntersectingClassesFail) {
  StringSetup st;
  TruncationContext ctx;
  auto L = mul(st.sys.p("g1"), st.cls("x", "a1"), TruncationContext::unbounded()) +
           mul(st.sys.p("g2"), st.cls("y", "b1"), TruncationContext::unbounded());
  auto r = check_master_L(st.sys, st.dict, L, st.sys.zero(), st.sys.zero(), ctx);
  EXPECT_FALSE(r.passed());
  ASSERT_EQ(r.witnesses.size(), 1u);
  EXPECT_NE(r.witnesses[0].item.find("a1b1"), std::string::npos) << r.witnesses[0].item;
  EXPECT_NE(r.witnesses[0].item.find("h"), std::string::npos) << r.witnesses[0].item;
  EXPECT_EQ(abs(r.witnesses[0].coefficient), 1);
}

TEST(MasterL, SelfIntersectingClassFails) {
  StringSetup st;
  TruncationContext ctx;
  const Surface& s = st.surface;
  CyclicWord w;
  for (const auto& c : s.classes(4)) {
    if (!turaev_cobracket(s, c).empty()) {
      w = c;
      break;
    }
  }
  ASSERT_GT(w.length(), 0u);
  auto L = mul(st.sys.p("g1"), st.cls("z", s.render(w)), TruncationContext::unbounded());
  auto r = check_master_L(st.sys, st.dict, L, st.sys.zero(), st.sys.zero(), ctx);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.witness_count, 0u);
}

TEST(MasterL, CoefficientRoundTrip) {
  StringSetup st;
  auto x = st.cls("x", "a1"), y = st.cls("y", "b1");
  auto xy = mul(x, y, TruncationContext::unbounded());
  const auto& [m, c] = *xy.terms().begin();
  auto strings = coefficient_to_strings(m, *st.sys.table(), st.dict) * c;
  EXPECT_EQ(strings, multi_product(StringSum::single(st.surface.require("a1")),
                                   StringSum::single(st.surface.require("b1"))));
  EXPECT_EQ(strings_to_coefficient(strings, st.sys.table(), st.dict), xy);
}
