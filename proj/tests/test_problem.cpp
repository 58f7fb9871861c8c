#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "sft/problem.hpp"
#include "support/generators.hpp"

using namespace sft;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> sft_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".sft") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParseError parse_failure(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "parsed without error:\n" << text;
  return ParseError(ParseError::Kind::Syntax, {}, "none");
}

const char* kTwoOrbits = "orbit g1 cz=0 kappa=1\norbit g2 cz=0 kappa=2\norbit g3 cz=0 kappa=1\n";

}  // namespace

TEST(Parse, SingleMonomial) {
  auto p = parse_problem(std::string(kTwoOrbits) + "series H = (1/h) * q[g1]*q[g2]*p[g3]\n");
  const auto& H = p.find_series("H")->value;
  ASSERT_EQ(H.size(), 1u);
  const auto& [m, c] = *H.terms().begin();
  EXPECT_EQ(c, 1);
  EXPECT_EQ(m.hbar(), -1);
  EXPECT_EQ(m.q_degree(), 2);
  EXPECT_EQ(m.p_degree(), 1);
  EXPECT_EQ(H.homogeneous_degree(), -1);
}

TEST(Parse, ZeroSeries) {
  auto p = parse_problem("series Z = 0\n");
  EXPECT_TRUE(p.find_series("Z")->value.is_zero());
  EXPECT_EQ(p.header.n, 2);
}

TEST(Parse, UnclosedBracketPointsAtBracket) {
  auto e = parse_failure(std::string(kTwoOrbits) + "series H = q[g1\n");
  EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
  EXPECT_EQ(e.span().line, 4);
  EXPECT_EQ(e.span().column, 13);
  EXPECT_NE(std::string(e.what()).find("4:13"), std::string::npos);
}

TEST(Parse, StarProductOrdering) {
  auto p = parse_problem(std::string(kTwoOrbits) +
                         "series A = p[g1] * q[g1]\nseries B = h - q[g1]*p[g1]\n"
                         "series C = p[g2] * q[g2]\nseries D = 2*h - q[g2]*p[g2]\n");
  EXPECT_EQ(p.find_series("A")->value, p.find_series("B")->value);
  EXPECT_EQ(p.find_series("C")->value, p.find_series("D")->value);
}

TEST(Parse, RationalsPowersAndContinuation) {
  auto p = parse_problem(
      "header n=3\norbit x cz=0 kappa=1\n"
      "series A = 6/4 * q[x]^2 +\n  (1/h)^2 * (\n   p[x] - 1)\nseries B = 3/2*q[x]^2 + (1/h)*(1/h)*p[x] - (1/h)*(1/h)\n");
  EXPECT_EQ(p.find_series("A")->value, p.find_series("B")->value);
}

TEST(Parse, HbarPowers) {
  auto p = parse_problem("series A = h^3 - (1/h)\nseries B = h*h*h - (1/h)\n");
  EXPECT_EQ(p.find_series("A")->value, p.find_series("B")->value);
  EXPECT_EQ(p.find_series("A")->value.min_hbar(), -1);
}

TEST(Parse, DegreeAnnotation) {
  auto p = parse_problem(std::string(kTwoOrbits) + "series H : -1 = (1/h)*q[g1]*q[g2]*p[g3]\n");
  EXPECT_EQ(p.find_series("H")->degree, -1);
  auto e = parse_failure(std::string(kTwoOrbits) + "series H : -1 = q[g1]*q[g2]\n");
  EXPECT_EQ(e.kind(), ParseError::Kind::Grading);
  EXPECT_EQ(e.span().line, 4);
}

TEST(Parse, BadOrbitsHaveNoVariables) {
  auto e = parse_failure("orbit g cz=1 kappa=2 bad\nseries H = p[g]\n");
  EXPECT_EQ(e.kind(), ParseError::Kind::Undefined);
  EXPECT_EQ(e.span().column, 12);
}

TEST(Parse, StringCoefficients) {
  auto p = parse_problem(
      "orbit g cz=0 kappa=1 side=plus\nsurface genus=2 boundary=0\nclass x = b1 a1\n"
      "series L = p[g] * s[x]\n");
  ASSERT_TRUE(p.dictionary);
  EXPECT_EQ(*p.dictionary->find("x"), p.surface->require("a1 b1"));
  EXPECT_EQ(p.system->orbits()[0].side, Side::Plus);
  const auto& L = p.find_series("L")->value;
  ASSERT_EQ(L.size(), 1u);
  EXPECT_TRUE(L.terms().begin()->first.has_kind(SymbolKind::Coefficient));
  EXPECT_EQ(L.homogeneous_degree(), -2);
}

TEST(Parse, AugmentationKeysAreNormalized) {
  auto p = parse_problem(
      "orbit a cz=0 kappa=1\norbit b cz=0 kappa=1\n"
      "aug beta {\n  q[b] * q[a] -> 1/2\n  q[a] -> h, q[b] -> 0\n}\n");
  const auto& entries = p.find_augmentation("beta")->entries;
  ASSERT_EQ(entries.size(), 3u);
  auto beta = p.find_augmentation("beta")->augmentation();
  // q_b q_a = -q_a q_b for odd q's
  auto ab = parse_problem("orbit a cz=0 kappa=1\norbit b cz=0 kappa=1\nseries W = q[a]*q[b]\n");
  const auto& key = ab.find_series("W")->value.terms().begin()->first;
  EXPECT_EQ(beta.values.at(key).terms().begin()->second, Rational(-1, 2));
}

TEST(Parse, DuplicateAndOrderErrors) {
  EXPECT_EQ(parse_failure("series A = 0\nseries A = 1\n").kind(), ParseError::Kind::Semantic);
  EXPECT_EQ(parse_failure("orbit g cz=0 kappa=1\nheader n=3\n").kind(), ParseError::Kind::Semantic);
  EXPECT_EQ(parse_failure("orbit g kappa=1\n").kind(), ParseError::Kind::Syntax);
  EXPECT_EQ(parse_failure("orbit g cz=0 kappa=0\n").kind(), ParseError::Kind::Semantic);
  EXPECT_EQ(parse_failure("series A = 1/0\n").kind(), ParseError::Kind::Syntax);
  EXPECT_EQ(parse_failure("series A = 1 2\n").span().column, 14);
}

TEST(Print, CanonicalText) {
  auto p = parse_problem(
      "# comment\nheader   n=2  max_hbar=3\norbit g1 cz=0 kappa=1\nseries  H=p[g1]*q[g1]+2\n");
  EXPECT_EQ(print_problem(p),
            "header n=2 max_hbar=3\norbit g1 cz=0 kappa=1\nseries H = 2 + h - q[g1]*p[g1]\n");
}

TEST(Corpus, RoundTrip) {
  auto files = sft_files(SFT_CORPUS_DIR);
  ASSERT_GE(files.size(), 6u);
  for (const auto& f : files) {
    auto p = parse_problem(slurp(f));
    std::string once = print_problem(p);
    auto q = parse_problem(once);
    EXPECT_EQ(print_problem(q), once) << f;
    ASSERT_EQ(p.series.size(), q.series.size());
    for (std::size_t i = 0; i < p.series.size(); ++i) {
      EXPECT_EQ(p.series[i].value, q.series[i].value) << f << " " << p.series[i].name;
    }
  }
}

TEST(Corpus, ErrorsArePositionTagged) {
  auto files = sft_files(fs::path(SFT_CORPUS_DIR) / "errors");
  ASSERT_GE(files.size(), 10u);
  std::regex expect_re("^# expect ([0-9]+):([0-9]+) (.+)$");
  for (const auto& f : files) {
    std::string text = slurp(f);
    std::smatch m;
    std::string first = text.substr(0, text.find('\n'));
    ASSERT_TRUE(std::regex_match(first, m, expect_re)) << f;
    auto e = parse_failure(text);
    EXPECT_EQ(e.span().line, std::stoi(m[1])) << f << ": " << e.what();
    EXPECT_EQ(e.span().column, std::stoi(m[2])) << f << ": " << e.what();
    EXPECT_EQ(parse_error_kind_name(e.kind()), m[3].str()) << f;
    EXPECT_EQ(std::string(e.what()).rfind(std::string(m[1]) + ":" + std::string(m[2]) + ": ", 0), 0u);
  }
}

TEST(ParseProperty, PrintedSeriesReparse) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto sys = gen::random_orbit_system(rng, 1 + static_cast<int>(rng() % 3));
    auto s = gen::random_series(rng, sys.table(), 1 + static_cast<int>(rng() % 6), 3, -1, 3);
    std::string text = print_series_file(sys, std::nullopt, {{"S", s, std::nullopt}});
    auto p = parse_problem(text);
    EXPECT_EQ(p.find_series("S")->value, s) << text;
    EXPECT_EQ(print_problem(p), text);
  }
}

TEST(ParseProperty, SumsAndProductsMatchLibrary) {
  std::mt19937_64 rng(12);
  const auto ctx = TruncationContext::unbounded();
  for (int trial = 0; trial < 100; ++trial) {
    auto sys = gen::random_orbit_system(rng, 2);
    auto a = gen::random_series(rng, sys.table(), 3, 2, -1, 2);
    auto b = gen::random_series(rng, sys.table(), 3, 2, -1, 2);
    std::string text = print_series_file(sys, std::nullopt, {{"A", a, std::nullopt}, {"B", b, std::nullopt}});
    text += "series S = (" + a.to_string() + ") - 2 * (" + b.to_string() + ")\n";
    text += "series P = (" + a.to_string() + ") * (" + b.to_string() + ")\n";
    auto p = parse_problem(text);
    EXPECT_EQ(p.find_series("S")->value, a - b * Rational(2));
    EXPECT_EQ(p.find_series("P")->value, star(a, b, ctx));
  }
}
