#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sft/cotangent.hpp"
#include "sft/problem.hpp"
#include "sft/surface.hpp"
#include "sft/weyl.hpp"

using namespace sft;

namespace {

OrbitSystem four_orbits() {
  std::vector<Orbit> os;
  for (int i = 0; i < 4; ++i) os.push_back({"g" + std::to_string(i + 1), i - 1, 1 + i % 3, true, Side::Single});
  return OrbitSystem(4, os);
}

GradedSeries dense(const OrbitSystem& sys, int degree) {
  GradedSeries s = sys.zero();
  for (const auto& o : sys.orbits()) {
    s += sys.q(o.name) + sys.p(o.name);
  }
  GradedSeries out = sys.one();
  const auto ctx = TruncationContext::unbounded();
  for (int i = 0; i < degree; ++i) out = mul(out, s, ctx);
  return out;
}

void BM_Star(benchmark::State& state) {
  auto sys = four_orbits();
  auto a = dense(sys, static_cast<int>(state.range(0)));
  auto b = dense(sys, static_cast<int>(state.range(0)));
  TruncationContext ctx;
  ctx.max_hbar = 8;
  ctx.max_p_degree = 8;
  for (auto _ : state) benchmark::DoNotOptimize(star(a, b, ctx));
  state.counters["terms"] = static_cast<double>(a.size());
}
BENCHMARK(BM_Star)->Arg(1)->Arg(2)->Arg(3);

void BM_Bracket(benchmark::State& state) {
  Surface s({2, 0});
  auto x = s.require("a1 b1 a2 B1 A1");
  auto y = s.require("b1 a2 b2 A2 B2 a1");
  for (auto _ : state) benchmark::DoNotOptimize(goldman_bracket(s, x, y));
}
BENCHMARK(BM_Bracket);

void BM_Cobracket(benchmark::State& state) {
  Surface s({2, 0});
  auto x = s.require("a1 a2 A1 A2 b1 b2 B1 B2");
  for (auto _ : state) benchmark::DoNotOptimize(turaev_cobracket(s, x));
}
BENCHMARK(BM_Cobracket);

void BM_BuildH(benchmark::State& state) {
  Surface s({2, 0});
  int cap = static_cast<int>(state.range(0));
  std::vector<CyclicWord> seeds{s.require("a1"), s.require("b1")};
  if (cap >= 4) seeds.push_back(s.require("a1 a2 A1 A2"));
  auto A = make_alphabet(s, close_alphabet(s, seeds, cap));
  auto sys = alphabet_system(s, A);
  for (auto _ : state) benchmark::DoNotOptimize(build_H_surface(s, A, sys, cap));
  state.counters["classes"] = static_cast<double>(A.size());
}
BENCHMARK(BM_BuildH)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Parse(benchmark::State& state) {
  auto sys = four_orbits();
  std::string text = print_series_file(sys, std::nullopt, {{"S", dense(sys, 3), std::nullopt}});
  for (auto _ : state) benchmark::DoNotOptimize(parse_problem(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Parse);

}  // namespace

BENCHMARK_MAIN();
